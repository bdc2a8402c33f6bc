"""Command-line entry point.

Subcommands:

* ``simulate``   — run one drifting-source experiment from a JSON config
* ``nmin-sweep`` — tabulate measurement budgets against drift constants
* ``k-sweep``    — tabulate storage-noise budgets against pair separation
* ``hom``        — compare both interferometer coincidence code paths
* ``validate``   — run the built-in oracle suite

Exit codes: 0 success, 1 a validation or consistency check failed,
2 the inputs were unusable (bad config file, bad flag values).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import config_from_file
from .errors import ConfigError, InvalidInputError
from .harness import run_hom, run_k_sweep, run_nmin_sweep, run_simulate, run_validate


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swapdrift",
        description="Two-copy overlap measurements on a slowly drifting quantum source.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one experiment from a JSON config")
    sim.add_argument("--config", required=True, help="path to a JSON experiment config")
    sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    sim.add_argument("--out", default=None, help="CSV output path (default: config 'out' or stdout)")
    sim.add_argument("--workers", type=int, default=1, help="thread count across separations")
    sim.add_argument("--format", choices=["csv"], default="csv")

    nmin = sub.add_parser("nmin-sweep", help="budget table over drift constants")
    nmin.add_argument("--purities", type=_float_list, default=[0.8, 0.9, 1.0])
    nmin.add_argument("--constants", type=_float_list,
                      default=[0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1])
    nmin.add_argument("--variant", choices=["printed", "rederived", "both"], default="printed")
    nmin.add_argument("--out", default=None)
    nmin.add_argument("--workers", type=int, default=1)
    nmin.add_argument("--format", choices=["csv"], default="csv")

    ksw = sub.add_parser("k-sweep", help="budget table over pair separation under storage noise")
    ksw.add_argument("--purity", type=float, default=1.0)
    ksw.add_argument("--rate", type=float, default=0.001,
                     help="diffusive drift constant (per-interval distance growth)")
    ksw.add_argument("--dim", type=int, default=2)
    ksw.add_argument("--epsilons", type=_float_list, default=[0.0, 0.05, 0.1])
    ksw.add_argument("--k-min", type=int, default=2)
    ksw.add_argument("--k-max", type=int, default=300)
    ksw.add_argument("--variant", choices=["printed", "rederived", "both"], default="printed")
    ksw.add_argument("--no-decohere-distance-one", action="store_true",
                     help="leave the later copy of each pair undecohered")
    ksw.add_argument("--out", default=None)
    ksw.add_argument("--workers", type=int, default=1)
    ksw.add_argument("--format", choices=["csv"], default="csv")

    homp = sub.add_parser("hom", help="two-photon interferometer cross-check")
    homp.add_argument("--modes", type=int, default=2)
    homp.add_argument("--pairs", type=int, default=20)
    homp.add_argument("--seed", type=int, default=7)
    homp.add_argument("--out", default=None)
    homp.add_argument("--format", choices=["csv"], default="csv")

    val = sub.add_parser("validate", help="run the built-in oracle suite")
    val.add_argument("--seed", type=int, default=20260816)

    return parser


def _emit(doc, out: str | None) -> None:
    if out is None:
        sys.stdout.write(doc.render())
    else:
        doc.write(Path(out))


def _variants(flag: str) -> tuple[str, ...]:
    return ("printed", "rederived") if flag == "both" else (flag,)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "simulate":
            config = config_from_file(args.config, seed_override=args.seed)
            report = run_simulate(config, workers=max(1, args.workers))
            _emit(report.csv(), args.out if args.out is not None else config.out)
            return 0

        if args.command == "nmin-sweep":
            doc = run_nmin_sweep(
                purities=tuple(args.purities),
                constants=tuple(args.constants),
                variants=_variants(args.variant),
                workers=max(1, args.workers),
            )
            _emit(doc, args.out)
            return 0

        if args.command == "k-sweep":
            doc = run_k_sweep(
                purity=args.purity,
                rate=args.rate,
                dim=args.dim,
                epsilons=tuple(args.epsilons),
                k_min=args.k_min,
                k_max=args.k_max,
                variants=_variants(args.variant),
                decohere_nearest=not args.no_decohere_distance_one,
                workers=max(1, args.workers),
            )
            _emit(doc, args.out)
            return 0

        if args.command == "hom":
            doc, ok = run_hom(args.modes, args.pairs, args.seed)
            _emit(doc, args.out)
            if not ok:
                sys.stderr.write("hom: code paths disagree beyond tolerance\n")
                return 1
            return 0

        if args.command == "validate":
            report = run_validate(seed=args.seed)
            sys.stdout.write(report.to_json() + "\n")
            return 0 if report.passed else 1

    except ConfigError as exc:
        sys.stderr.write(f"config error:\n{exc}\n")
        return 2
    except InvalidInputError as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return 2

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
