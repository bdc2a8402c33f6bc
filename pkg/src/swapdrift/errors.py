"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument failed a structural precondition (shape, range, norm)."""


class InternalError(RuntimeError):
    """A quantity that is guaranteed valid by construction broke its bounds."""


class UndefinedRatioError(ArithmeticError):
    """A ratio estimate whose denominator is statistically indistinguishable from zero."""


class ResourceLimitError(RuntimeError):
    """The requested computation exceeds a hard size limit."""


class ConfigError(ValueError):
    """One or more configuration fields are missing or invalid."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {p}" for p in self.problems))
