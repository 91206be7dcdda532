"""Exception types shared across the package."""


class HousingDssError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HousingDssError, ValueError):
    """A value or operation violates a domain invariant.

    ``field`` names the offending attribute/column when one exists.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class UnknownIdError(DomainError, KeyError):
    """A student/cohort/criterion id is not known to the receiver."""


class EmptyCohortError(DomainError):
    """An operation received an empty alternative set."""


class DuplicateIdError(DomainError):
    """The same student_id appears twice within one cohort."""


class ConfigError(HousingDssError):
    """Configuration is missing, contradictory, or carries unknown keys."""


class ParseError(HousingDssError):
    """An input file could not be parsed.

    ``line`` is the 1-based line (or record) number when known.
    """

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        super().__init__(message)
        self.line = line
        self.field = field


class NumericError(HousingDssError):
    """A numeric routine failed (non-convergence, division by zero weight).

    ``iterations`` carries the iteration count for non-convergence.
    """

    def __init__(self, message: str, iterations: int | None = None):
        super().__init__(message)
        self.iterations = iterations


class IntegrityError(HousingDssError):
    """A persisted payload fails its integrity (hash) check."""


class InconsistentJudgmentsError(DomainError):
    """Pairwise judgments exceed the acceptable consistency ratio (0.1)."""

    def __init__(self, message: str, cr: float):
        super().__init__(message)
        self.cr = cr
