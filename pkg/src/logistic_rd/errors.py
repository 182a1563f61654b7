"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end, so
each failure mode maps to a distinct process status.
"""


class LogisticRDError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InadmissibleParams(LogisticRDError):
    exit_code = 2


class BlowUp(LogisticRDError):
    """The denominator ``R - kappa*U`` vanished: the diffusivity diverges."""

    exit_code = 3


class NonPositiveD(LogisticRDError):
    exit_code = 4


class ToleranceFailure(LogisticRDError):
    exit_code = 5


class WrongRegime(LogisticRDError):
    exit_code = 6


class DomainSingularity(LogisticRDError):
    exit_code = 7


class EvaluationAtSingularity(LogisticRDError):
    exit_code = 8


class OutOfRange(LogisticRDError):
    exit_code = 9


class AboveRange(OutOfRange):
    """Kirchhoff value above the tabulated range.

    ``earliest_t`` holds the earliest time at which the solution is
    representable, when known.
    """

    exit_code = 10

    def __init__(self, message, earliest_t=None):
        super().__init__(message)
        self.earliest_t = earliest_t


class NormalizationOutOfRange(LogisticRDError):
    exit_code = 11


class NonPositiveP(LogisticRDError):
    exit_code = 12


class NoProtectiveRadius(LogisticRDError):
    exit_code = 13


class DegenerateNu(LogisticRDError):
    exit_code = 14


class StabilityViolation(LogisticRDError):
    exit_code = 15


class BCInconsistent(LogisticRDError):
    exit_code = 16


class GridMismatch(LogisticRDError):
    exit_code = 17


class PositivityViolation(LogisticRDError):
    exit_code = 18


class CheckFailed(LogisticRDError):
    """An embedded verification check did not pass."""

    exit_code = 19

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
