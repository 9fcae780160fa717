"""Exceptions raised by the :mod:`qabel` package.

Every error derives from :class:`QabelError`.  Errors caused by bad
input also derive from :class:`ValueError`, so callers that only care
about "wrong argument" can keep catching the builtin.

"""

__all__ = (
    'ConfigError',
    'DegenerateMetricError',
    'DomainError',
    'ObstructionSignal',
    'QabelError',
    'QuadratureError',
    'SingularEvaluationError',
)


class QabelError(Exception):
    """Base class of all package errors."""


class DomainError(QabelError, ValueError):
    """Argument outside the domain of an operation."""


class SingularEvaluationError(DomainError):
    """Evaluation inside an excision tube or at a zero of a map."""


class DegenerateMetricError(DomainError):
    """Hermitian metric is not positive or not compatible with ``j``."""


class ConfigError(QabelError, ValueError):
    """Configuration file or override cannot be used."""


class QuadratureError(QabelError):
    """Quadrature did not reach the requested accuracy."""


class ObstructionSignal(QabelError):
    """A solvability condition failed.

    Raised by the curve pipeline when the divisors are not
    Abel-Jacobi equivalent.  It is a result, not a crash: the suites
    catch it and record the obstruction.

    """
