"""Exception hierarchy shared by all kdvgas modules."""


class KdvGasError(Exception):
    """Base class for every error raised by this package."""


class DomainError(KdvGasError, ValueError):
    """Argument outside the mathematical domain of the function."""


class ConvergenceError(KdvGasError, RuntimeError):
    """An iteration or series failed to converge within its budget."""


class NearZeroError(KdvGasError, ArithmeticError):
    """Evaluation too close to a zero of theta3 (the theta divisor)."""


class DensityError(KdvGasError, ValueError):
    """Pole density is negative, non-normalizable, or otherwise unusable."""


class PositivityError(KdvGasError, ValueError):
    """Reflection coefficient fails the strict-positivity requirement."""


class OverflowGuard(KdvGasError, OverflowError):
    """Exponent bound exceeded; the direct solver refuses.

    The asymptotic formulas cover the regime this guard protects against.
    """


class ConditioningError(KdvGasError, RuntimeError):
    """Linear system estimated too ill-conditioned to trust (cond > 1e12)."""


class QuadratureError(KdvGasError, RuntimeError):
    """A band integral could not be evaluated (e.g. log of non-positive r)."""


class RangeError(KdvGasError, ValueError):
    """Requested point lies outside the window where a formula is defined."""


class DegeneracyError(KdvGasError, ValueError):
    """Elliptic modulus too close to 1 (edge of the modulated fan)."""


class ConfigError(KdvGasError, ValueError):
    """Run configuration rejected before any computation started."""
