"""KdV soliton-gas potentials evaluated three independent ways.

The package computes the one-reflection-coefficient soliton-gas potential
u(x, t) by

* exact N-soliton linear algebra (`kdvgas.nsoliton`),
* direct Fredholm solution of the gas problem (`kdvgas.fredholm`),
* closed-form elliptic/Whitham asymptotics (`kdvgas.asymptotics`),

and cross-validates the routes against each other (`kdvgas.cli`).
"""

from .errors import (
    ConditioningError,
    ConfigError,
    ConvergenceError,
    DegeneracyError,
    DensityError,
    DomainError,
    KdvGasError,
    NearZeroError,
    OverflowGuard,
    PositivityError,
    QuadratureError,
    RangeError,
)
from .special import EllipticData, dlog_theta3, elliptic_E, elliptic_K, jacobi_dn, theta3
from .spectral import (
    GasSpectrum,
    ReflectionCoefficient,
    SolitonEnsemble,
    norming_constants,
    sample_poles,
)

__all__ = [
    "KdvGasError",
    "DomainError",
    "ConvergenceError",
    "NearZeroError",
    "DensityError",
    "PositivityError",
    "OverflowGuard",
    "ConditioningError",
    "QuadratureError",
    "RangeError",
    "DegeneracyError",
    "ConfigError",
    "EllipticData",
    "elliptic_K",
    "elliptic_E",
    "jacobi_dn",
    "theta3",
    "dlog_theta3",
    "GasSpectrum",
    "ReflectionCoefficient",
    "SolitonEnsemble",
    "sample_poles",
    "norming_constants",
]

__version__ = "0.1.0"
