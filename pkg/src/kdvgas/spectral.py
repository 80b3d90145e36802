"""Spectral band, reflection coefficient, and the finite soliton ensemble.

The gas lives on the band (eta1, eta2) of the rotated spectral line.  The
reflection coefficient is stored in rotated form r(zeta) = 2 r1(i zeta) on
that band only; the even extension r(-zeta) = r(zeta) is implied and never
stored.  A finite ensemble discretizes the gas: pole heights kappa_j by the
quantile rule, norming constants by the band-width discretization rule
c_j = (eta2 - eta1) r(kappa_j) / (2 pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import DensityError, DomainError, PositivityError

_VALIDATION_GRID = 2001


@dataclass(frozen=True)
class GasSpectrum:
    """Band endpoints 0 < eta1 < eta2; the modulus of the gas is eta1/eta2."""

    eta1: float
    eta2: float

    def __post_init__(self):
        if not (0.0 < self.eta1 < self.eta2) or not math.isfinite(self.eta2):
            raise DomainError(
                f"need 0 < eta1 < eta2, got eta1={self.eta1!r}, eta2={self.eta2!r}"
            )

    @property
    def modulus(self) -> float:
        return self.eta1 / self.eta2

    @property
    def width(self) -> float:
        return self.eta2 - self.eta1

    def to_dict(self) -> dict:
        return {"eta1": self.eta1, "eta2": self.eta2}


class ReflectionCoefficient:
    """Strictly positive r(zeta) on [eta1, eta2], rotated convention.

    kind is one of 'constant', 'polynomial' (in zeta^2), 'tabulated'
    (cubic interpolation of samples).  Positivity is checked on a dense
    grid at construction; analyticity of tabulated data is the caller's
    responsibility.
    """

    def __init__(self, kind: str, data, spectrum: GasSpectrum):
        self.kind = kind
        self.spectrum = spectrum
        if kind == "constant":
            self._r1 = float(data)
            self._eval = lambda z: np.full_like(np.asarray(z, float), 2.0 * self._r1)
        elif kind == "polynomial":
            self._coeffs = np.asarray(data, dtype=float)
            self._eval = lambda z: np.polynomial.polynomial.polyval(
                np.asarray(z, float) ** 2, self._coeffs
            )
        elif kind == "tabulated":
            zeta, values = data
            zeta = np.asarray(zeta, dtype=float)
            values = np.asarray(values, dtype=float)
            if zeta[0] > spectrum.eta1 or zeta[-1] < spectrum.eta2:
                raise DomainError("tabulated samples must cover [eta1, eta2]")
            self._spline = CubicSpline(zeta, values)
            self._eval = lambda z: self._spline(np.asarray(z, float))
        else:
            raise DomainError(f"unknown reflection kind {kind!r}")
        self.data = data
        self._validate_positive()

    def _validate_positive(self):
        grid = np.linspace(self.spectrum.eta1, self.spectrum.eta2, _VALIDATION_GRID)
        vals = self(grid)
        if not np.all(np.isfinite(vals)) or np.min(vals) <= 0.0:
            raise PositivityError(
                f"reflection coefficient must be > 0 on the band; "
                f"min sampled value {np.min(vals)!r}"
            )

    def __call__(self, zeta):
        out = self._eval(zeta)
        if np.isscalar(zeta) or np.ndim(zeta) == 0:
            return float(out)
        return out

    @classmethod
    def constant(cls, spectrum: GasSpectrum, r1: float = 1.0) -> "ReflectionCoefficient":
        """r1 is the pre-rotation value; stored r = 2*r1."""
        return cls("constant", r1, spectrum)

    @classmethod
    def polynomial(cls, spectrum: GasSpectrum, coeffs: Sequence[float]) -> "ReflectionCoefficient":
        """r(zeta) = coeffs[0] + coeffs[1] zeta^2 + coeffs[2] zeta^4 + ..."""
        return cls("polynomial", coeffs, spectrum)

    @classmethod
    def tabulated(cls, spectrum: GasSpectrum, zeta, values) -> "ReflectionCoefficient":
        return cls("tabulated", (zeta, values), spectrum)

    def to_dict(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "r1": self._r1}
        if self.kind == "polynomial":
            return {"kind": "polynomial", "coeffs": list(self._coeffs)}
        zeta, values = self.data
        return {
            "kind": "tabulated",
            "zeta": [float(z) for z in zeta],
            "r": [float(v) for v in values],
        }

    @classmethod
    def from_dict(cls, spec: dict, spectrum: GasSpectrum) -> "ReflectionCoefficient":
        kind = spec.get("kind", "constant")
        if kind == "constant":
            return cls.constant(spectrum, float(spec.get("r1", 1.0)))
        if kind == "polynomial":
            return cls.polynomial(spectrum, spec["coeffs"])
        if kind == "tabulated":
            return cls.tabulated(spectrum, spec["zeta"], spec["r"])
        raise DomainError(f"unknown reflection kind {kind!r}")


def spectrum_from_dict(doc: dict) -> tuple[GasSpectrum, ReflectionCoefficient]:
    """Parse {"eta1":..., "eta2":..., "reflection": {...}}."""
    spectrum = GasSpectrum(float(doc["eta1"]), float(doc["eta2"]))
    refl = ReflectionCoefficient.from_dict(doc.get("reflection", {}), spectrum)
    return spectrum, refl


def spectrum_to_dict(spectrum: GasSpectrum, refl: ReflectionCoefficient) -> dict:
    doc = spectrum.to_dict()
    doc["reflection"] = refl.to_dict()
    return doc


def sample_poles(
    N: int,
    spectrum: GasSpectrum,
    density: Callable[[float], float] | None = None,
) -> np.ndarray:
    """Pole heights kappa_j solving int_{eta1}^{kappa_j} rho = j/N.

    The default density is uniform on the band, giving equally spaced
    poles eta1 + j (eta2 - eta1)/N, j = 1..N (the outer endpoint is hit
    at j = N).
    """
    if N < 1:
        raise DomainError(f"need N >= 1, got {N}")
    a, b = spectrum.eta1, spectrum.eta2
    if density is None:
        j = np.arange(1, N + 1, dtype=float)
        return a + j * (b - a) / N

    from scipy.integrate import quad

    grid = np.linspace(a, b, 513)
    vals = np.array([density(z) for z in grid], dtype=float)
    if not np.all(np.isfinite(vals)) or np.min(vals) < 0.0:
        raise DensityError("density must be finite and nonnegative on the band")
    mass, _ = quad(density, a, b, limit=200)
    if not math.isfinite(mass) or mass <= 0.0:
        raise DensityError(f"density is not normalizable (mass {mass!r})")

    def cdf(z):
        val, _ = quad(density, a, z, limit=200)
        return val / mass

    kappas = np.empty(N)
    lo = a
    for j in range(1, N + 1):
        target = j / N
        if j == N:
            kappas[-1] = b
            break
        kappas[j - 1] = brentq(lambda z: cdf(z) - target, lo, b, xtol=1e-13)
        lo = kappas[j - 1]
    return kappas


def norming_constants(
    poles: Sequence[float],
    r: ReflectionCoefficient,
    N: int,
    spectrum: GasSpectrum,
) -> np.ndarray:
    """c_j = (eta2 - eta1) r1(i kappa_j)/pi = (eta2 - eta1) r(kappa_j)/(2 pi)."""
    kappa = np.asarray(poles, dtype=float)
    if np.min(kappa) <= spectrum.eta1 or np.max(kappa) > spectrum.eta2:
        raise DomainError("poles must lie in (eta1, eta2]")
    c = spectrum.width * r(kappa) / (2.0 * math.pi)
    if np.min(c) <= 0.0:
        raise PositivityError("norming constants must be positive")
    return c


@dataclass(frozen=True)
class SolitonEnsemble:
    """N poles at i*kappa_j with purely imaginary norming constants i*c_j.

    kappa is strictly increasing inside the (half-open) band (eta1, eta2];
    the uniform quantile rule places its last pole exactly at eta2.
    """

    N: int
    kappa: np.ndarray
    c: np.ndarray
    spectrum: GasSpectrum = field(repr=False)

    def __post_init__(self):
        kappa, c = np.asarray(self.kappa, float), np.asarray(self.c, float)
        if len(kappa) != self.N or len(c) != self.N:
            raise DomainError("kappa and c must both have length N")
        if np.any(np.diff(kappa) <= 0.0):
            raise DomainError("kappa must be strictly increasing")
        if kappa[0] <= self.spectrum.eta1 or kappa[-1] > self.spectrum.eta2:
            raise DomainError("kappa must lie in (eta1, eta2]")
        if np.min(c) <= 0.0:
            raise PositivityError("norming constants must all be positive")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_gas(
        cls,
        spectrum: GasSpectrum,
        r: ReflectionCoefficient,
        N: int,
        density: Callable[[float], float] | None = None,
    ) -> "SolitonEnsemble":
        kappa = sample_poles(N, spectrum, density)
        c = norming_constants(kappa, r, N, spectrum)
        return cls(N=N, kappa=kappa, c=c, spectrum=spectrum)
