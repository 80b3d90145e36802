"""Self-contained elliptic integrals, Jacobi dn, and the theta function theta3.

Everything here is pure-python/numpy to full double precision: K and E by
arithmetic-geometric-mean iteration, dn by the descending Landen (Gauss)
recursion, theta3 and its log-derivatives by the rapidly convergent q-series.
Conventions: m is the elliptic *modulus* (K(m) = int_0^{pi/2} dtheta /
sqrt(1 - m^2 sin^2 theta)), so the parameter of the usual tables is m^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, NearZeroError

# Hard ceiling for the theta series; |q| -> 1 turns slow decay into an error.
THETA_MAX_TERMS = 512
THETA_TERM_TOL = 1e-16

# Callers evaluating the asymptotic formulas clamp the modulus here; K(m)
# diverges logarithmically at m = 1.
MODULUS_CLAMP = 1.0 - 1e-10


def _agm_sequence(m: float) -> tuple[float, float]:
    """AGM of (1, m') plus the E-series sum; m is the modulus.

    Returns (agm, s) with s = sum_n 2^(n-1) c_n^2 where c_0 = m.
    """
    a, b, c = 1.0, math.sqrt((1.0 - m) * (1.0 + m)), m
    s = 0.5 * c * c
    pow2 = 0.5
    prev = math.inf
    for _ in range(64):
        # quadratic convergence stalls at rounding level; stop there
        if abs(c) <= 4e-16 * a or abs(c) >= prev:
            break
        prev = abs(c)
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        pow2 *= 2.0
        s += pow2 * c * c
    else:
        raise ConvergenceError("AGM iteration failed to converge")
    return a, s


def elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind, modulus convention."""
    if not 0.0 <= m < 1.0:
        raise DomainError(f"elliptic_K needs 0 <= m < 1, got {m!r}")
    agm, _ = _agm_sequence(m)
    return 0.5 * math.pi / agm


def elliptic_E(m: float) -> float:
    """Complete elliptic integral of the second kind, modulus convention."""
    if not 0.0 <= m <= 1.0:
        raise DomainError(f"elliptic_E needs 0 <= m <= 1, got {m!r}")
    if m == 1.0:
        return 1.0
    agm, s = _agm_sequence(m)
    k = 0.5 * math.pi / agm
    return k * (1.0 - s)


def elliptic_KE(m: float) -> tuple[float, float]:
    """K(m) and E(m) from a single AGM run."""
    if not 0.0 <= m < 1.0:
        raise DomainError(f"elliptic_KE needs 0 <= m < 1, got {m!r}")
    agm, s = _agm_sequence(m)
    k = 0.5 * math.pi / agm
    return k, k * (1.0 - s)


def clamp_modulus(m: float) -> tuple[float, bool]:
    """Clamp m to <= 1 - 1e-10; the flag reports that clamping happened."""
    if m > MODULUS_CLAMP:
        return MODULUS_CLAMP, True
    return m, False


@dataclass(frozen=True)
class EllipticData:
    """The elliptic bundle consumed by every asymptotic formula.

    tau is the half-period ratio normalized so that
    2*tau = i K(m') / K(m) with m' = sqrt(1 - m^2).
    """

    m: float
    K: float
    E: float
    tau: complex

    @classmethod
    def from_modulus(cls, m: float) -> "EllipticData":
        if not 0.0 <= m < 1.0:
            raise DomainError(f"EllipticData needs 0 <= m < 1, got {m!r}")
        K, E = elliptic_KE(m)
        Kp = elliptic_K(math.sqrt((1.0 - m) * (1.0 + m)))
        return cls(m=m, K=K, E=E, tau=0.5j * Kp / K)

    @property
    def tau2(self) -> complex:
        """2*tau, the lattice parameter the theta formulas take."""
        return 2.0 * self.tau

    def legendre_residual(self) -> float:
        """E K' + E' K - K K' - pi/2; zero in exact arithmetic."""
        mp = math.sqrt((1.0 - self.m) * (1.0 + self.m))
        Kp, Ep = elliptic_KE(mp) if mp < 1.0 else (0.5 * math.pi, 0.5 * math.pi)
        return self.E * Kp + Ep * self.K - self.K * Kp - 0.5 * math.pi


def _sncndn(u: float, mc: float) -> tuple[float, float, float]:
    """Jacobi sn, cn, dn via the Gauss/Landen AGM recursion.

    mc is the complementary parameter 1 - m^2.  Classic algorithm
    (Abramowitz & Stegun 16.4 as organized in the usual sncndn routine).
    """
    CA = 1.0e-8  # accuracy of the recursion is O(CA^2)
    if mc == 0.0:
        cn = 1.0 / math.cosh(u)
        return math.tanh(u), cn, cn
    a, dn = 1.0, 1.0
    em: list[float] = []
    en: list[float] = []
    c = 0.5 * (a + math.sqrt(mc))
    for _ in range(16):
        em.append(a)
        mc = math.sqrt(mc)
        en.append(mc)
        c = 0.5 * (a + mc)
        if abs(a - mc) <= CA * a:
            break
        mc = a * mc
        a = c
    else:
        raise ConvergenceError("Landen recursion failed to terminate")
    u = c * u
    sn, cn = math.sin(u), math.cos(u)
    if sn != 0.0:
        a = cn / sn
        c = a * c
        for b, nb in zip(reversed(em), reversed(en)):
            a = c * a
            c = dn * c
            dn = (nb + a) / (b + a)
            a = c / b
        a = 1.0 / math.sqrt(c * c + 1.0)
        sn = math.copysign(a, sn)
        cn = c * sn
    return sn, cn, dn


def jacobi_dn(z: float, m: float) -> float:
    """dn(z|m): 2K(m)-periodic, dn(0|m)=1, dn(K|m)=sqrt(1-m^2)."""
    if not 0.0 <= m < 1.0:
        raise DomainError(f"jacobi_dn needs 0 <= m < 1, got {m!r}")
    if not math.isfinite(z):
        raise DomainError("jacobi_dn needs finite z")
    if m == 0.0:
        return 1.0
    # Reduce to one period before the recursion; sin/cos would lose
    # accuracy for very large |z| otherwise.
    period = 2.0 * elliptic_K(m)
    z = math.remainder(z, period)
    return _sncndn(z, (1.0 - m) * (1.0 + m))[2]


def _theta3_terms(z: complex, tau2: complex, nder: int) -> list[complex]:
    """theta3 and its first nder z-derivatives by symmetric summation."""
    if tau2.imag <= 0.0:
        raise DomainError("theta3 needs Im(tau2) > 0")
    sums = [complex(1.0, 0.0)] + [complex(0.0, 0.0)] * nder
    for n in range(1, THETA_MAX_TERMS + 1):
        qn = cmath.exp(1j * math.pi * n * n * tau2)
        ep = cmath.exp(2j * math.pi * n * z)
        em = 1.0 / ep
        tp, tm = qn * ep, qn * em
        mag = max(abs(tp), abs(tm))
        fac = 1.0
        for k in range(nder + 1):
            sums[k] += fac * (tp + ((-1.0) ** k) * tm)
            fac *= 2j * math.pi * n
        if mag < THETA_TERM_TOL:
            return sums
    raise ConvergenceError(
        "theta3 series needs more than %d terms (|q| too close to 1)"
        % THETA_MAX_TERMS
    )


def theta3(z: complex, tau2: complex) -> complex:
    """theta3(z; tau2) = sum_n exp(2*pi*i*n*z + pi*i*n^2*tau2)."""
    return _theta3_terms(complex(z), complex(tau2), 0)[0]


def dlog_theta3(z: float, tau2: complex, order: int) -> float:
    """First or second z-derivative of log theta3 at real z.

    For real z and purely imaginary tau2 the value is real, which is the
    only case the asymptotic formulas need.
    """
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order!r}")
    zc, tc = complex(z), complex(tau2)
    if zc.imag != 0.0 or tc.real != 0.0:
        raise DomainError("dlog_theta3 is defined for real z and tau2 in i*R+")
    t0, t1, *rest = _theta3_terms(zc, tc, order)
    if abs(t0) < 1e-12:
        raise NearZeroError(
            f"theta3({z!r}; {tau2!r}) = {t0!r} is too close to its zero set"
        )
    d1 = t1 / t0
    if order == 1:
        return d1.real
    return (rest[0] / t0 - d1 * d1).real
