"""Direct Nystrom solution of the soliton-gas problem on the band.

The potential is recovered from the scalar Fredholm equation of the second
kind that the gas jump relations reduce to,

    h(y) + (sqrt(rho(y))/2pi) int_band sqrt(rho(s)) h(s)/(s + y) ds
        = sqrt(rho(y)),
    rho(s; x, t) = r(s) exp(8 s^3 t - 2 s x),

via  lim lam (Y1 - 1) = (1/2pi) int sqrt(rho) h ds  and  u = 2 d/dx of that
limit.  The x-derivative is analytic: d/dx rho = -2 s rho makes the kernel
derivative separable, so h_x solves the already-factored system with a new
right-hand side and no finite differences enter u.

Normalization note: the 1/(2pi) kernel weight and sqrt(rho) right-hand side
are fixed by requiring consistency between the Cauchy-integral representation
of Y and its jump relation; the N-soliton route converges to exactly this
solution (see tests), which pins the convention.

Discretization is Gauss-Legendre Nystrom, symmetrized by the similarity
diag(sqrt(w)) so the stored matrix I + K is exactly symmetric and positive
definite (Cauchy-kernel Gram structure).  The matrix condition grows like
exp(exponent_max), so the solver escalates from float64 to mpmath fixed
precision once exponent_max passes FLOAT_EXPONENT_LIMIT; digits and node
counts then scale with exponent_max.  Past EXPONENT_GUARD the solver refuses
and the asymptotics module is the intended route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg as sla
from mpmath import mp, mpf
from mpmath import exp as mp_exp
from mpmath import matrix as mp_matrix
from mpmath import sqrt as mp_sqrt

from .errors import ConvergenceError, OverflowGuard
from .spectral import GasSpectrum

EXPONENT_GUARD = 690.0
FLOAT_EXPONENT_LIMIT = 18.0
DEFAULT_NODES = 200
RESIDUAL_LIMIT = 1e-12


@lru_cache(maxsize=32)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


@dataclass(frozen=True)
class NystromGrid:
    """Gauss-Legendre nodes/weights mapped onto (eta1, eta2)."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def gauss_legendre(cls, n: int, spectrum: GasSpectrum) -> "NystromGrid":
        x, w = _leggauss(n)
        half = 0.5 * spectrum.width
        return cls(n=n, nodes=half * x + 0.5 * (spectrum.eta1 + spectrum.eta2),
                   weights=half * w)


def exponent_max(spectrum: GasSpectrum, x: float, t: float) -> float:
    """max over the band of 8 s^3 t - 2 s x (the kernel's log-scale)."""
    ends = [spectrum.eta1, spectrum.eta2]
    if t > 0.0:
        s_crit = math.sqrt(x / (12.0 * t)) if x > 0.0 else None
        if s_crit is not None and spectrum.eta1 < s_crit < spectrum.eta2:
            ends.append(s_crit)
    return max(8.0 * s**3 * t - 2.0 * s * x for s in ends)


def mp_digits_for(expo: float) -> int:
    """Working digits once the kernel scale is exp(expo)."""
    return int(math.ceil(max(expo, 0.0) / math.log(10.0))) + 18


def nodes_for(spectrum: GasSpectrum, x: float, t: float, expo: float) -> int:
    """Node count resolving exp(8 s^3 t - 2 s x) to below the noise floor."""
    beta = max(abs(24.0 * t * s * s - 2.0 * x) for s in (spectrum.eta1, spectrum.eta2))
    half = 0.5 * spectrum.width
    target = expo / math.log(10.0) + 17.0  # digits the quadrature must reach
    n = 40
    while n < 800:
        ratio = 4.0 * n / (max(beta, 1e-9) * half * math.e)
        if ratio > 1.0 and 2.0 * n * math.log10(ratio) >= target:
            break
        n += 20
    return max(n + 20, 80)


@dataclass
class GasKernel:
    """Assembled symmetric Nystrom matrix I + K at one (x, t)."""

    spectrum: GasSpectrum
    x: float
    t: float
    grid: NystromGrid
    exponent_max: float
    mode: str  # 'float64' or 'mp'
    matrix: object  # np.ndarray or mpmath matrix
    d: object  # sqrt(w * rho) at the nodes
    sqrt_rho: object
    sqrt_w: object
    dps: int | None = None
    _chol: object = field(default=None, repr=False)

    def factor(self):
        if self._chol is None:
            if self.mode == "float64":
                self._chol = sla.cho_factor(self.matrix)
            else:
                with mp.workdps(self.dps):
                    self._chol = mp.cholesky(self.matrix)
        return self._chol

    def solve(self, rhs):
        """Solve (I + K) y = rhs with the cached factorization."""
        if self.mode == "float64":
            return sla.cho_solve(self.factor(), rhs)
        L = self.factor()
        n = self.grid.n
        with mp.workdps(self.dps):
            y = [mpf(0)] * n
            for i in range(n):
                acc = rhs[i]
                for k in range(i):
                    acc -= L[i, k] * y[k]
                y[i] = acc / L[i, i]
            z = [mpf(0)] * n
            for i in range(n - 1, -1, -1):
                acc = y[i]
                for k in range(i + 1, n):
                    acc -= L[k, i] * z[k]
                z[i] = acc / L[i, i]
        return z


def build_kernel(
    spectrum: GasSpectrum,
    r,
    x: float,
    t: float = 0.0,
    grid: NystromGrid | None = None,
    n: int = DEFAULT_NODES,
    mode: str | None = None,
) -> GasKernel:
    """Assemble I + K, symmetrized by sqrt(weights) so it is exactly symmetric.

    r is any callable giving the reflection coefficient on the band.
    Escalates to mpmath entries once exponent_max > FLOAT_EXPONENT_LIMIT
    (float64 would lose the answer to roundoff well before overflow).
    """
    expo = exponent_max(spectrum, x, t)
    if expo > EXPONENT_GUARD:
        raise OverflowGuard(
            f"kernel exponent {expo:.1f} exceeds {EXPONENT_GUARD}; "
            "use the asymptotics route at this (x, t)"
        )
    if mode is None:
        mode = "float64" if expo <= FLOAT_EXPONENT_LIMIT else "mp"

    if mode == "float64":
        grid = grid or NystromGrid.gauss_legendre(n, spectrum)
        s, w = grid.nodes, grid.weights
        rho = np.asarray(r(s), dtype=float) * np.exp(8.0 * s**3 * t - 2.0 * s * x)
        sqrt_rho = np.sqrt(rho)
        sqrt_w = np.sqrt(w)
        d = sqrt_w * sqrt_rho
        M = np.eye(grid.n) + d[:, None] * d[None, :] / (
            2.0 * math.pi * (s[:, None] + s[None, :])
        )
        return GasKernel(spectrum, x, t, grid, expo, "float64", M, d, sqrt_rho, sqrt_w)

    dps = mp_digits_for(expo)
    if grid is None:
        grid = NystromGrid.gauss_legendre(max(n, nodes_for(spectrum, x, t, expo)), spectrum)
    nn = grid.n
    with mp.workdps(dps):
        S = [mpf(float(v)) for v in grid.nodes]
        sqrt_w = [mp_sqrt(mpf(float(v))) for v in grid.weights]
        r_vals = np.asarray(r(grid.nodes), dtype=float)
        sqrt_rho = [
            mp_sqrt(mpf(float(r_vals[i])) * mp_exp(8 * S[i] ** 3 * t - 2 * S[i] * x))
            for i in range(nn)
        ]
        d = [sqrt_w[i] * sqrt_rho[i] for i in range(nn)]
        M = mp_matrix(nn, nn)
        two_pi = 2 * mp.pi
        for i in range(nn):
            for j in range(i + 1):
                v = d[i] * d[j] / (two_pi * (S[i] + S[j]))
                M[i, j] = v
                M[j, i] = v
            M[i, i] += 1
    return GasKernel(spectrum, x, t, grid, expo, "mp", M, d, sqrt_rho, sqrt_w, dps=dps)


@dataclass
class FredholmSolve:
    """Density solve at one (x, t): h at the nodes plus diagnostics."""

    h: np.ndarray
    F: float  # lim lam (Y1 - 1) = (1/2pi) int sqrt(rho) h ds
    exponent_max: float
    residual: float
    min_eig: float | None = None


def _solve_raw(kernel: GasKernel, want_u: bool):
    """One or two solves on the given kernel: (h, F, u_or_None, residual)."""
    s = kernel.grid.nodes
    if kernel.mode == "float64":
        rhs = kernel.sqrt_w * kernel.sqrt_rho
        y = kernel.solve(rhs)
        rhs_norm = np.linalg.norm(rhs)
        residual = (
            float(np.linalg.norm(kernel.matrix @ y - rhs) / rhs_norm)
            if rhs_norm > 0.0
            else 0.0
        )
        h = y / kernel.sqrt_w
        F = float(kernel.d @ y) / (2.0 * math.pi)
        u = None
        if want_u:
            rhs2 = kernel.sqrt_w * (-s * kernel.sqrt_rho) + kernel.d * F
            yx = kernel.solve(rhs2)
            u = float(-(s * kernel.d) @ y + kernel.d @ yx) / math.pi
        return h, F, u, residual

    n = kernel.grid.n
    with mp.workdps(kernel.dps):
        rhs = [kernel.sqrt_w[i] * kernel.sqrt_rho[i] for i in range(n)]
        y = kernel.solve(rhs)
        F = sum(kernel.d[i] * y[i] for i in range(n)) / (2 * mp.pi)
        h = np.array([float(y[i] / kernel.sqrt_w[i]) for i in range(n)])
        u = None
        if want_u:
            S = [mpf(float(v)) for v in s]
            rhs2 = [
                kernel.sqrt_w[i] * (-S[i] * kernel.sqrt_rho[i]) + kernel.d[i] * F
                for i in range(n)
            ]
            yx = kernel.solve(rhs2)
            u = float(
                (
                    -sum(S[i] * kernel.d[i] * y[i] for i in range(n))
                    + sum(kernel.d[i] * yx[i] for i in range(n))
                )
                / mp.pi
            )
    return h, float(F), u, 0.0


def _escalate(kernel: GasKernel) -> GasKernel:
    """Rebuild a float64 kernel with mpmath entries (same grid)."""
    bare = _bare_r(kernel)
    return build_kernel(
        kernel.spectrum, bare, kernel.x, kernel.t, grid=kernel.grid, mode="mp"
    )


def _bare_r(kernel: GasKernel):
    """Recover r(s) on the kernel's own grid (for rebuilds)."""
    s = kernel.grid.nodes
    rho = np.asarray(kernel.sqrt_rho, dtype=float) ** 2
    bare = rho * np.exp(-(8.0 * s**3 * kernel.t - 2.0 * s * kernel.x))

    def r(query):
        return np.interp(np.asarray(query, dtype=float), s, bare)

    return r


def solve_density(kernel: GasKernel) -> FredholmSolve:
    """Solve (I + K) h = sqrt(rho) in the symmetrized variables.

    If float64 roundoff pushes the relative residual past RESIDUAL_LIMIT
    the solve is redone with mpmath entries on the same grid.
    """
    h, F, _, residual = _solve_raw(kernel, want_u=False)
    if kernel.mode == "float64" and residual > RESIDUAL_LIMIT:
        h, F, _, residual = _solve_raw(_escalate(kernel), want_u=False)
    if not np.all(np.isfinite(h)):
        raise ConvergenceError("density solve produced non-finite values")
    return FredholmSolve(h=h, F=F, exponent_max=kernel.exponent_max, residual=residual)


def potential_from_kernel(kernel: GasKernel) -> float:
    """u = 2 d/dx [(1/2pi) int sqrt(rho) h ds], derivative taken analytically.

    d/dx sqrt(rho) = -s sqrt(rho) makes the kernel's x-derivative separable,
    so h_x solves the same factored matrix with right-hand side
    -s sqrt(rho) + sqrt(rho) F; one factorization serves both solves.
    """
    _, _, u, residual = _solve_raw(kernel, want_u=True)
    if kernel.mode == "float64" and residual > RESIDUAL_LIMIT:
        _, _, u, _ = _solve_raw(_escalate(kernel), want_u=True)
    return u


def evaluate_potential(
    spectrum: GasSpectrum,
    r,
    x: float,
    t: float = 0.0,
    tol: float | None = None,
    n: int = DEFAULT_NODES,
) -> float:
    """Gas potential u(x, t); with tol set, verifies Nystrom refinement.

    tol compares the n-node and 2n-node answers and raises ConvergenceError
    if they differ by more than tol.
    """
    kernel = build_kernel(spectrum, r, x, t, n=n)
    u = potential_from_kernel(kernel)
    if tol is not None:
        grid2 = NystromGrid.gauss_legendre(2 * kernel.grid.n, spectrum)
        kernel2 = build_kernel(spectrum, r, x, t, grid=grid2, mode=kernel.mode)
        u2 = potential_from_kernel(kernel2)
        if abs(u - u2) > tol:
            raise ConvergenceError(
                f"|u({kernel.grid.n}) - u({kernel2.grid.n})| = {abs(u - u2):.3e} "
                f"exceeds tol = {tol:.3e}"
            )
        return u2
    return u


def positivity_report(kernel: GasKernel) -> float:
    """Smallest eigenvalue of the symmetrized I + K.

    Structurally >= 1 (Cauchy-Gram kernel); computed in float64, so the
    reported value resolves the 1 - 1e-8 threshold only while
    eps * ||I + K|| stays below it, i.e. for moderate exponent_max.
    """
    if kernel.mode == "float64":
        M = kernel.matrix
    else:
        M = np.array([[float(kernel.matrix[i, j]) for j in range(kernel.grid.n)]
                      for i in range(kernel.grid.n)])
    return float(sla.eigvalsh(M)[0])
