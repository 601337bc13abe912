"""Radial grid, quadrature, spherical Poisson solve and the two integrators.

The grid is uniform with ``r[0] = 0``.  Fields are plain arrays wrapped with
their grid so that solutions produced on differently scaled grids stay
self-describing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from . import _kernels
from .errors import BracketError, InvalidDensityError, StepSizeError

DEFAULT_R_MAX = 40.0
DEFAULT_POINTS = 8001

# node counting ignores this trailing fraction of the grid
TAIL_FRACTION = 0.02


@dataclass(frozen=True)
class RadialGrid:
    r_max: float = DEFAULT_R_MAX
    n: int = DEFAULT_POINTS

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("a radial grid needs at least two points")
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")

    @property
    def h(self) -> float:
        return self.r_max / (self.n - 1)

    @property
    def r(self) -> np.ndarray:
        return np.linspace(0.0, self.r_max, self.n)

    def scaled(self, factor) -> "RadialGrid":
        """Same node count, lengths multiplied by ``factor``."""
        return RadialGrid(self.r_max * factor, self.n)


@dataclass(frozen=True)
class RadialField:
    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def r(self):
        return self.grid.r

    def __call__(self, r):
        """Linear interpolation, zero beyond r_max."""
        return np.interp(r, self.grid.r, self.values, right=0.0)


def radial_integral(values, grid: RadialGrid) -> float:
    """``∫ f(r) 4π r² dr`` by composite Simpson over the whole grid."""
    r = grid.r
    return float(simpson(4.0 * np.pi * r**2 * np.asarray(values), x=r))


def norm3d(psi: RadialField) -> float:
    """Three-dimensional norm ``∫|ψ|² 4π r² dr``."""
    return radial_integral(psi.values**2, psi.grid)


def radial_derivative(values, h):
    """Fourth-order centred first derivative of an even function of r."""
    f = np.asarray(values, dtype=float)
    n = f.size
    if n < 5:
        return np.gradient(f, h)
    # even extension across r = 0
    ext = np.concatenate([f[2:0:-1], f])
    d = np.empty(n)
    d[: n - 2] = (ext[0 : n - 2] - 8 * ext[1 : n - 1] + 8 * ext[3 : n + 1] - ext[4 : n + 2]) / (12 * h)
    d[n - 2 :] = np.gradient(f, h, edge_order=2)[n - 2 :]
    d[0] = 0.0
    return d


def value_at_origin(values, r):
    """Even-polynomial extrapolation ``a + b r² + d r⁴`` from the first three nodes past 0."""
    x = r[1:4] ** 2
    A = np.vander(x, 3, increasing=True)
    return float(np.linalg.solve(A, values[1:4])[0])


def poisson_gravity(density: RadialField, tol=1e-12) -> RadialField:
    """Gravity-like potential of a spherical density.

    Returns ``V_g(r) = -2 [m(r)/r + ∫_r^{r_max} 4π s ρ(s) ds]``, the solution of
    ``ΔV_g = 8πρ`` that is regular at the origin and vanishes at infinity.
    """
    rho = density.values
    scale = max(float(np.max(np.abs(rho))), 1.0e-300)
    if np.any(rho < -tol * scale):
        raise InvalidDensityError("density has negative values below tolerance")
    r = density.grid.r
    enclosed = cumulative_simpson(4.0 * np.pi * r**2 * rho, x=r, initial=0.0)
    outer_cum = cumulative_simpson(4.0 * np.pi * r * rho, x=r, initial=0.0)
    outer = outer_cum[-1] - outer_cum
    inner = np.zeros_like(r)
    inner[1:] = enclosed[1:] / r[1:]
    return RadialField(density.grid, -2.0 * (inner + outer))


@dataclass(frozen=True)
class CoupledShot:
    """Result of one outward integration of the coupled orbital/potential system."""

    psi: RadialField
    dpsi: np.ndarray
    W: RadialField
    status: int
    last: int

    @property
    def diverged_at(self):
        return None if self.status == _kernels.OPEN else self.last

    @property
    def tail_sign(self) -> int:
        return -1 if self.status == _kernels.TOO_LOW else 1


def integrate_coupled(c, g, psi0, W0, grid: RadialGrid) -> CoupledShot:
    """Shoot ``ψ`` and ``W = V_g - ε`` outward from ``r = 0``.

    Integrates ``ψ'' + 2ψ'/r = (g²r² + 8πcψ² + W)ψ`` and ``W'' + 2W'/r = 8πψ²``
    with ``ψ(0) = psi0``, ``W(0) = W0`` and vanishing slopes, using a series
    start through r⁴ and classical RK4.  Integration stops as soon as the
    orbital crosses zero (``tail_sign = -1``) or turns upward
    (``tail_sign = +1``); values past the stopping point are zero.
    """
    psi, dpsi, W, _, status, last = _kernels.shoot_coupled(
        float(c), float(g), float(psi0), float(W0), grid.h, grid.n
    )
    if last < 2 and status != _kernels.TOO_HIGH and status != _kernels.TOO_LOW:
        raise StepSizeError("integration overflowed before three grid points")
    if last < 2 and not np.all(np.isfinite(psi[: last + 1])):
        raise StepSizeError("integration overflowed before three grid points")
    if last < grid.n - 1:
        # keep W meaningful beyond the stop: continue it with zero density
        W = W.copy()
        W[last + 1 :] = W[last]
    return CoupledShot(RadialField(grid, psi), dpsi, RadialField(grid, W), status, last)


def _nodes(f, h, f0u0, count_until):
    nodes, _ = _kernels.count_nodes(f, h, f0u0, count_until)
    return nodes


def numerov_ground_state(
    V_total: RadialField, eps_lo, eps_hi, tol_eps=1e-13, origin_limit=0.0, max_iter=200
):
    """Nodeless eigenpair of ``-u'' + V u = ε u`` with ``u(0) = u(r_max) = 0``.

    ε is located by bisection on the node count of the outward Numerov
    solution (the last ``TAIL_FRACTION`` of the grid is not counted).  The
    eigenfunction is then assembled from an outward and an inward sweep
    matched at the outer classical turning point, and normalised so that
    ``∫u² dr = 1/(4π)``, i.e. ``ψ = u/r`` has unit three-dimensional norm.

    For a Coulomb-like potential pass ``origin_limit = lim r V(r)`` (e.g. -2
    for ``V = -2/r``); ``V_total[0]`` is then ignored.

    Returns ``(u, eps)``.
    """
    grid = V_total.grid
    V = np.array(V_total.values, dtype=float)
    r = grid.r
    h = grid.h
    n = grid.n
    f0u0 = float(origin_limit)
    count_until = int((1.0 - TAIL_FRACTION) * (n - 1))

    lo, hi = float(eps_lo), float(eps_hi)
    if not lo < hi:
        raise ValueError("eps_lo must be below eps_hi")
    if _nodes(V - lo, h, f0u0, count_until) > 0:
        raise BracketError(f"ground state lies below eps_lo = {lo}", direction="lower")
    if _nodes(V - hi, h, f0u0, count_until) == 0:
        raise BracketError(f"no nodeless state below eps_hi = {hi}", direction="upper")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol_eps * max(1.0, abs(mid)) or mid <= lo or mid >= hi:
            break
        if _nodes(V - mid, h, f0u0, count_until) == 0:
            lo = mid
        else:
            hi = mid
    eps = 0.5 * (lo + hi)

    f = V - eps
    allowed = np.nonzero(f[1:] < 0.0)[0]
    match = int(allowed[-1]) + 1 if allowed.size else n // 2
    match = min(max(match, 4), n - 6)
    u_out, _, last = _kernels.numerov_outward(f, h, f0u0, match)
    if last < match:
        match = last
    u_in = _kernels.numerov_inward(f, h, match - 1)
    u = np.empty(n)
    u[: match + 1] = u_out[: match + 1]
    scale = u_out[match] / u_in[match] if u_in[match] != 0.0 else 0.0
    u[match + 1 :] = u_in[match + 1 :] * scale
    u[0] = 0.0
    if u[match] < 0:
        u = -u
    norm = 4.0 * np.pi * simpson(u**2, x=r)
    u /= np.sqrt(norm)
    return RadialField(grid, u), eps


def orbital_from_u(u: RadialField) -> RadialField:
    """``ψ = u/r`` with the origin value extrapolated."""
    r = u.grid.r
    psi = np.empty_like(u.values)
    psi[1:] = u.values[1:] / r[1:]
    psi[0] = value_at_origin(psi, r)
    return RadialField(u.grid, psi)
