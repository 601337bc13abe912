"""Outward shooting of the coupled orbital/potential system with bisection.

For a fixed central amplitude the offset ``W0 = V_g(0) - ε`` is bisected
between shots whose orbital crosses zero and shots whose orbital turns
upward.  The converged, un-normalised profile is then brought to unit norm:

* without trap (g = 0) through the exact dilation family
  ``ψ(r) -> λ² ψ(λ r)``, which maps ``c -> c/λ²``, ``ε -> λ² ε`` and the
  norm ``M -> λ M``.  Fixing the raw amplitude at 1, the single family
  parameter ``s = c ψ(0)`` enumerates every self-bound solution, both
  branches included;
* with trap (g > 0) by an outer root-find on the central amplitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import _kernels
from .errors import ConvergenceError, NoSolutionError, StepSizeError
from .model import ModelParams
from .radial import RadialField, RadialGrid, integrate_coupled, norm3d

LOWER = "lower"
UPPER = "upper"
BRANCHES = (LOWER, UPPER)

W_TOL = 1e-12
NORM_TOL = 1e-9


@dataclass(frozen=True)
class RadialSolution:
    """A normalised s-wave stationary state ``(ψ, V_g, ε)`` at ``params``."""

    params: ModelParams
    psi: RadialField
    V_g: RadialField
    eps: float
    branch: str = LOWER
    solver: str = "shooting"

    @property
    def grid(self) -> RadialGrid:
        return self.psi.grid

    @property
    def psi0(self) -> float:
        return float(self.psi.values[0])

    def potential(self) -> np.ndarray:
        """Full mean-field potential ``g²r² + 8πc|ψ|² + V_g`` on the grid."""
        r = self.grid.r
        p = self.params
        return p.g**2 * r**2 + 8.0 * np.pi * p.c * self.psi.values**2 + self.V_g.values


@dataclass(frozen=True)
class RawShot:
    """Bisection-converged, un-normalised profile for one ``(c_raw, g, psi0)``.

    ``psi`` is truncated (set to zero) where the last shot starts to diverge;
    ``W`` is continued beyond that point as the exterior ``-2M/r`` solution.
    """

    c_raw: float
    g: float
    psi0: float
    W0: float
    psi: RadialField
    W: RadialField
    mass: float
    eps: float
    cutoff: int
    converged: bool

    @property
    def grid(self):
        return self.psi.grid

    def gravity_potential(self) -> np.ndarray:
        """``V_g = W + ε`` (vanishing at infinity)."""
        return self.W.values + self.eps


def _classify(c, g, psi0, W0, grid):
    return _kernels.shoot_coupled(c, g, psi0, W0, grid.h, grid.n)[4]


def _bracket_w0(c, g, psi0, grid):
    # Q(0) = 8πcψ0² + W0 > 0 makes the orbital rise from the start
    base = -8.0 * math.pi * c * psi0**2
    hi, step = base + 1.0, 1.0
    for _ in range(200):
        if _classify(c, g, psi0, hi, grid) != _kernels.TOO_LOW:
            break
        hi += step
        step *= 2.0
    else:
        raise ConvergenceError("could not find an upper W0 bracket")
    lo, step = hi - 1.0, 1.0
    for _ in range(200):
        if _classify(c, g, psi0, lo, grid) == _kernels.TOO_LOW:
            break
        hi = lo
        lo -= step
        step *= 2.0
    else:
        raise ConvergenceError("could not find a lower W0 bracket")
    return lo, hi


def shoot_raw(c_raw, g, psi0, grid: RadialGrid | None = None, w_tol=W_TOL) -> RawShot:
    """Bisect ``W0`` at fixed central amplitude until the orbital decays.

    Raises
    ------
    ValueError
        If ``psi0 <= 0`` or ``g < 0``.
    """
    if not psi0 > 0:
        raise ValueError(f"central amplitude must be positive, got {psi0}")
    if not g >= 0:
        raise ValueError(f"trap frequency must be >= 0, got {g}")
    grid = grid or RadialGrid()
    c_raw, g, psi0 = float(c_raw), float(g), float(psi0)
    lo, hi = _bracket_w0(c_raw, g, psi0, grid)
    converged = False
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if hi - lo <= w_tol or mid <= lo or mid >= hi:
            converged = True
            break
        if _classify(c_raw, g, psi0, mid, grid) == _kernels.TOO_LOW:
            lo = mid
        else:
            hi = mid

    return _assemble(c_raw, g, psi0, lo, hi, grid, converged)


def _assemble(c_raw, g, psi0, lo, hi, grid, converged):
    """Average the two bracketing shots and continue the orbital with WKB.

    The shots agree until the growing solution takes over; the orbital is
    kept up to the last node where they agree to ``1e-3`` relative, and
    continued beyond it as ``ψ ∝ exp(-∫√Q)/(r Q^{1/4})`` with the exterior
    ``Q = g²r² - ε - 2M/r``.
    """
    s_hi = integrate_coupled(c_raw, g, psi0, hi, grid)
    s_lo = integrate_coupled(c_raw, g, psi0, lo, grid)
    r = grid.r
    common = min(s_hi.last, s_lo.last)
    if common < 2:
        raise StepSizeError(f"profile at c = {c_raw}, psi0 = {psi0} is not resolved by the grid")
    a = s_hi.psi.values[: common + 1]
    b = s_lo.psi.values[: common + 1]
    avg = 0.5 * (a + b)
    split = np.abs(a - b) > 1e-3 * np.abs(avg)
    k = int(np.argmax(split)) - 1 if split.any() else common
    k = max(k, 2)
    W_in = 0.5 * (s_hi.W.values[: k + 1] + s_lo.W.values[: k + 1])

    psi = np.zeros(grid.n)
    psi[: k + 1] = avg[: k + 1]
    inner = RadialField(grid, psi)
    mass_k = norm3d(inner)
    eps = -(W_in[k] + 2.0 * mass_k / r[k])
    tail_ok = True
    if k < grid.n - 1:
        rt = r[k:]
        Q = g**2 * rt**2 - eps - 2.0 * mass_k / rt
        if Q[0] <= 0 or np.any(Q <= 0):
            tail_ok = False
        else:
            sq = np.sqrt(Q)
            phase = np.concatenate([[0.0], np.cumsum(0.5 * (sq[1:] + sq[:-1]) * grid.h)])
            psi[k:] = psi[k] * (rt[0] / rt) * (Q[0] / Q) ** 0.25 * np.exp(-phase)
    psi_field = RadialField(grid, psi)
    mass = norm3d(psi_field)
    W = np.empty(grid.n)
    W[: k + 1] = W_in
    W[k + 1 :] = -eps - 2.0 * mass / r[k + 1 :]
    tail = abs(psi[k]) / psi0
    return RawShot(
        c_raw, g, psi0, hi, psi_field, RadialField(grid, W), mass, eps, k,
        converged and tail_ok and tail < 1e-2,
    )


def _raw_grid(s, grid):
    # narrow raw profiles on the far upper branch need a finer raw grid
    if s < -1.0:
        return RadialGrid(grid.r_max / math.sqrt(-s), grid.n)
    return grid


def _normalise_selfbound(shot: RawShot, branch) -> RadialSolution:
    M = shot.mass
    final = shot.grid.scaled(M)
    psi = shot.psi.values / M**2
    V_g = shot.gravity_potential() / M**2
    params = ModelParams(c=shot.c_raw * M**2, g=0.0)
    return RadialSolution(
        params=params,
        psi=RadialField(final, psi),
        V_g=RadialField(final, V_g),
        eps=shot.eps / M**2,
        branch=branch,
        solver="shooting",
    )


def selfbound_member(s, grid: RadialGrid | None = None, branch=LOWER, w_tol=W_TOL) -> RadialSolution:
    """Normalised self-bound solution with family parameter ``s = c·ψ(0)``.

    The raw shot uses unit central amplitude and ``c_raw = s``; the dilation
    to unit norm then gives ``c = s M²`` and ``ψ(0) = 1/M²``.
    """
    grid = grid or RadialGrid()
    shot = shoot_raw(s, 0.0, 1.0, _raw_grid(s, grid), w_tol=w_tol)
    if not shot.converged:
        raise ConvergenceError(f"shot at s = {s} did not decay on the grid")
    return _normalise_selfbound(shot, branch)


def selfbound_c(s, grid: RadialGrid | None = None) -> float:
    """Scaled scattering length ``c(s)`` reached by the family member ``s``."""
    grid = grid or RadialGrid()
    shot = shoot_raw(s, 0.0, 1.0, _raw_grid(s, grid))
    return float(s) * shot.mass**2


@dataclass(frozen=True)
class SelfboundFold:
    s: float
    c: float
    eps: float
    psi0: float


@lru_cache(maxsize=16)
def selfbound_fold(grid: RadialGrid | None = None, xtol=1e-9) -> SelfboundFold:
    """Minimum of ``c(s)``: the tangent bifurcation without trap."""
    grid = grid or RadialGrid()
    scan = np.linspace(-1.0, 0.0, 21)[:-1]
    cs = [selfbound_c(s, grid) for s in scan]
    i = int(np.argmin(cs))
    if i == 0 or i == len(scan) - 1:
        raise ConvergenceError("fold not bracketed by the s-scan")
    res = minimize_scalar(
        lambda s: selfbound_c(s, grid),
        bracket=(scan[i - 1], scan[i], scan[i + 1]),
        method="brent",
        options={"xtol": xtol},
    )
    sol = selfbound_member(res.x, grid)
    return SelfboundFold(float(res.x), sol.params.c, sol.eps, sol.psi0)


def _find_s(c_target, a, b, grid):
    return brentq(lambda s: selfbound_c(s, grid) - c_target, a, b, xtol=1e-14, rtol=1e-15)


def solve_selfbound(c_target, branch=LOWER, grid: RadialGrid | None = None) -> RadialSolution:
    """Self-bound (g = 0) solution at ``c = c_target`` on the requested branch."""
    if branch not in BRANCHES:
        raise ValueError(f"unknown branch {branch!r}")
    grid = grid or RadialGrid()
    c_target = float(c_target)
    if branch == UPPER and c_target >= 0:
        raise NoSolutionError(
            "the second (upper) solution exists only for negative c",
            {"c_target": c_target},
        )
    if c_target == 0.0:
        sol = selfbound_member(0.0, grid)
    elif c_target > 0:
        hi = 0.5
        while selfbound_c(hi, grid) < c_target:
            hi *= 2.0
            if hi > 1e3:
                raise ConvergenceError(f"c = {c_target} is beyond the reachable range")
        sol = selfbound_member(_find_s(c_target, 0.0, hi, grid), grid)
    else:
        fold = selfbound_fold(grid)
        if c_target < fold.c:
            raise NoSolutionError(
                f"c = {c_target} lies below the fold c* = {fold.c:.6f}",
                {"c_target": c_target, "c_fold": fold.c, "s_fold": fold.s},
            )
        if c_target == fold.c:
            s = fold.s
        elif branch == LOWER:
            s = _find_s(c_target, fold.s, 0.0, grid)
        else:
            lo = fold.s - 0.5
            while selfbound_c(lo, grid) < c_target:
                lo = fold.s + 2.0 * (lo - fold.s)
                if lo < -1e3:
                    raise ConvergenceError(
                        f"upper branch at c = {c_target} needs amplitudes beyond the grid resolution"
                    )
            s = _find_s(c_target, lo, fold.s, grid)
        sol = selfbound_member(s, grid, branch=branch)
    # pin the parameter to the request, the root-find residual is ~1e-14
    return replace(sol, params=ModelParams(c_target, 0.0), branch=branch)


def trapped_mass(c, g, psi0, grid: RadialGrid | None = None) -> float:
    """Norm of the bisection-converged profile at fixed ``(c, g, ψ(0))``."""
    return shoot_raw(c, g, psi0, grid or RadialGrid()).mass


def _trapped_solution(shot: RawShot, c, g, branch) -> RadialSolution:
    return RadialSolution(
        params=ModelParams(c, g),
        psi=shot.psi,
        V_g=RadialField(shot.grid, shot.gravity_potential()),
        eps=shot.eps,
        branch=branch,
        solver="shooting",
    )


def _log_root(fun, a, b):
    x = brentq(lambda t: fun(math.exp(t)), math.log(a), math.log(b), xtol=1e-13)
    return math.exp(x)


def solve_trapped(
    c_target,
    g,
    branch=LOWER,
    grid: RadialGrid | None = None,
    psi0_window=(1e-2, 50.0),
    scan_points=41,
) -> RadialSolution:
    """Trapped (g > 0) solution at ``c = c_target`` on the requested branch.

    The central amplitude is scanned over ``psi0_window`` (log spaced) for
    sign changes of ``norm - 1``; the first root on a rising norm is the
    lower branch and the following root on a falling norm the upper one.
    """
    if not g > 0:
        raise ValueError("solve_trapped needs g > 0; use solve_selfbound for g = 0")
    if branch not in BRANCHES:
        raise ValueError(f"unknown branch {branch!r}")
    grid = grid or RadialGrid()
    c_target, g = float(c_target), float(g)
    if branch == UPPER and c_target >= 0:
        raise NoSolutionError(
            "the second (upper) solution exists only for negative c",
            {"c_target": c_target, "g": g},
        )

    def excess(p):
        return trapped_mass(c_target, g, p, grid) - 1.0

    lo_p, hi_p = psi0_window
    # the lowest amplitude must give a sub-unit norm
    while excess(lo_p) > 0 and lo_p > 1e-8:
        lo_p /= 10.0
    ps = np.geomspace(lo_p, hi_p, scan_points)
    ex = np.array([excess(p) for p in ps])
    roots = []
    for i in range(len(ps) - 1):
        if ex[i] == 0.0:
            roots.append((ps[i], ex[i + 1] < 0))
        elif ex[i] * ex[i + 1] < 0:
            roots.append((_log_root(excess, ps[i], ps[i + 1]), ex[i + 1] < ex[i]))
    if c_target >= 0 and not roots:
        raise ConvergenceError(
            f"no unit-norm amplitude in {psi0_window} at c = {c_target}, g = {g}",
            history=list(zip(ps.tolist(), ex.tolist())),
        )
    wanted = [p for p, falling in roots if falling == (branch == UPPER)]
    if not wanted:
        raise NoSolutionError(
            f"no {branch} solution at c = {c_target}, g = {g}",
            {"c_target": c_target, "g": g, "max_norm": float(ex.max() + 1.0)},
        )
    p = wanted[0]
    shot = shoot_raw(c_target, g, p, grid)
    if abs(shot.mass - 1.0) > NORM_TOL * 10:
        raise ConvergenceError(f"outer norm root-find stalled at |M - 1| = {abs(shot.mass - 1):.2e}")
    return _trapped_solution(shot, c_target, g, branch)


def trapped_member(psi0, g, grid: RadialGrid | None = None, c_guess=0.0, branch=LOWER) -> RadialSolution:
    """Trapped solution with prescribed central amplitude; ``c`` is solved for.

    The norm grows monotonically with ``c`` at fixed amplitude, so ``c`` is
    bracketed by expansion around ``c_guess`` and located with Brent's method.
    """
    grid = grid or RadialGrid()
    c = _c_for_unit_norm(psi0, g, grid, c_guess)
    shot = shoot_raw(c, g, psi0, grid)
    return _trapped_solution(shot, c, g, branch)


def _c_for_unit_norm(psi0, g, grid, c_guess=0.0, step=0.25):
    def excess(c):
        shot = shoot_raw(c, g, psi0, grid)
        if not shot.converged:
            raise ConvergenceError(f"psi0 = {psi0}, c = {c:.6g} is beyond the shooting reach")
        return shot.mass - 1.0

    a = b = float(c_guess)
    fa = fb = excess(a)
    d = step
    for _ in range(80):
        if fa < 0 < fb or fb < 0 < fa or fa == 0 or fb == 0:
            break
        if fa > 0:
            a -= d
            fa = excess(a)
        else:
            b += d
            fb = excess(b)
        d *= 1.6
    else:
        raise ConvergenceError(f"could not bracket c for psi0 = {psi0}, g = {g}")
    if fa == 0:
        return a
    if fb == 0:
        return b
    return brentq(excess, a, b, xtol=1e-13, rtol=1e-15)


def trapped_c(psi0, g, grid: RadialGrid | None = None, c_guess=0.0) -> float:
    return _c_for_unit_norm(psi0, g, grid or RadialGrid(), c_guess)


def solve(params: ModelParams, branch=LOWER, grid: RadialGrid | None = None) -> RadialSolution:
    """Dispatch on the trap frequency."""
    if params.g == 0.0:
        return solve_selfbound(params.c, branch, grid)
    return solve_trapped(params.c, params.g, branch, grid)
