"""Branch tracing in the central amplitude and fold location.

The central amplitude ψ(0) of the normalised orbital is regular through the
tangent bifurcation, while c is not: along a branch c(ψ(0)) first falls
(lower branch), reaches its minimum at the fold, and rises again (upper
branch).

Sweeps are sequential because each trapped point warm-starts from the
previous one; the self-bound sweep has no warm start but is cheap.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import SelftrapError, WindowError
from .observables import energy_components
from .radial import RadialGrid
from .shooting import (
    LOWER,
    UPPER,
    RadialSolution,
    selfbound_fold,
    selfbound_member,
    shoot_raw,
    trapped_c,
    trapped_member,
    _raw_grid,
)
from .variational import variational_fold

log = logging.getLogger(__name__)

TRAPPED_WINDOW = (0.05, 5.0)


@dataclass(frozen=True)
class BranchPoint:
    c: float
    eps: float
    E: float
    rms: float
    peak: float
    branch: str
    psi0: float

    @classmethod
    def from_solution(cls, sol: RadialSolution, branch=None):
        obs = energy_components(sol)
        return cls(
            c=sol.params.c,
            eps=obs.chemical_potential,
            E=obs.energy,
            rms=obs.rms_radius,
            peak=obs.peak_density,
            branch=branch or sol.branch,
            psi0=sol.psi0,
        )


@dataclass(frozen=True)
class Fold:
    g: float
    c_star: float
    eps_star: float
    psi0_star: float


@dataclass
class BranchDiagram:
    g: float
    points: list = field(default_factory=list)
    fold: Fold | None = None
    gaps: list = field(default_factory=list)

    def branch(self, tag):
        return [p for p in self.points if p.branch == tag]

    def as_rows(self):
        return [asdict(p) for p in self.points]


def _psi0_of_s(s, grid):
    # ψ(0) of the normalised member is 1/M² for unit raw amplitude
    return 1.0 / shoot_raw(s, 0.0, 1.0, _raw_grid(s, grid)).mass ** 2


def _s_for_psi0(p, grid):
    """Invert the (decreasing) map s -> ψ(0) of the self-bound family."""
    target = math.log(p)

    def f(s):
        return math.log(_psi0_of_s(s, grid)) - target

    f0 = f(0.0)
    if f0 == 0.0:
        return 0.0
    step = 0.25 if f0 > 0 else -0.25
    a, b = 0.0, step
    fb = f(b)
    while fb * f0 > 0:
        a, b = b, b + step
        step *= 2.0
        if abs(b) > 1e3:
            raise WindowError(f"central amplitude {p} is outside the reachable family")
        fb = f(b)
    lo, hi = min(a, b), max(a, b)
    return brentq(f, lo, hi, xtol=1e-14, rtol=1e-15)


def _label(p, p_star):
    if p_star is None:
        return LOWER
    return LOWER if p <= p_star else UPPER


def trace_branch(g, psi0_range, steps=40, grid: RadialGrid | None = None) -> BranchDiagram:
    """Solutions along the branch for log-spaced central amplitudes.

    Parameters
    ----------
    g : float
        Scaled trap frequency (0 for self-trapping).
    psi0_range : (float, float)
        Positive, ordered range of normalised central amplitudes.
    steps : int
        Number of sweep points; a degenerate range yields a single point.

    Failed points are recorded in ``gaps`` rather than raised.  ``fold`` is
    set only when the sweep brackets the fold.
    """
    lo, hi = (float(x) for x in psi0_range)
    if not 0 < lo <= hi:
        raise ValueError("psi0_range must be positive and ordered")
    grid = grid or RadialGrid()
    ps = np.array([lo]) if lo == hi or steps < 2 else np.geomspace(lo, hi, steps)

    try:
        fold = locate_fold(g, grid)
    except SelftrapError as exc:
        log.warning("fold not located for labelling: %s", exc)
        fold = None
    p_star = fold.psi0_star if fold is not None else None

    diagram = BranchDiagram(g=float(g))
    anchor = fold.c_star if fold is not None else 0.0
    c_guess = anchor
    for p in ps:
        tag = _label(p, p_star)
        sol = None
        if g == 0:
            try:
                sol = selfbound_member(_s_for_psi0(p, grid), grid, branch=tag)
            except SelftrapError as exc:
                log.info("branch point psi0 = %g failed: %s", p, exc)
        else:
            # warm start first, then the fold value as a cold start
            for guess in dict.fromkeys((c_guess, anchor)):
                try:
                    sol = trapped_member(p, g, grid, c_guess=guess, branch=tag)
                    break
                except SelftrapError as exc:
                    log.info("branch point psi0 = %g from c = %g failed: %s", p, guess, exc)
        if sol is None:
            diagram.gaps.append(float(p))
            continue
        if g > 0:
            c_guess = sol.params.c
        diagram.points.append(BranchPoint.from_solution(sol, tag))
    if fold is not None and len(ps) > 1 and lo < fold.psi0_star < hi:
        diagram.fold = fold
    return diagram


def locate_fold(g, grid: RadialGrid | None = None, psi0_window=None, scan_points=25) -> Fold:
    """Fold of the branch: the minimum of c over the central amplitude.

    For g = 0 the minimum is taken over the self-bound family parameter,
    which is monotone in ψ(0).  For g > 0, c(ψ(0)) is scanned over
    ``psi0_window`` and the bracketed minimum refined with Brent's method in
    log ψ(0).

    Raises
    ------
    WindowError
        If the scan has no interior minimum.
    """
    grid = grid or RadialGrid()
    if g == 0:
        f = selfbound_fold(grid)
        return Fold(0.0, f.c, float(f.eps), f.psi0)
    if not g > 0:
        raise ValueError("g must be >= 0")
    window = psi0_window or TRAPPED_WINDOW
    ps = np.geomspace(window[0], window[1], scan_points)
    cs = []
    c_guess = 0.0
    for p in ps:
        c_guess = trapped_c(p, g, grid, c_guess)
        cs.append(c_guess)
    i = int(np.argmin(cs))
    if i == 0 or i == len(ps) - 1:
        raise WindowError(f"no interior fold in psi0 window {window} for g = {g}")

    def c_of_logp(t):
        return trapped_c(math.exp(t), g, grid, cs[i])

    res = minimize_scalar(
        c_of_logp,
        bracket=(math.log(ps[i - 1]), math.log(ps[i]), math.log(ps[i + 1])),
        method="brent",
        options={"xtol": 1e-7},
    )
    p_star = math.exp(res.x)
    sol = trapped_member(p_star, g, grid, c_guess=float(res.fun))
    return Fold(float(g), sol.params.c, float(sol.eps), p_star)


@dataclass(frozen=True)
class FoldCurvePoint:
    g: float
    c_star: float
    eps_star: float
    psi0_star: float
    c_star_variational: float


def fold_curve(g_values, grid: RadialGrid | None = None):
    """Numeric and variational fold locations for each trap frequency.

    Each search is windowed around the previous fold amplitude; a failed
    search falls back to the default window, then leaves a NaN gap.
    """
    grid = grid or RadialGrid()
    out = []
    prev = None
    for g in g_values:
        g = float(g)
        if g < 0:
            raise ValueError("g values must be >= 0")
        c_var, _ = variational_fold(g)
        fold = None
        windows = [None]
        if prev is not None and g > 0:
            windows.insert(0, (prev / 3.0, prev * 3.0))
        for window in windows:
            try:
                fold = locate_fold(g, grid, psi0_window=window)
                break
            except SelftrapError as exc:
                log.info("fold search at g = %g, window %s failed: %s", g, window, exc)
        if fold is None:
            out.append(FoldCurvePoint(g, math.nan, math.nan, math.nan, c_var))
            continue
        prev = fold.psi0_star
        out.append(FoldCurvePoint(g, fold.c_star, fold.eps_star, fold.psi0_star, c_var))
    return out
