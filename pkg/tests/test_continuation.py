import math

import numpy as np
import pytest

from selftrap.continuation import fold_curve, locate_fold, trace_branch
from selftrap.errors import WindowError
from selftrap.shooting import LOWER, UPPER


@pytest.fixture(scope="module")
def selfbound_diagram():
    return trace_branch(0.0, (0.02, 3.0), steps=25)


def test_selfbound_sweep_covers_both_branches(selfbound_diagram):
    d = selfbound_diagram
    assert not d.gaps
    assert d.fold is not None
    assert d.fold.c_star == pytest.approx(-1.0251, abs=2e-3)
    assert min(p.c for p in d.points) >= d.fold.c_star - 1e-9
    assert d.branch(LOWER) and d.branch(UPPER)
    psi0 = [p.psi0 for p in d.points]
    assert psi0 == sorted(psi0)


def test_energy_continuous_along_branch(selfbound_diagram):
    pts = selfbound_diagram.points
    x = np.log([p.psi0 for p in pts])
    for key in ("E", "eps"):
        y = np.array([getattr(p, key) for p in pts])
        jumps = np.abs(np.diff(y))
        # no jump exceeds a few times its neighbours' average
        local = 0.5 * (np.abs(np.diff(y, prepend=y[0]))[1:] + np.abs(np.diff(y, append=y[-1]))[:-1])
        assert np.all(jumps <= 4 * local + 1e-12)
    assert np.all(np.diff(x) > 0)


def test_upper_energy_exceeds_lower(selfbound_diagram):
    d = selfbound_diagram
    lower = sorted(d.branch(LOWER), key=lambda p: p.c)
    cs = np.array([p.c for p in lower])
    Es = np.array([p.E for p in lower])
    for p in d.branch(UPPER):
        if cs[0] <= p.c <= cs[-1]:
            assert p.E > np.interp(p.c, cs, Es)


def test_fold_is_tangent():
    # |dε/dc| grows without bound as the fold is approached on the lower branch
    from selftrap.shooting import solve_selfbound

    fold = locate_fold(0.0)
    slopes = []
    for dc in (1e-1, 1e-2, 1e-3):
        a = solve_selfbound(fold.c_star + dc)
        b = solve_selfbound(fold.c_star + 2 * dc)
        slopes.append(abs((b.eps - a.eps) / dc))
    assert slopes[0] < slopes[1] < slopes[2]


def test_degenerate_range():
    d = trace_branch(0.0, (0.1, 0.1))
    assert len(d.points) == 1 and d.fold is None


def test_bad_range():
    with pytest.raises(ValueError):
        trace_branch(0.0, (0.0, 1.0))
    with pytest.raises(ValueError):
        trace_branch(0.0, (1.0, 0.5))
    with pytest.raises(ValueError):
        locate_fold(-1.0)


def test_window_without_fold():
    with pytest.raises(WindowError):
        locate_fold(0.3, psi0_window=(1.0, 3.0), scan_points=6)


def test_trapped_branch_warm_start():
    d = trace_branch(0.3, (0.2, 1.0), steps=6)
    assert not d.gaps
    assert d.fold is not None
    assert d.fold.c_star == pytest.approx(-0.6959, abs=1e-3)


def test_fold_curve_properties():
    curve = fold_curve([0.0, 0.01, 0.1])
    assert curve[0].c_star == locate_fold(0.0).c_star
    for p in curve:
        assert abs(p.c_star_variational) > abs(p.c_star)
    # small-g continuity
    assert abs(curve[1].c_star - curve[0].c_star) < 5e-3
    with pytest.raises(ValueError):
        fold_curve([-0.1])
