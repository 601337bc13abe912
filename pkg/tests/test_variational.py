import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from selftrap.variational import (
    K,
    gaussian_components,
    gaussian_energy,
    gaussian_stationary_points,
    variational_fold,
    variational_observables,
    variational_width,
)


def test_components_by_quadrature():
    c, g, s = 0.7, 0.4, 1.3
    psi = lambda r: (math.pi * s**2) ** -0.75 * math.exp(-(r**2) / (2 * s**2))
    dpsi = lambda r: -r / s**2 * psi(r)
    w = lambda f: quad(lambda r: 4 * math.pi * r**2 * f(r), 0, 30 * s)[0]
    kin = w(lambda r: dpsi(r) ** 2)
    trap = g**2 * w(lambda r: r**2 * psi(r) ** 2)
    contact = 4 * math.pi * c * w(lambda r: psi(r) ** 4)
    Vg = lambda r: -2 * math.erf(r / s) / r if r > 0 else -4 / (math.sqrt(math.pi) * s)
    grav = 0.5 * w(lambda r: Vg(r) * psi(r) ** 2)
    assert gaussian_components(c, g, s) == pytest.approx((kin, trap, contact, grav), rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(-1.0, 10.0), st.floats(0.0, 2.0), st.floats(0.2, 20.0))
def test_derivative_matches_finite_difference(c, g, s):
    h = 1e-6 * s
    fd = (gaussian_energy(c, g, s + h)[0] - gaussian_energy(c, g, s - h)[0]) / (2 * h)
    assert gaussian_energy(c, g, s)[1] == pytest.approx(fd, rel=1e-5, abs=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.floats(-1.5, 50.0), st.floats(0.0, 3.0))
def test_stationary_points_are_stationary(c, g):
    for p in gaussian_stationary_points(c, g):
        dE = gaussian_energy(c, g, p.sigma)[1]
        scale = abs(gaussian_energy(c, g, p.sigma)[0]) / p.sigma + 1e-12
        assert abs(dE) < 1e-9 * scale


def test_selfbound_fold_closed_form():
    c, sigma = variational_fold(0.0)
    assert c == pytest.approx(-3 * math.pi / 8, abs=1e-12)
    assert sigma == pytest.approx(3 / (2 * K), rel=1e-12)


def test_fold_pair_and_ordering():
    pts = gaussian_stationary_points(-1.178)
    assert [p.kind for p in pts] == ["max", "min"]
    assert pts[1].sigma / pts[0].sigma - 1 < 0.05
    assert gaussian_stationary_points(-1.2) == []
    # positive c: one minimum only
    assert [p.kind for p in gaussian_stationary_points(1.0)] == ["min"]


def test_trapped_fold_moves_inward():
    cs = [variational_fold(g)[0] for g in (0.0, 0.1, 0.3, 1.0)]
    assert all(abs(b) < abs(a) for a, b in zip(cs, cs[1:]))
    # the fold condition makes the stationary pair degenerate
    c, s = variational_fold(0.5)
    assert gaussian_energy(c, 0.5, s)[1] == pytest.approx(0.0, abs=1e-10)


def test_observables_identity():
    (p,) = gaussian_stationary_points(2.0, 0.5)
    o = variational_observables(p)
    # virial relation holds exactly at a stationary width
    assert 2 * o.kinetic - 2 * o.trap + 3 * o.contact + o.gravity == pytest.approx(0.0, abs=1e-12)
    assert o.rms_radius == pytest.approx(p.sigma * math.sqrt(1.5))
    assert variational_width(-2.0) is None


def test_rejects_nonpositive_width():
    with pytest.raises(ValueError):
        gaussian_components(1.0, 0.0, 0.0)
