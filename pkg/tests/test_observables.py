import math

import numpy as np
import pytest
from dataclasses import replace

from selftrap.observables import (
    consistency_report,
    energy_components,
    gpe_residual,
    laplacian,
    n_body_observables,
    tf_density,
    tf_peak_density,
    tf_profile,
)
from selftrap.radial import RadialField, RadialGrid, poisson_gravity, radial_integral


def test_components_sum(solutions):
    o = energy_components(solutions(1.0, 0.3))
    assert o.energy == pytest.approx(o.kinetic + o.trap + o.contact + o.gravity, rel=1e-14)
    assert o.kinetic > 0 and o.trap > 0 and o.contact > 0 and o.gravity < 0


def test_selfbound_has_no_trap_energy(solutions):
    assert energy_components(solutions(0.0)).trap == 0.0


def test_n_body_at_unit_n_matches_components(solutions):
    sol = solutions(-0.5)
    a = energy_components(sol)
    b = n_body_observables(sol, 1)
    for k in ("energy", "kinetic", "contact", "gravity", "rms_radius", "peak_density"):
        assert getattr(b, k) == pytest.approx(getattr(a, k), rel=1e-8)
    assert b.chemical_potential == pytest.approx(a.chemical_potential, rel=1e-7)


def test_tf_profile_analytics():
    c = 50.0
    rho, eps, E = tf_profile(c)
    assert radial_integral(rho.values, rho.grid) == pytest.approx(1.0, rel=1e-9)
    assert rho.values[0] == pytest.approx(tf_peak_density(c), rel=1e-12)
    # 8πcρ + V_g is constant (= ε) inside the cloud
    V = poisson_gravity(rho).values
    r = rho.grid.r
    inside = r < 0.95 * math.pi * math.sqrt(c)
    lhs = 8 * math.pi * c * rho.values + V
    assert np.max(np.abs(lhs[inside] - eps)) < 1e-7
    # contact + gravity energy of the kinetic-free state
    Ec = 4 * math.pi * c * radial_integral(rho.values**2, rho.grid)
    Eg = 0.5 * radial_integral(V * rho.values, rho.grid)
    assert Ec + Eg == pytest.approx(E, rel=1e-7)


def test_tf_density_support():
    c = 4.0
    assert tf_density(c, [2 * math.pi * 2]).item() == 0.0
    with pytest.raises(ValueError):
        tf_profile(-1.0)


def test_laplacian_gaussian():
    grid = RadialGrid(10.0, 4001)
    r = grid.r
    f = np.exp(-(r**2))
    exact = (4 * r**2 - 6) * f
    assert np.max(np.abs(laplacian(f, grid)[:-2] - exact[:-2])) < 1e-8


def test_residual_detects_perturbation(solutions):
    sol = solutions(1.0)
    assert gpe_residual(sol) < 1e-5
    r = sol.grid.r
    bumped = sol.psi.values * (1 + 1e-2 * np.exp(-(r - 3) ** 2))
    bad = replace(sol, psi=RadialField(sol.grid, bumped))
    assert gpe_residual(bad) > 10 * gpe_residual(sol)
    assert not consistency_report(bad).certified


def test_report_fields(solutions):
    rep = consistency_report(solutions(1.0))
    d = rep.as_dict()
    assert d["certified"] is True
    assert set(d) >= {"chemical_potential_defect", "virial_defect", "residual"}
