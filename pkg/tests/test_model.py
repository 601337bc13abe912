import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.constants import atomic_mass, epsilon_0

from selftrap.errors import InvalidContextError
from selftrap.model import (
    ModelParams,
    PhysicalContext,
    ScaledObservables,
    atomic_units,
    interaction_strength,
    rescale_observables,
    scaled_from_dimensionless,
    to_scaled,
    unscale_observables,
)

RB87 = 86.909 * atomic_mass


def _ctx(**kw):
    base = dict(N=1000.0, mass=RB87, u=1e-40)
    base.update(kw)
    return PhysicalContext(**base)


def test_doubling_u_halves_length_and_quadruples_energy():
    a1, e1, _ = atomic_units(_ctx())
    a2, e2, _ = atomic_units(_ctx(u=2e-40))
    assert a2 == pytest.approx(a1 / 2, rel=1e-14)
    assert e2 == pytest.approx(4 * e1, rel=1e-14)


def test_weak_interaction_limit():
    a_big, e_small, _ = atomic_units(_ctx(u=1e-60))
    a, e, _ = atomic_units(_ctx())
    assert a_big > 1e19 * a
    assert e_small < 1e-39 * e


def test_trap_quantum_in_rydberg_units():
    a_u, E_u, gamma = atomic_units(_ctx(omega0=2 * math.pi * 100.0))
    assert gamma == pytest.approx(1.054571817e-34 * 2 * math.pi * 100.0 / E_u, rel=1e-9)


def test_co2_laser_example_order_of_magnitude():
    # rubidium-87 in 1e8 W/cm^2 of 10.6 um light
    u = interaction_strength(1e12, 2 * math.pi / 10.6e-6, 4 * math.pi * epsilon_0 * 47.3e-30)
    a_u, _, _ = atomic_units(_ctx(u=u))
    assert 1.25e-4 < a_u < 5e-4


@pytest.mark.parametrize(
    "kw",
    [dict(mass=0.0), dict(mass=-1.0), dict(u=0.0), dict(u=-1e-40), dict(N=0.5), dict(omega0=-1.0)],
)
def test_invalid_context(kw):
    with pytest.raises(InvalidContextError):
        atomic_units(_ctx(**kw))


def test_to_scaled_combination():
    ctx = _ctx(scattering_length=5e-9, omega0=10.0)
    a_u, _, gamma = atomic_units(ctx)
    p = to_scaled(ctx)
    assert p.c == pytest.approx(1000.0**2 * 5e-9 / a_u, rel=1e-14)
    assert p.g == pytest.approx(gamma / 1000.0**2, rel=1e-14)


def test_dimensionless_inputs():
    p = scaled_from_dimensionless(1000, 1e-6)
    assert p.c == pytest.approx(1.0, rel=1e-14)
    assert p.g == 0.0
    with pytest.raises(InvalidContextError):
        scaled_from_dimensionless(0.5, 1e-6)


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(math.nan)
    with pytest.raises(ValueError):
        ModelParams(1.0, -0.1)
    assert ModelParams(0.0).self_trapped


finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(
    st.tuples(*[finite] * 8),
    st.floats(1.0, 1e4),
)
def test_rescale_round_trip(vals, N):
    obs = ScaledObservables(*vals)
    back = unscale_observables(rescale_observables(obs, N), N)
    for k, v in obs.as_dict().items():
        assert getattr(back, k) == pytest.approx(v, rel=1e-12, abs=1e-300)


def test_rescale_powers():
    obs = ScaledObservables(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    s = rescale_observables(obs, 10)
    assert (s.energy, s.chemical_potential, s.rms_radius, s.peak_density) == pytest.approx(
        (1e3, 1e2, 0.1, 1e4)
    )
    assert rescale_observables(obs, 1) == obs
    with pytest.raises(ValueError):
        rescale_observables(obs, 0.5)
