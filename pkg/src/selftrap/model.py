"""Gravity-like atomic units, the two scaled control parameters, and N-scaling.

All solvers work on the N = 1 problem

    [-Δ + g² r² + 8πc |ψ|² + V_g] ψ = ε ψ,   ΔV_g = 8π|ψ|²,   ∫|ψ|² d³r = 1,

with lengths in a_u = ħ²/(m u) and energies in E_u = ħ²/(2 m a_u²).  The
particle number only enters through :func:`to_scaled` and
:func:`rescale_observables`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from scipy.constants import epsilon_0, hbar
from scipy.constants import c as speed_of_light

from .errors import InvalidContextError


@dataclass(frozen=True)
class PhysicalContext:
    """Physical inputs in SI units.

    Parameters
    ----------
    N : float
        Particle number, ``N >= 1``.
    mass : float
        Atomic mass in kg.
    u : float
        Strength of the attractive ``-u/|r - r'|`` interaction in J·m.
    scattering_length : float
        s-wave scattering length in m (may be negative).
    omega0 : float
        Isotropic trap frequency in rad/s; zero for self-trapping.
    """

    N: float
    mass: float
    u: float
    scattering_length: float = 0.0
    omega0: float = 0.0

    def validate(self):
        if not self.N >= 1:
            raise InvalidContextError(f"particle number must be >= 1, got {self.N}")
        if not self.mass > 0:
            raise InvalidContextError(f"mass must be positive, got {self.mass}")
        if not self.u > 0:
            raise InvalidContextError(f"interaction strength u must be positive, got {self.u}")
        if not self.omega0 >= 0:
            raise InvalidContextError(f"trap frequency must be >= 0, got {self.omega0}")
        if not math.isfinite(self.scattering_length):
            raise InvalidContextError("scattering length must be finite")
        return self


@dataclass(frozen=True)
class ModelParams:
    """Scaled scattering length ``c = N² a/a_u`` and trap frequency ``g = γ/N²``."""

    c: float
    g: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise ValueError(f"c must be finite, got {self.c}")
        if not (math.isfinite(self.g) and self.g >= 0):
            raise ValueError(f"g must be finite and >= 0, got {self.g}")

    @property
    def self_trapped(self) -> bool:
        return self.g == 0.0


@dataclass(frozen=True)
class ScaledObservables:
    """Observables of one stationary state.

    At N = 1 everything is in E_u, a_u and a_u⁻³.  ``energy`` is the total
    mean-field energy (the sum of the four components).
    """

    energy: float
    chemical_potential: float
    rms_radius: float
    peak_density: float
    kinetic: float
    trap: float
    contact: float
    gravity: float

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def interaction_strength(intensity, wavenumber, polarizability):
    """``u = 11/(4π) · I k² α² / (c ε₀²)`` for the laser-induced 1/r attraction (SI)."""
    return 11.0 / (4.0 * math.pi) * intensity * wavenumber**2 * polarizability**2 / (
        speed_of_light * epsilon_0**2
    )


def atomic_units(ctx: PhysicalContext):
    """Return ``(a_u, E_u, gamma)`` for a physical context.

    ``a_u = ħ²/(m u)`` plays the role of the Bohr radius, ``E_u = ħ²/(2 m a_u²)``
    the Rydberg energy, and ``gamma = ħω₀/E_u`` is the dimensionless trap
    frequency.
    """
    ctx.validate()
    a_u = hbar**2 / (ctx.mass * ctx.u)
    E_u = hbar**2 / (2.0 * ctx.mass * a_u**2)
    gamma = hbar * ctx.omega0 / E_u
    return a_u, E_u, gamma


def scaled_from_dimensionless(N, a_over_au, gamma=0.0) -> ModelParams:
    """``c = N² a/a_u`` and ``g = γ/N²`` from already dimensionless inputs."""
    if not N >= 1:
        raise InvalidContextError(f"particle number must be >= 1, got {N}")
    return ModelParams(c=N**2 * a_over_au, g=gamma / N**2)


def to_scaled(ctx: PhysicalContext) -> ModelParams:
    a_u, _, gamma = atomic_units(ctx)
    return scaled_from_dimensionless(ctx.N, ctx.scattering_length / a_u, gamma)


def _scale(obs: ScaledObservables, n: float) -> ScaledObservables:
    e = n**3
    return replace(
        obs,
        energy=obs.energy * e,
        chemical_potential=obs.chemical_potential * n**2,
        rms_radius=obs.rms_radius / n,
        peak_density=obs.peak_density * n**4,
        kinetic=obs.kinetic * e,
        trap=obs.trap * e,
        contact=obs.contact * e,
        gravity=obs.gravity * e,
    )


def rescale_observables(obs_at_n1: ScaledObservables, N) -> ScaledObservables:
    """Map N = 1 observables at ``(c, g)`` to the N-boson system.

    Energy and its components go as N³, the chemical potential as N², the
    peak (particle) density as N⁴ and the rms radius as 1/N.  The 1/N radius
    law follows from the coordinate map ``r -> r/N`` that carries the N = 1
    orbital into the N-boson one.
    """
    if not N >= 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return _scale(obs_at_n1, float(N))


def unscale_observables(obs: ScaledObservables, N) -> ScaledObservables:
    """Inverse of :func:`rescale_observables`."""
    if not N >= 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return _scale(obs, 1.0 / float(N))
