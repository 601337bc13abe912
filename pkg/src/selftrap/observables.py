"""Energies, sizes and the solution certificates.

The energy functional of the scaled problem is

    E[ψ] = ∫ |∇ψ|² + g² r² |ψ|² + 4πc |ψ|⁴ + ½ V_g |ψ|²  d³r,

whose variation gives the chemical potential
``ε = E_kin + E_trap + 2 E_contact + 2 E_gravity`` and, under norm-preserving
dilations, the virial relation ``2E_kin - 2E_trap + 3E_contact + E_gravity = 0``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .model import ScaledObservables
from .radial import (
    RadialField,
    RadialGrid,
    poisson_gravity,
    radial_derivative,
    radial_integral,
    value_at_origin,
)
from .shooting import RadialSolution

ID_TOL = 1e-6
VIRIAL_TOL = 1e-4
RES_TOL = 1e-5


def energy_components(sol: RadialSolution) -> ScaledObservables:
    grid = sol.grid
    r = grid.r
    psi = sol.psi.values
    rho = psi**2
    c, g = sol.params.c, sol.params.g
    dpsi = radial_derivative(psi, grid.h)
    kinetic = radial_integral(dpsi**2, grid)
    trap = g**2 * radial_integral(r**2 * rho, grid)
    contact = 4.0 * math.pi * c * radial_integral(rho**2, grid)
    gravity = 0.5 * radial_integral(sol.V_g.values * rho, grid)
    return ScaledObservables(
        energy=kinetic + trap + contact + gravity,
        chemical_potential=float(sol.eps),
        rms_radius=math.sqrt(radial_integral(r**2 * rho, grid)),
        peak_density=float(psi[0] ** 2),
        kinetic=kinetic,
        trap=trap,
        contact=contact,
        gravity=gravity,
    )


def tf_density(c, r):
    """Thomas-Fermi-gravity density ``sin(r/√c) / (4π² c r)`` for ``r < π√c``."""
    r = np.asarray(r, dtype=float)
    k = math.sqrt(c)
    x = r / k
    inside = r < math.pi * k
    sinc = np.sinc(x / math.pi)  # sin(x)/x, finite at 0
    return np.where(inside, sinc / (4.0 * math.pi**2 * c * k), 0.0)


def tf_profile(c, grid: RadialGrid | None = None):
    """Kinetic-free self-bound solution for c > 0.

    Dropping the kinetic term, ``8πcρ + V_g = ε`` inside the cloud; applying
    the Laplacian gives ``Δρ + ρ/c = 0``, so ``ρ ∝ sin(r/√c)/r`` on
    ``r ≤ π√c``.  Unit mass fixes the amplitude ``1/(4π²c)``, the edge
    condition ``V_g(R) = -2/R`` fixes ``ε = -2/(π√c)``, and the virial
    relation without kinetic energy gives ``E = ε/2 = -1/(π√c)``.

    Returns ``(density, eps, E)``; the grid defaults to twice the cloud radius.
    """
    if not c > 0:
        raise ValueError(f"the Thomas-Fermi-gravity profile needs c > 0, got {c}")
    if grid is None:
        grid = RadialGrid(2.0 * math.pi * math.sqrt(c), 8001)
    density = RadialField(grid, tf_density(c, grid.r))
    eps = -2.0 / (math.pi * math.sqrt(c))
    return density, eps, eps / 2.0


def tf_peak_density(c):
    return 1.0 / (4.0 * math.pi**2 * c**1.5)


def laplacian(psi, grid: RadialGrid):
    """``Δψ = (rψ)''/r`` with a fourth-order stencil on ``u = rψ``."""
    r = grid.r
    h = grid.h
    u = r * psi
    n = u.size
    ext = np.concatenate([-u[2:0:-1], u, [0.0, 0.0]])  # u is odd in r
    d2 = (-ext[0:n] + 16 * ext[1 : n + 1] - 30 * ext[2 : n + 2] + 16 * ext[3 : n + 3] - ext[4 : n + 4]) / (
        12 * h * h
    )
    lap = np.empty(n)
    lap[1:] = d2[1:] / r[1:]
    lap[0] = value_at_origin(lap, r)
    return lap


def gpe_residual(sol: RadialSolution) -> float:
    """Relative L² residual of the stationary equation on the interior grid.

    ``‖(-Δ + V - ε)ψ‖ / (‖Δψ‖ + ‖Vψ‖ + |ε|)``, with the last two nodes left
    out because the stencil reaches past r_max there.
    """
    grid = sol.grid
    psi = sol.psi.values
    V = sol.potential()
    lap = laplacian(psi, grid)
    res = -lap + (V - sol.eps) * psi
    w = np.ones(grid.n)
    w[-2:] = 0.0

    def l2(f):
        return math.sqrt(radial_integral(w * f**2, grid))

    return l2(res) / (l2(lap) + l2(V * psi) + abs(sol.eps))


@dataclass(frozen=True)
class ConsistencyReport:
    chemical_potential_defect: float
    virial_defect: float
    residual: float
    chemical_potential_tol: float = ID_TOL
    virial_tol: float = VIRIAL_TOL
    residual_tol: float = RES_TOL

    @property
    def certified(self) -> bool:
        return bool(
            self.chemical_potential_defect <= self.chemical_potential_tol
            and self.virial_defect <= self.virial_tol
            and self.residual <= self.residual_tol
        )

    def as_dict(self):
        d = asdict(self)
        d["certified"] = self.certified
        return d


def consistency_report(sol: RadialSolution, id_tol=ID_TOL, vir_tol=VIRIAL_TOL, res_tol=RES_TOL):
    """Relative defects of the chemical-potential identity, virial relation and GPE residual."""
    obs = energy_components(sol)
    chem = sol.eps - (obs.kinetic + obs.trap + 2.0 * obs.contact + 2.0 * obs.gravity)
    virial = 2.0 * obs.kinetic - 2.0 * obs.trap + 3.0 * obs.contact + obs.gravity
    return ConsistencyReport(
        chemical_potential_defect=abs(chem) / abs(sol.eps),
        virial_defect=abs(virial) / (abs(obs.kinetic) + abs(obs.gravity)),
        residual=gpe_residual(sol),
        chemical_potential_tol=id_tol,
        virial_tol=vir_tol,
        residual_tol=res_tol,
    )


def n_body_observables(sol: RadialSolution, N) -> ScaledObservables:
    """Observables of the N-boson state built directly from the mapped fields.

    The N = 1 orbital is carried to ``ψ_N(r) = N^{3/2} ψ(N r)`` on the grid
    shrunk by ``1/N``; the N-body functional is then evaluated with
    ``a = c/N²``, ``γ = g N²`` and the gravity potential of ``N|ψ_N|²``
    recomputed from scratch.  ``chemical_potential`` is the expectation value
    ``⟨ψ_N|H_N|ψ_N⟩``, the Rayleigh quotient of the N-body mean-field
    Hamiltonian.  Used to cross-check :func:`rescale_observables`.
    """
    N = float(N)
    if not N >= 1:
        raise ValueError(f"N must be >= 1, got {N}")
    grid = sol.grid.scaled(1.0 / N)
    r = grid.r
    psi = N**1.5 * sol.psi.values
    rho1 = psi**2
    a = sol.params.c / N**2
    gamma = sol.params.g * N**2
    V_g = N * poisson_gravity(RadialField(grid, rho1)).values
    dpsi = radial_derivative(psi, grid.h)
    kinetic = N * radial_integral(dpsi**2, grid)
    trap = N * gamma**2 * radial_integral(r**2 * rho1, grid)
    contact = N * 4.0 * math.pi * N * a * radial_integral(rho1**2, grid)
    gravity = N * 0.5 * radial_integral(V_g * rho1, grid)
    return ScaledObservables(
        energy=kinetic + trap + contact + gravity,
        chemical_potential=(kinetic + trap + 2.0 * contact + 2.0 * gravity) / N,
        rms_radius=math.sqrt(radial_integral(r**2 * rho1, grid)),
        peak_density=float(N * psi[0] ** 2),
        kinetic=kinetic,
        trap=trap,
        contact=contact,
        gravity=gravity,
    )
