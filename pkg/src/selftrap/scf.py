"""Self-consistent field iteration for the lower branch.

Each step builds the mean-field potential from the current orbital, solves
the linear radial eigenproblem with Numerov, and mixes the new orbital into
the old one.  Independent of the shooting solver except for the shared grid
and quadrature, which makes it the cross-check for that solver.
"""
from __future__ import annotations

import logging
import math

import numpy as np

from .errors import ConvergenceError
from .model import ModelParams
from .radial import (
    RadialField,
    RadialGrid,
    norm3d,
    numerov_ground_state,
    orbital_from_u,
    poisson_gravity,
    radial_integral,
)
from .shooting import LOWER, RadialSolution
from .variational import variational_width

log = logging.getLogger(__name__)

SCF_TOL = 1e-10
EPS_TOL = 1e-11
MIN_MIXING = 1.0 / 256


def gaussian_guess(grid: RadialGrid, sigma) -> RadialField:
    r = grid.r
    return RadialField(grid, (math.pi * sigma**2) ** -0.75 * np.exp(-(r**2) / (2.0 * sigma**2)))


def default_guess(c, g, grid: RadialGrid) -> RadialField:
    """Unit-norm Gaussian at the variational width for ``(c, g)``."""
    sigma = variational_width(c, g)
    if sigma is None:
        # past the variational fold: fall back to the Newton-Schrödinger width
        sigma = variational_width(0.0, g)
    return _normalised(gaussian_guess(grid, sigma).values, grid)


def _normalised(values, grid):
    field = RadialField(grid, values)
    return RadialField(grid, values / math.sqrt(norm3d(field)))


def mean_field_potential(c, g, psi: RadialField):
    """``(g²r² + 8πc|ψ|² + V_g, V_g)`` for the given orbital."""
    rho = psi.values**2
    V_g = poisson_gravity(RadialField(psi.grid, rho))
    r = psi.grid.r
    return g**2 * r**2 + 8.0 * math.pi * c * rho + V_g.values, V_g


def ground_state(V_total: RadialField):
    """Nodeless Numerov eigenpair with a bracket derived from the potential."""
    grid = V_total.grid
    box = (math.pi / grid.r_max) ** 2
    lo = float(V_total.values.min())
    hi = float(V_total.values.max()) + 4.0 * box
    u, eps = numerov_ground_state(V_total, lo, hi)
    return orbital_from_u(u), eps


def scf_solve(
    c,
    g=0.0,
    initial_guess: RadialField | None = None,
    mixing=0.5,
    grid: RadialGrid | None = None,
    scf_tol=SCF_TOL,
    tol_eps=EPS_TOL,
    max_iter=5000,
) -> RadialSolution:
    """Iterate density -> potential -> ground state until self-consistent.

    Parameters
    ----------
    c, g : float
        Scaled scattering length and trap frequency.
    initial_guess : RadialField, optional
        Unit-norm starting orbital; defaults to the variational Gaussian.
    mixing : float
        Fraction of the new orbital mixed in per step, in (0, 1].  Halved
        whenever the update norm grows.
    scf_tol, tol_eps : float
        Convergence thresholds on the L² change of the orbital and on the
        change of ε between steps.

    Raises
    ------
    ConvergenceError
        After ``max_iter`` steps; ``history`` holds ``(update, eps)`` pairs.
    """
    if not 0 < mixing <= 1:
        raise ValueError(f"mixing must lie in (0, 1], got {mixing}")
    if initial_guess is not None:
        grid = initial_guess.grid
        if abs(norm3d(initial_guess) - 1.0) > 1e-6:
            raise ValueError("initial guess must have unit norm")
        psi = initial_guess
    else:
        grid = grid or RadialGrid()
        psi = default_guess(c, g, grid)

    history = []
    eps_prev = None
    prev_update = math.inf
    for it in range(max_iter):
        V_total, V_g = mean_field_potential(c, g, psi)
        phi, eps = ground_state(RadialField(grid, V_total))
        update = math.sqrt(radial_integral((phi.values - psi.values) ** 2, grid))
        history.append((update, eps))
        if eps_prev is not None and update <= scf_tol and abs(eps - eps_prev) <= tol_eps:
            log.debug("scf converged after %d iterations", it)
            V_total, V_g = mean_field_potential(c, g, phi)
            return RadialSolution(
                params=ModelParams(c, g),
                psi=phi,
                V_g=V_g,
                eps=ground_state(RadialField(grid, V_total))[1],
                branch=LOWER,
                solver="scf",
            )
        if update > prev_update and mixing > MIN_MIXING:
            mixing *= 0.5
            log.debug("scf step %d: update grew, mixing -> %g", it, mixing)
        prev_update = update
        eps_prev = eps
        psi = _normalised((1.0 - mixing) * psi.values + mixing * phi.values, grid)
    raise ConvergenceError(
        f"scf did not converge in {max_iter} iterations at c = {c}, g = {g}", history
    )
