"""Gaussian variational model.

For the unit-norm orbital ``ψ = (πσ²)^{-3/4} exp(-r²/2σ²)`` the mean-field
energy is

    E(σ) = 3/(2σ²) + (3/2) g² σ² + k c / σ³ - k / σ,      k = sqrt(2/π),

(kinetic, trap, contact, gravity).  The gravity term uses the exact
potential of the Gaussian density, ``V_g = -2 erf(r/σ)/r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ScaledObservables

K = math.sqrt(2.0 / math.pi)

SIGMA_RANGE = (1e-4, 1e4)


def gaussian_components(c, g, sigma):
    """``(kinetic, trap, contact, gravity)`` energies of the Gaussian orbital."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return (
        1.5 / sigma**2,
        1.5 * g**2 * sigma**2,
        K * c / sigma**3,
        -K / sigma,
    )


def gaussian_energy(c, g, sigma):
    """Return ``(E, dE/dσ)``."""
    E = sum(gaussian_components(c, g, sigma))
    dE = -3.0 / sigma**3 + 3.0 * g**2 * sigma - 3.0 * K * c / sigma**4 + K / sigma**2
    return E, dE


def _d2E(c, g, sigma):
    return 9.0 / sigma**4 + 3.0 * g**2 + 12.0 * K * c / sigma**5 - 2.0 * K / sigma**3


@dataclass(frozen=True)
class StationaryPoint:
    sigma: float
    energy: float
    kind: str  # "min" or "max"
    c: float
    g: float


def gaussian_stationary_points(c, g=0.0, sigma_range=SIGMA_RANGE):
    """All stationary widths of ``E(σ)`` inside ``sigma_range``, sorted by σ.

    ``σ⁴ dE/dσ = 3g²σ⁵ + kσ² - 3σ - 3kc`` is a polynomial, so candidate roots
    come from its companion matrix and are then polished with Newton steps on
    ``dE/dσ`` itself.
    """
    coeffs = [3.0 * g**2, 0.0, 0.0, K, -3.0, -3.0 * K * c]
    while coeffs and coeffs[0] == 0.0:
        coeffs.pop(0)
    roots = np.roots(coeffs)
    points = []
    for z in roots:
        if abs(z.imag) > 1e-7 * max(1.0, abs(z)) or z.real < 0.5 * sigma_range[0]:
            continue
        s = float(z.real)
        for _ in range(50):
            _, d1 = gaussian_energy(c, g, s)
            d2 = _d2E(c, g, s)
            if d2 == 0.0:
                break
            step = d1 / d2
            s_new = s - step
            if s_new <= 0:
                break
            s = s_new
            if abs(step) <= 1e-15 * s:
                break
        if not sigma_range[0] <= s <= sigma_range[1]:
            continue
        if any(abs(s - p.sigma) <= 1e-9 * s for p in points):
            continue
        kind = "min" if _d2E(c, g, s) > 0 else "max"
        points.append(StationaryPoint(s, gaussian_energy(c, g, s)[0], kind, float(c), float(g)))
    points.sort(key=lambda p: p.sigma)
    return points


def variational_observables(point: StationaryPoint) -> ScaledObservables:
    """Closed-form observables at a stationary width.

    ε follows from the stationarity of E under variations of the orbital:
    ``ε = E_kin + E_trap + 2 E_contact + 2 E_gravity``.
    """
    kin, trap, contact, grav = gaussian_components(point.c, point.g, point.sigma)
    return ScaledObservables(
        energy=kin + trap + contact + grav,
        chemical_potential=kin + trap + 2.0 * contact + 2.0 * grav,
        rms_radius=point.sigma * math.sqrt(1.5),
        peak_density=(math.pi * point.sigma**2) ** -1.5,
        kinetic=kin,
        trap=trap,
        contact=contact,
        gravity=grav,
    )


def variational_fold(g=0.0):
    """Scattering length where the minimum and maximum merge, with its width.

    Stationarity gives ``c(σ) = (3g²σ⁵ + kσ² - 3σ)/(3k)``; the fold is the
    minimum of that curve, ``15g²σ⁴ + 2kσ - 3 = 0``.  For g = 0 this is
    ``σ = 3/(2k)`` and ``c = -3π/8``.
    """
    if g == 0:
        sigma = 3.0 / (2.0 * K)
    else:
        roots = np.roots([15.0 * g**2, 0.0, 0.0, 2.0 * K, -3.0])
        real = [z.real for z in roots if abs(z.imag) < 1e-9 and z.real > 0]
        sigma = float(min(real))
        for _ in range(20):
            f = 15.0 * g**2 * sigma**4 + 2.0 * K * sigma - 3.0
            sigma -= f / (60.0 * g**2 * sigma**3 + 2.0 * K)
    c = (3.0 * g**2 * sigma**5 + K * sigma**2 - 3.0 * sigma) / (3.0 * K)
    return float(c), float(sigma)


def variational_width(c, g=0.0):
    """Width of the energy minimum, or ``None`` past the variational fold."""
    mins = [p for p in gaussian_stationary_points(c, g) if p.kind == "min"]
    return mins[0].sigma if mins else None
