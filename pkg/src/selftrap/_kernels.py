"""Compiled inner loops (numba) for the radial integrators.

Everything here works on raw float arrays; the public wrappers live in
:mod:`selftrap.radial`.
"""
import numpy as np
from numba import njit

# shot classification
TOO_LOW = -1  # orbital crossed zero
OPEN = 0  # reached the end of the grid without an event
TOO_HIGH = 1  # orbital turned upward while still positive

_BIG = 1e150


@njit(cache=True)
def _rhs(r, y, c, g, out):
    psi = y[0]
    dpsi = y[1]
    dW = y[3]
    q = g * g * r * r + 8.0 * np.pi * c * psi * psi + y[2]
    out[0] = dpsi
    out[1] = q * psi - 2.0 * dpsi / r
    out[2] = dW
    out[3] = 8.0 * np.pi * psi * psi - 2.0 * dW / r


@njit(cache=True)
def shoot_coupled(c, g, psi0, W0, h, n):
    """RK4 for the coupled orbital/potential system on r_i = i*h.

    Returns (psi, dpsi, W, dW, status, last) where ``last`` is the final
    index that was written. Points past ``last`` are left at zero.
    """
    psi = np.zeros(n)
    dpsi = np.zeros(n)
    W = np.zeros(n)
    dW = np.zeros(n)
    psi[0] = psi0
    W[0] = W0
    if n < 2:
        return psi, dpsi, W, dW, OPEN, 0

    # series start: f = f0 + f2 r^2 + f4 r^4
    q0 = 8.0 * np.pi * c * psi0 * psi0 + W0
    b = q0 * psi0 / 6.0
    B = 4.0 * np.pi * psi0 * psi0 / 3.0
    q2 = g * g + 16.0 * np.pi * c * psi0 * b + B
    d = (q0 * b + q2 * psi0) / 20.0
    D = 4.0 * np.pi * psi0 * b / 5.0
    r = h
    psi[1] = psi0 + b * r**2 + d * r**4
    dpsi[1] = 2.0 * b * r + 4.0 * d * r**3
    W[1] = W0 + B * r**2 + D * r**4
    dW[1] = 2.0 * B * r + 4.0 * D * r**3
    if psi0 == 0.0:
        return psi, dpsi, W, dW, OPEN, n - 1
    if dpsi[1] > 0.0:
        return psi, dpsi, W, dW, TOO_HIGH, 1

    y = np.empty(4)
    k1 = np.empty(4)
    k2 = np.empty(4)
    k3 = np.empty(4)
    k4 = np.empty(4)
    tmp = np.empty(4)
    for i in range(1, n - 1):
        r = i * h
        y[0] = psi[i]
        y[1] = dpsi[i]
        y[2] = W[i]
        y[3] = dW[i]
        _rhs(r, y, c, g, k1)
        for j in range(4):
            tmp[j] = y[j] + 0.5 * h * k1[j]
        _rhs(r + 0.5 * h, tmp, c, g, k2)
        for j in range(4):
            tmp[j] = y[j] + 0.5 * h * k2[j]
        _rhs(r + 0.5 * h, tmp, c, g, k3)
        for j in range(4):
            tmp[j] = y[j] + h * k3[j]
        _rhs(r + h, tmp, c, g, k4)
        for j in range(4):
            tmp[j] = y[j] + h * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0
        if not (np.isfinite(tmp[0]) and np.isfinite(tmp[1])) or abs(tmp[0]) > _BIG:
            return psi, dpsi, W, dW, TOO_HIGH if y[0] > 0.0 else TOO_LOW, i
        psi[i + 1] = tmp[0]
        dpsi[i + 1] = tmp[1]
        W[i + 1] = tmp[2]
        dW[i + 1] = tmp[3]
        if tmp[0] <= 0.0:
            return psi, dpsi, W, dW, TOO_LOW, i + 1
        if tmp[1] > 0.0:
            return psi, dpsi, W, dW, TOO_HIGH, i + 1
    return psi, dpsi, W, dW, OPEN, n - 1


@njit(cache=True)
def numerov_outward(f, h, f0u0, stop):
    """Outward Numerov for u'' = f u with u(0) = 0, u(h) = h.

    ``f0u0`` is the limit of f*u at r = 0 (nonzero only for a Coulomb-like
    singularity). Integration ends at index ``stop`` or when |u| blows up.
    Returns (u, nodes, last).
    """
    n = f.shape[0]
    u = np.zeros(n)
    k = h * h / 12.0
    u[1] = h
    nodes = 0
    last = stop
    for i in range(1, stop):
        prev = u[i - 1] * (1.0 - k * f[i - 1]) if i > 1 else -k * f0u0
        u[i + 1] = (2.0 * u[i] * (1.0 + 5.0 * k * f[i]) - prev) / (1.0 - k * f[i + 1])
        if u[i + 1] * u[i] < 0.0:
            nodes += 1
        if abs(u[i + 1]) > _BIG:
            last = i + 1
            break
    return u, nodes, last


@njit(cache=True)
def count_nodes(f, h, f0u0, count_until):
    """Node count of the outward solution over indices [1, count_until]."""
    n = f.shape[0]
    k = h * h / 12.0
    um = 0.0
    uc = h
    nodes = 0
    for i in range(1, n - 1):
        prev = um * (1.0 - k * f[i - 1]) if i > 1 else -k * f0u0
        up = (2.0 * uc * (1.0 + 5.0 * k * f[i]) - prev) / (1.0 - k * f[i + 1])
        if i + 1 > count_until:
            break
        if up * uc < 0.0:
            nodes += 1
        if abs(up) > _BIG:
            # past the turning point the sign is frozen
            break
        um = uc
        uc = up
    return nodes, uc


@njit(cache=True)
def numerov_inward(f, h, stop):
    """Inward Numerov from u(r_max) = 0 down to index ``stop``.

    Rescales on the fly so deep forbidden regions cannot overflow.
    """
    n = f.shape[0]
    u = np.zeros(n)
    k = h * h / 12.0
    u[n - 1] = 0.0
    u[n - 2] = 1e-300
    for i in range(n - 2, stop, -1):
        u[i - 1] = (2.0 * u[i] * (1.0 + 5.0 * k * f[i]) - u[i + 1] * (1.0 - k * f[i + 1])) / (
            1.0 - k * f[i - 1]
        )
        if abs(u[i - 1]) > 1e100:
            for j in range(i - 1, n):
                u[j] *= 1e-100
    return u
