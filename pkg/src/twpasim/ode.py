"""Fixed-step classical Runge-Kutta integration for small complex systems."""

from __future__ import annotations

import cmath

import numpy as np

from .errors import DivergenceError


def rk4(rhs, y0, z0: float, z1: float, n_steps: int):
    """Integrate ``dy/dz = rhs(z, y)`` from ``z0`` to ``z1`` with classical RK4.

    ``y`` is a tuple of Python complex numbers and ``rhs`` must return a
    tuple of the same length; keeping the state in plain scalars is several
    times faster than numpy for three-mode systems.

    Returns
    -------
    z : ndarray, shape (n_steps + 1,)
    y : ndarray, shape (n_steps + 1, len(y0)), complex
    """
    n_steps = int(n_steps)
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    h = (z1 - z0) / n_steps
    half = 0.5 * h
    sixth = h / 6.0
    m = len(y0)
    out = np.empty((n_steps + 1, m), dtype=complex)
    y = tuple(complex(v) for v in y0)
    out[0] = y
    for n in range(n_steps):
        z = z0 + n * h
        k1 = rhs(z, y)
        k2 = rhs(z + half, tuple(a + half * b for a, b in zip(y, k1)))
        k3 = rhs(z + half, tuple(a + half * b for a, b in zip(y, k2)))
        k4 = rhs(z + h, tuple(a + h * b for a, b in zip(y, k3)))
        y = tuple(
            a + sixth * (b1 + 2 * b2 + 2 * b3 + b4)
            for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)
        )
        if not all(cmath.isfinite(v) for v in y):
            raise DivergenceError(f"non-finite state after step {n + 1} (z = {z + h:.6e})", step=n + 1)
        out[n + 1] = y
    z = z0 + h * np.arange(n_steps + 1)
    z[-1] = z1
    return z, out
