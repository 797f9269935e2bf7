"""Fixed-step classical Runge-Kutta integration.

Deliberately non-adaptive: identical inputs give identical trajectories,
and halving the step size supports clean convergence-order measurements.
"""

from __future__ import annotations

from typing import Callable

import numpy as np


def rk4_path(
    f: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t_end: float,
    steps: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate y' = f(t, y) from 0 to t_end with ``steps`` RK4 steps.

    Returns (times, states) including both endpoints, with states stacked
    along the first axis.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if not np.isfinite(t_end):
        raise ValueError("t_end must be finite")
    y = np.array(y0, dtype=float)
    h = t_end / steps
    times = np.linspace(0.0, t_end, steps + 1)
    out = np.empty((steps + 1,) + y.shape)
    out[0] = y
    for k in range(steps):
        t = times[k]
        k1 = f(t, y)
        k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = y
    return times, out
