"""Canonical spray of a Lie group in the left trivialization TG = G x g.

States are pairs (x, alpha): a group element x stored through the matrix
representation, and a fiber coordinate alpha in the algebra obtained by
translating the velocity back to the identity.  In these coordinates the
canonical geodesic flow has velocity alpha and no fiber acceleration, its
geodesics are the left translates x0 * exp(t * alpha) of one-parameter
subgroups, and the equivalent matrix SODE reads  M'' = M' M^{-1} M'.

Second tangent vectors are stored as a pair of algebra elements (a, b):
``a`` is the base slot expressed as a left logarithm (the actual base
vector is the left translate of ``a`` to x), ``b`` is the fiber slot.
With that convention the vertical and horizontal projectors of the flow
are the literal bracket formulas implemented below.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Callable

import numpy as np
import scipy.linalg

from .algebra import AlgebraElement, LieAlgebra, as_coords, bracket_coords
from .errors import MissingRep, SingularMatrix
from .integrate import rk4_path

MIN_ABS_DET = 1e-12


@dataclass(frozen=True)
class GroupPoint:
    """Group element, stored as an invertible matrix of the representation."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"group point must be a square matrix, got {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.matrix))

    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


@dataclass(frozen=True)
class TangentState:
    """Point (x, alpha) of the trivialized tangent bundle."""

    x: GroupPoint
    alpha: AlgebraElement


@dataclass(frozen=True)
class SecondTangentVector:
    """Tangent vector to TG at (x, alpha), as left-logarithm slots (a, b)."""

    a: AlgebraElement
    b: AlgebraElement

    def __post_init__(self):
        if self.a.dim != self.b.dim:
            raise ValueError(
                f"slot dimensions differ: {self.a.dim} vs {self.b.dim}"
            )


@dataclass(frozen=True)
class GeodesicTrajectory:
    """Time samples of a matrix geodesic: base points and velocities."""

    times: np.ndarray
    points: tuple[GroupPoint, ...]
    velocities: np.ndarray  # shape (len(times), m, m)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if not (len(t) == len(self.points) == len(self.velocities)):
            raise ValueError("times, points and velocities must have equal length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")

    @property
    def endpoint(self) -> GroupPoint:
        return self.points[-1]


def identity_point(algebra: LieAlgebra) -> GroupPoint:
    if algebra.rep is None:
        raise MissingRep(f"algebra {algebra.name or '?'} carries no representation")
    return GroupPoint(np.eye(algebra.rep.size))


def canonical_spray(algebra: LieAlgebra, state: TangentState) -> SecondTangentVector:
    """Spray of the canonical geodesic structure at (x, alpha).

    The base slot is alpha itself (left logarithm of the velocity) and the
    fiber slot vanishes: one-parameter subgroups keep constant fiber
    coordinates.
    """
    if algebra.rep is None:
        raise MissingRep("canonical spray needs a matrix representation")
    alpha = algebra.element(state.alpha.coords)
    return SecondTangentVector(a=alpha, b=algebra.element(np.zeros(algebra.dim)))


def base_velocity(algebra: LieAlgebra, state: TangentState) -> np.ndarray:
    """Matrix of the base velocity at the state: x * rep(alpha)."""
    if algebra.rep is None:
        raise MissingRep("base velocity needs a matrix representation")
    return state.x.matrix @ algebra.rep.matrix(state.alpha)


def _expm(X: np.ndarray) -> np.ndarray:
    """Matrix exponential: exact truncated series when X is nilpotent
    (some power up to the matrix size vanishes identically), otherwise
    scaling-and-squaring Pade."""
    m = X.shape[0]
    powers = [np.eye(m), X]
    while len(powers) <= m:
        nxt = powers[-1] @ X
        if not nxt.any():
            return sum(
                p / factorial(k) for k, p in enumerate(powers)
            )
        powers.append(nxt)
    return scipy.linalg.expm(X)


def exp_orbit(
    algebra: LieAlgebra, x0: GroupPoint, alpha, t: float
) -> GroupPoint:
    """Point of the one-parameter orbit: x0 * exp(t * rep(alpha))."""
    if algebra.rep is None:
        raise MissingRep("exp_orbit needs a matrix representation")
    X = algebra.rep.matrix(as_coords(alpha, algebra.dim))
    return GroupPoint(x0.matrix @ _expm(t * X))


def integrate_canonical_sode(
    x0: GroupPoint, v0: np.ndarray, t_end: float, steps: int
) -> GeodesicTrajectory:
    """Fixed-step RK4 on the first-order form of M'' = M' M^{-1} M'.

    Returns all samples including both endpoints.  Aborts with
    ``SingularMatrix`` if |det M| drops below 1e-12 along the flow.
    """
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    m = x0.size
    v0 = np.asarray(v0, dtype=float)
    if v0.shape != (m, m):
        raise ValueError(f"v0 must be {m}x{m}, got {v0.shape}")

    def f(_t, y):
        M, V = y[0], y[1]
        if abs(np.linalg.det(M)) < MIN_ABS_DET:
            raise SingularMatrix(
                f"|det M| = {abs(np.linalg.det(M)):.3e} below {MIN_ABS_DET:.0e}"
            )
        return np.stack([V, V @ np.linalg.solve(M, V)])

    y0 = np.stack([x0.matrix, v0])
    times, ys = rk4_path(f, y0, t_end, steps)
    points = tuple(GroupPoint(ys[k, 0]) for k in range(len(times)))
    return GeodesicTrajectory(times=times, points=points, velocities=ys[:, 1].copy())


def vertical_project(algebra: LieAlgebra, alpha, w: SecondTangentVector) -> AlgebraElement:
    """Fiber component of the vertical projection: (1/2)[a, alpha] + b."""
    av = as_coords(alpha, algebra.dim)
    val = 0.5 * bracket_coords(algebra, as_coords(w.a), av) + as_coords(w.b)
    return AlgebraElement(val)


def horizontal_project(
    algebra: LieAlgebra, alpha, w: SecondTangentVector
) -> SecondTangentVector:
    """Horizontal projection: keeps the base slot, forces b = -(1/2)[a, alpha]."""
    av = as_coords(alpha, algebra.dim)
    b = -0.5 * bracket_coords(algebra, as_coords(w.a), av)
    return SecondTangentVector(a=AlgebraElement(as_coords(w.a)), b=AlgebraElement(b))


def homogeneity_residual(
    f: Callable[[np.ndarray], float],
    degree: float,
    dim: int,
    samples: int = 100,
    seed: int = 42,
) -> float:
    """Max relative Euler-homogeneity defect of f over random rays.

    Samples alpha away from the zero section and s in (0, 2], and returns
    max |f(s*alpha) - s^degree * f(alpha)| / (|f(alpha)| + 1e-30).
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        alpha = _nonzero_sample(rng, dim)
        s = rng.uniform(0.0, 2.0)
        while s == 0.0:
            s = rng.uniform(0.0, 2.0)
        fa = float(f(alpha))
        res = abs(float(f(s * alpha)) - s**degree * fa) / (abs(fa) + 1e-30)
        worst = max(worst, res)
    return worst


def _nonzero_sample(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    while np.linalg.norm(v) < 1e-3:
        v = rng.standard_normal(dim)
    return v


def projective_deform(
    f_fiber: Callable[[np.ndarray], np.ndarray],
    factor: Callable[[np.ndarray], float],
    alpha,
) -> AlgebraElement:
    """Fiber coefficients of the spray deformed by a 1-homogeneous factor.

    Returns f_fiber(alpha) - 2 * factor(alpha) * alpha; the base component
    of the spray is untouched, so the deformed flow traverses the same
    oriented geodesic paths under a different parametrization.
    """
    av = np.asarray(as_coords(alpha), dtype=float)
    return AlgebraElement(np.asarray(f_fiber(av), dtype=float) - 2.0 * factor(av) * av)


def integrate_deformed_sode(
    algebra: LieAlgebra,
    x0: GroupPoint,
    alpha0,
    factor: Callable[[np.ndarray], float],
    t_end: float,
    steps: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Integrate the projectively deformed flow in coordinates (x, alpha).

    The canonical fiber coefficients vanish, so the deformed system is
    x' = x * rep(alpha), alpha' = -2 * factor(alpha) * alpha.  Returns
    (times, base matrices, fiber coordinates).
    """
    if algebra.rep is None:
        raise MissingRep("deformed flow needs a matrix representation")
    rep = algebra.rep
    m = rep.size
    n = algebra.dim
    alpha0 = as_coords(alpha0, n)

    def f(_t, y):
        M = y[: m * m].reshape(m, m)
        al = y[m * m :]
        dM = M @ rep.matrix(al)
        dal = -2.0 * factor(al) * al
        return np.concatenate([dM.reshape(-1), dal])

    y0 = np.concatenate([x0.matrix.reshape(-1), alpha0])
    times, ys = rk4_path(f, y0, t_end, steps)
    return times, ys[:, : m * m].reshape(-1, m, m), ys[:, m * m :]


def trajectory_to_csv(traj: GeodesicTrajectory) -> str:
    """Render a trajectory as CSV: t, x_11..x_mm, v_11..v_mm (row-major)."""
    m = traj.points[0].size
    cols = ["t"]
    cols += [f"x_{r + 1}{c + 1}" for r in range(m) for c in range(m)]
    cols += [f"v_{r + 1}{c + 1}" for r in range(m) for c in range(m)]
    lines = [",".join(cols)]
    for t, p, v in zip(traj.times, traj.points, traj.velocities):
        row = [f"{t:.17g}"]
        row += [f"{val:.17g}" for val in p.matrix.reshape(-1)]
        row += [f"{val:.17g}" for val in v.reshape(-1)]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
