"""Invariant metrizability of the canonical spray, decided on the algebra.

A left-invariant Lagrangian is a function of the fiber coordinate alone, so
the Euler-Lagrange equations of the canonical flow collapse to the single
algebraic family  <grad L(alpha), [a, alpha]> = 0  over all a in the algebra.
For a quadratic energy (1/2) alpha^T G alpha this says the scalar product G
makes every adjoint map skew, which is a finite linear system on symmetric
matrices.  Deciding invariant metrizability therefore reduces to: compute
the subspace W of ad-invariant symmetric matrices, then look for a positive
definite element of W.  Because the canonical spray is quadratic and
invariant functions are first integrals of its flow, one decision answers
plain and projective, Riemann and Finsler invariant metrizability at once;
``invariant_projective_metrizability`` exists as a named surface for that
rigidity.

Positive definiteness over W is decided by certificate search (a basis
direction forced isotropic in all of W) followed by maximizing the minimal
eigenvalue over the trace-n slice of W with projected supgradient ascent.
The verdict is three-valued: near-boundary optima are reported as
Undetermined instead of being rounded to a side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .algebra import (
    AlgebraElement,
    LieAlgebra,
    ad_basis,
    as_coords,
    bracket_coords,
    jacobi_residual,
)
from .errors import (
    AsymmetricInput,
    BadAlgebra,
    MissingRep,
    ZeroFiberPoint,
    ZeroFinslerNorm,
)
from .spray import TangentState, exp_orbit

PD_MARGIN = 1e-6
NULLSPACE_CUTOFF = 1e-10
CERTIFICATE_TOL = 1e-12
SYMMETRY_TOL = 1e-14
DEFAULT_SEED = 42


# ---------------------------------------------------------------------------
# Lagrangians on the fiber
# ---------------------------------------------------------------------------


def _central_gradient(value: Callable[[np.ndarray], float], alpha: np.ndarray) -> np.ndarray:
    h = 1e-6 * (1.0 + float(np.linalg.norm(alpha)))
    g = np.empty_like(alpha)
    for i in range(alpha.size):
        step = np.zeros_like(alpha)
        step[i] = h
        g[i] = (value(alpha + step) - value(alpha - step)) / (2.0 * h)
    return g


@dataclass(frozen=True)
class InvariantLagrangian:
    """Left-invariant Lagrangian: a function of the fiber coordinate only.

    ``gradient`` may be omitted, in which case central finite differences
    with step 1e-6 * (1 + |alpha|) are used.  ``homogeneity_degree`` marks
    positively homogeneous functions; degree-1 Lagrangians must not be
    evaluated on the zero fiber.
    """

    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray] | None = None
    homogeneity_degree: float | None = None

    def __call__(self, alpha) -> float:
        return float(self.value(as_coords(alpha)))

    def gradient_at(self, alpha) -> np.ndarray:
        av = as_coords(alpha)
        if self.gradient is not None:
            return np.asarray(self.gradient(av), dtype=float)
        return _central_gradient(self.value, av)


def quadratic_energy(G: np.ndarray) -> InvariantLagrangian:
    """Energy (1/2) alpha^T G alpha with its closed-form gradient."""
    G = np.asarray(G, dtype=float)
    return InvariantLagrangian(
        value=lambda a: 0.5 * float(a @ G @ a),
        gradient=lambda a: G @ a,
        homogeneity_degree=2.0,
    )


def finsler_norm(G: np.ndarray) -> InvariantLagrangian:
    """The 1-homogeneous norm sqrt(alpha^T G alpha) of a quadratic energy."""
    G = np.asarray(G, dtype=float)
    return InvariantLagrangian(
        value=lambda a: float(np.sqrt(a @ G @ a)),
        gradient=lambda a: G @ a / np.sqrt(a @ G @ a),
        homogeneity_degree=1.0,
    )


def norm_from_energy(E: InvariantLagrangian) -> InvariantLagrangian:
    """sqrt(2 E), defined where E > 0; gradient by the chain rule."""
    return InvariantLagrangian(
        value=lambda a: float(np.sqrt(2.0 * E.value(a))),
        gradient=lambda a: np.asarray(E.gradient_at(a)) / np.sqrt(2.0 * E.value(a)),
        homogeneity_degree=1.0,
    )


def gradient_consistency(
    L: InvariantLagrangian, dim: int, samples: int = 50, seed: int = DEFAULT_SEED
) -> float:
    """Max relative gap between the declared gradient and central differences."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        alpha = rng.standard_normal(dim)
        while np.linalg.norm(alpha) < 1e-3:
            alpha = rng.standard_normal(dim)
        direction = rng.standard_normal(dim)
        direction /= np.linalg.norm(direction)
        h = 1e-6 * (1.0 + float(np.linalg.norm(alpha)))
        fd = (L.value(alpha + h * direction) - L.value(alpha - h * direction)) / (2 * h)
        an = float(L.gradient_at(alpha) @ direction)
        worst = max(worst, abs(fd - an) / (abs(an) + 1e-12))
    return worst


# ---------------------------------------------------------------------------
# Residuals
# ---------------------------------------------------------------------------


def euler_lagrange_residual(algebra: LieAlgebra, L: InvariantLagrangian, a, alpha) -> float:
    """Residual <grad L(alpha), [a, alpha]> of the invariant variational system.

    Vanishing for all (a, alpha) is exactly the condition for the geodesics
    of the canonical flow to solve L's variational equations.
    """
    av = as_coords(alpha, algebra.dim)
    if L.homogeneity_degree == 1.0 and not av.any():
        raise ZeroFiberPoint("1-homogeneous Lagrangian evaluated at alpha = 0")
    br = bracket_coords(algebra, as_coords(a, algebra.dim), av)
    return float(L.gradient_at(av) @ br)


def rapcsak_residual(algebra: LieAlgebra, F: InvariantLagrangian, a, alpha) -> float:
    """Projective-metrizability residual for a 1-homogeneous F.

    For invariant Lagrangians the projective condition reduces to the same
    pairing as the plain variational residual, evaluated on F; the zero sets
    of the two residuals coincide.
    """
    if F.homogeneity_degree != 1.0:
        raise ValueError("rapcsak_residual expects a 1-homogeneous Lagrangian")
    av = as_coords(alpha, algebra.dim)
    if not av.any():
        raise ZeroFiberPoint("1-homogeneous Lagrangian evaluated at alpha = 0")
    br = bracket_coords(algebra, as_coords(a, algebra.dim), av)
    return float(F.gradient_at(av) @ br)


def skewness_residual(algebra: LieAlgebra, G) -> float:
    """How far G is from making every basis adjoint map skew-adjoint.

    Returns the max absolute entry of ad(e_i)^T G + G ad(e_i) over the
    basis; 0 means G is an ad-invariant symmetric form.
    """
    Gm = _require_symmetric(np.asarray(getattr(G, "matrix", G), dtype=float), algebra.dim)
    ads = ad_basis(algebra)
    worst = 0.0
    for i in range(algebra.dim):
        worst = max(worst, float(np.max(np.abs(ads[i].T @ Gm + Gm @ ads[i]))))
    return worst


def _require_symmetric(G: np.ndarray, n: int) -> np.ndarray:
    if G.shape != (n, n):
        raise AsymmetricInput(f"expected a {n}x{n} matrix, got {G.shape}")
    scale = max(float(np.max(np.abs(G))), 1.0)
    if np.max(np.abs(G - G.T)) > SYMMETRY_TOL * scale:
        raise AsymmetricInput("matrix is not symmetric")
    return G


# ---------------------------------------------------------------------------
# Feasibility decision
# ---------------------------------------------------------------------------


class Feasibility(str, Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class MetricCandidate:
    """Symmetric matrix candidate for the invariant scalar product."""

    G: np.ndarray
    eigenvalues: np.ndarray = field(init=False)

    def __post_init__(self):
        G = np.array(self.G, dtype=float)
        _require_symmetric(G, G.shape[0])
        G.flags.writeable = False
        object.__setattr__(self, "G", G)
        ev = np.linalg.eigvalsh(G)
        ev.flags.writeable = False
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of the invariant-metrizability decision.

    ``certificate`` (when present) is a direction u with u^T G u = 0 for
    every G in the constraint subspace, which rules out positive definite
    members; ``lambda_min_achieved`` is the best minimal eigenvalue the
    optimizer reached on the trace-normalized slice.
    """

    status: Feasibility
    witness: MetricCandidate | None
    certificate: AlgebraElement | None
    lambda_min_achieved: float
    subspace_dim: int
    iterations: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "witness": None
            if self.witness is None
            else [float(v) for v in self.witness.G.reshape(-1)],
            "certificate": None
            if self.certificate is None
            else [float(v) for v in self.certificate.coords],
            "lambda_min_achieved": float(self.lambda_min_achieved),
            "subspace_dim": int(self.subspace_dim),
            "iterations": int(self.iterations),
            "seed": int(self.seed),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def symmetric_basis(n: int) -> np.ndarray:
    """Frobenius-orthonormal basis of symmetric n x n matrices."""
    mats = []
    for i in range(n):
        e = np.zeros((n, n))
        e[i, i] = 1.0
        mats.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n))
            e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
            mats.append(e)
    return np.stack(mats)


def invariance_subspace(algebra: LieAlgebra) -> np.ndarray:
    """Orthonormal basis of {G symmetric : ad(e_i)^T G + G ad(e_i) = 0 for all i}.

    Returned as a stack of matrices, shape (d, n, n); d may be zero.
    Singular values below 1e-10 of the largest are treated as zero.
    """
    n = algebra.dim
    basis = symmetric_basis(n)
    ads = ad_basis(algebra)
    # image of each basis matrix under G -> ad_i^T G + G ad_i, for every i
    mapped = np.einsum("iba,pbc->ipac", ads, basis) + np.einsum(
        "pab,ibc->ipac", basis, ads
    )
    C = np.einsum("qac,ipac->iqp", basis, mapped).reshape(-1, basis.shape[0])
    _, s, Vt = np.linalg.svd(C)
    if s.size == 0 or s[0] == 0.0:
        return basis
    rank = int(np.sum(s > NULLSPACE_CUTOFF * s[0]))
    null = Vt[rank:]
    return np.einsum("dp,pab->dab", null, basis)


def _isotropic_basis_direction(W: np.ndarray) -> int | None:
    """Index k with e_k^T G e_k = 0 for every G in span(W), or None."""
    if W.shape[0] == 0:
        return 0
    diag = np.abs(np.diagonal(W, axis1=1, axis2=2))  # (d, n)
    forced = np.max(diag, axis=0) <= CERTIFICATE_TOL
    hits = np.nonzero(forced)[0]
    return int(hits[0]) if hits.size else None


def _maximize_lambda_min(
    W: np.ndarray,
    n: int,
    seed: int,
    restarts: int = 5,
    max_iters: int = 5000,
    strong_margin: float = 0.1,
) -> tuple[float, np.ndarray, int]:
    """Projected supgradient ascent of lambda_min over span(W) with trace n.

    The supgradient of the minimal eigenvalue at G is u u^T for a minimal
    unit eigenvector u; steps diminish as 1/k and iterates stay on the
    affine trace slice.  Returns (best lambda_min, best G, iterations).
    """
    d = W.shape[0]
    tau = np.einsum("dii->d", W)
    tau_norm2 = float(tau @ tau)
    if tau_norm2 <= CERTIFICATE_TOL:
        # every member of W is traceless, so none is positive definite
        return 0.0, np.zeros((n, n)), 0

    rng = np.random.default_rng(seed)
    best_lam = -np.inf
    best_g = None
    total_iters = 0
    for _restart in range(restarts):
        g = rng.standard_normal(d)
        g = g + tau * (n - float(tau @ g)) / tau_norm2
        for k in range(1, max_iters + 1):
            total_iters += 1
            G = np.einsum("d,dab->ab", g, W)
            vals, vecs = np.linalg.eigh(G)
            lam = float(vals[0])
            if lam > best_lam:
                best_lam = lam
                best_g = g.copy()
            if lam >= strong_margin:
                break
            u = vecs[:, 0]
            step = np.einsum("dab,a,b->d", W, u, u)
            step = step - tau * float(tau @ step) / tau_norm2
            g = g + step / k
    G_best = np.einsum("d,dab->ab", best_g, W)
    G_best = 0.5 * (G_best + G_best.T)
    return best_lam, G_best, total_iters


def invariant_metrizability(
    algebra: LieAlgebra,
    seed: int = DEFAULT_SEED,
    restarts: int = 5,
    max_iters: int = 5000,
) -> FeasibilityReport:
    """Decide whether an ad-invariant scalar product exists on the algebra.

    Pipeline: assemble the linear constraints making every basis adjoint
    map skew, take their solution subspace W by SVD, search W for a basis
    direction forced isotropic (an infeasibility certificate), and
    otherwise maximize the minimal eigenvalue over the trace-n slice of W.
    Verdicts within 1e-6 of the boundary are Undetermined.
    """
    if jacobi_residual(algebra) > 1e-10 * max(
        float(np.max(np.abs(algebra.structure_constants))), 1.0
    ):
        raise BadAlgebra("structure constants fail the Jacobi identity")

    n = algebra.dim
    W = invariance_subspace(algebra)
    d = W.shape[0]

    if d == 0:
        return FeasibilityReport(
            status=Feasibility.INFEASIBLE,
            witness=None,
            certificate=algebra.basis_element(0),
            lambda_min_achieved=0.0,
            subspace_dim=0,
            iterations=0,
            seed=seed,
        )

    iso = _isotropic_basis_direction(W)
    best_lam, G_best, iters = _maximize_lambda_min(
        W, n, seed=seed, restarts=restarts, max_iters=max_iters
    )

    if iso is not None:
        return FeasibilityReport(
            status=Feasibility.INFEASIBLE,
            witness=None,
            certificate=algebra.basis_element(iso),
            lambda_min_achieved=best_lam,
            subspace_dim=d,
            iterations=iters,
            seed=seed,
        )
    if best_lam >= PD_MARGIN:
        return FeasibilityReport(
            status=Feasibility.FEASIBLE,
            witness=MetricCandidate(G_best),
            certificate=None,
            lambda_min_achieved=best_lam,
            subspace_dim=d,
            iterations=iters,
            seed=seed,
        )
    if best_lam <= -PD_MARGIN:
        return FeasibilityReport(
            status=Feasibility.INFEASIBLE,
            witness=None,
            certificate=None,
            lambda_min_achieved=best_lam,
            subspace_dim=d,
            iterations=iters,
            seed=seed,
        )
    return FeasibilityReport(
        status=Feasibility.UNDETERMINED,
        witness=None,
        certificate=None,
        lambda_min_achieved=best_lam,
        subspace_dim=d,
        iterations=iters,
        seed=seed,
    )


def invariant_projective_metrizability(
    algebra: LieAlgebra,
    seed: int = DEFAULT_SEED,
    restarts: int = 5,
    max_iters: int = 5000,
) -> FeasibilityReport:
    """Projective variant of the decision.

    The canonical flow is quadratic and keeps invariant Lagrangians
    constant, which degenerates the projective factor of any candidate
    metric to zero; projective and plain invariant metrizability therefore
    coincide and this returns the same report as
    ``invariant_metrizability``.
    """
    return invariant_metrizability(
        algebra, seed=seed, restarts=restarts, max_iters=max_iters
    )


def certificate_residual(W: np.ndarray, u: np.ndarray) -> float:
    """Max of |u^T G u| over an orthonormal basis of the subspace."""
    if W.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.einsum("dab,a,b->d", W, u, u))))


# ---------------------------------------------------------------------------
# Projective factor along the canonical flow
# ---------------------------------------------------------------------------


def projective_factor(
    algebra: LieAlgebra,
    F: InvariantLagrangian,
    state: TangentState,
    dt: float = 1e-6,
) -> float:
    """Numeric projective factor (dF/dt along the flow) / (2 F) at a state.

    The state is transported with exp orbits for time +-dt, the fiber
    coordinate is recovered from the transported velocity matrix, and the
    derivative is a central difference.  For fiber-only F this is zero up
    to rounding: the recovered fiber coordinate does not move.
    """
    if algebra.rep is None:
        raise MissingRep("projective factor needs a matrix representation")
    alpha = as_coords(state.alpha, algebra.dim)
    f0 = float(F.value(alpha))
    if f0 == 0.0:
        raise ZeroFinslerNorm("F vanishes at the given state")
    values = []
    for s in (+dt, -dt):
        x_s = exp_orbit(algebra, state.x, alpha, s)
        v_s = x_s.matrix @ algebra.rep.matrix(alpha)
        alpha_s = _fiber_coordinate(algebra, x_s.matrix, v_s)
        values.append(float(F.value(alpha_s)))
    derivative = (values[0] - values[1]) / (2.0 * dt)
    return derivative / (2.0 * f0)


def _fiber_coordinate(algebra: LieAlgebra, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Left-logarithm of a velocity: coordinates of x^{-1} v in the rep basis."""
    xi = np.linalg.solve(x, v)
    flat = algebra.rep.basis_matrices.reshape(algebra.dim, -1)
    gram = flat @ flat.T
    return np.linalg.solve(gram, flat @ xi.reshape(-1))


# ---------------------------------------------------------------------------
# Batched sampling helpers (used by property tests and the acceptance suite)
# ---------------------------------------------------------------------------


def sample_pairs(
    algebra: LieAlgebra, n_samples: int, seed: int = DEFAULT_SEED
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded random (a, alpha) coordinate batches, shape (n_samples, n)."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n_samples, algebra.dim))
    AL = rng.standard_normal((n_samples, algebra.dim))
    # keep alpha away from the zero section for homogeneous Lagrangians
    norms = np.linalg.norm(AL, axis=1)
    small = norms < 1e-3
    AL[small] += 1.0
    return A, AL


def quadratic_residual_batch(
    algebra: LieAlgebra, G: np.ndarray, A: np.ndarray, AL: np.ndarray
) -> np.ndarray:
    """Vectorized <G alpha, [a, alpha]> over sample batches."""
    br = np.einsum("ijk,si,sj->sk", algebra.structure_constants, A, AL)
    return np.einsum("sk,sk->s", AL @ np.asarray(G, dtype=float), br)


def norm_residual_batch(
    algebra: LieAlgebra, G: np.ndarray, A: np.ndarray, AL: np.ndarray
) -> np.ndarray:
    """Vectorized Rapcsak residual of sqrt(alpha^T G alpha) over batches."""
    G = np.asarray(G, dtype=float)
    br = np.einsum("ijk,si,sj->sk", algebra.structure_constants, A, AL)
    quad = np.einsum("si,si->s", AL @ G, AL)
    return np.einsum("sk,sk->s", AL @ G, br) / np.sqrt(quad)
