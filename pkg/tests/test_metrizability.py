import numpy as np
import pytest

from liespray import algebra as la
from liespray import metrizability as mz
from liespray import spray as sp
from liespray.errors import (
    AsymmetricInput,
    BadAlgebra,
    ZeroFiberPoint,
    ZeroFinslerNorm,
)

CATALOG = ["abelian(3)", "heisenberg3", "so3", "sl2r", "e2", "so3_plus_r"]


# ---------------------------------------------------------------------------
# Lagrangians and residuals
# ---------------------------------------------------------------------------


def test_el_residual_abelian_always_zero():
    A = la.catalog("abelian(4)")
    E = mz.quadratic_energy(np.eye(4))
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert mz.euler_lagrange_residual(
            A, E, rng.standard_normal(4), rng.standard_normal(4)
        ) == 0.0


def test_el_residual_so3_euclidean_energy_vanishes():
    # <a x alpha, alpha> = 0 by cross-product orthogonality
    S = la.catalog("so3")
    E = mz.quadratic_energy(np.eye(3))
    rng = np.random.default_rng(1)
    for _ in range(50):
        r = mz.euler_lagrange_residual(
            S, E, rng.standard_normal(3), rng.standard_normal(3)
        )
        assert abs(r) <= 1e-14


def test_el_residual_heisenberg_hand_value():
    H = la.catalog("heisenberg3")
    E = mz.quadratic_energy(np.eye(3))
    assert mz.euler_lagrange_residual(H, E, [1, 0, 0], [0, 1, 1]) == pytest.approx(1.0)


def test_rapcsak_residual_hand_values():
    S = la.catalog("so3")
    F = mz.finsler_norm(np.eye(3))
    rng = np.random.default_rng(2)
    for _ in range(50):
        r = mz.rapcsak_residual(S, F, rng.standard_normal(3), rng.standard_normal(3))
        assert abs(r) <= 1e-14
    H = la.catalog("heisenberg3")
    F = mz.finsler_norm(np.eye(3))
    assert mz.rapcsak_residual(H, F, [1, 0, 0], [0, 1, 1]) == pytest.approx(
        1.0 / np.sqrt(2.0)
    )


def test_rapcsak_requires_degree_one():
    H = la.catalog("heisenberg3")
    E = mz.quadratic_energy(np.eye(3))
    with pytest.raises(ValueError):
        mz.rapcsak_residual(H, E, [1, 0, 0], [0, 1, 0])


def test_zero_fiber_point_raises_for_norm_type():
    H = la.catalog("heisenberg3")
    F = mz.finsler_norm(np.eye(3))
    with pytest.raises(ZeroFiberPoint):
        mz.rapcsak_residual(H, F, [1, 0, 0], [0, 0, 0])
    with pytest.raises(ZeroFiberPoint):
        mz.euler_lagrange_residual(H, F, [1, 0, 0], [0, 0, 0])


def test_finite_difference_gradient_fallback():
    L = mz.InvariantLagrangian(value=lambda a: float(np.sum(a**4)))
    assert mz.gradient_consistency(L, dim=3, samples=30) <= 1e-5
    alpha = np.array([0.5, -1.0, 2.0])
    np.testing.assert_allclose(L.gradient_at(alpha), 4 * alpha**3, rtol=1e-7)


def test_zero_set_equivalence_el_vs_rapcsak():
    rng = np.random.default_rng(3)
    for name in CATALOG:
        A = la.catalog(name)
        Q = rng.standard_normal((A.dim, A.dim))
        G = Q.T @ Q + 0.5 * np.eye(A.dim)
        a_batch, al_batch = mz.sample_pairs(A, 1000, seed=9)
        el = mz.quadratic_residual_batch(A, G, a_batch, al_batch)
        rap = mz.norm_residual_batch(A, G, a_batch, al_batch)
        assert np.all((np.abs(el) <= 1e-10) == (np.abs(rap) <= 1e-10))


# ---------------------------------------------------------------------------
# skewness
# ---------------------------------------------------------------------------


def test_skewness_residual_values():
    assert mz.skewness_residual(la.catalog("abelian(4)"), np.eye(4)) == 0.0
    assert mz.skewness_residual(la.catalog("so3"), np.eye(3)) == 0.0
    assert mz.skewness_residual(la.catalog("heisenberg3"), np.eye(3)) == pytest.approx(1.0)


def test_skewness_rejects_asymmetric_input():
    with pytest.raises(AsymmetricInput):
        mz.skewness_residual(la.catalog("so3"), np.array([[0.0, 1, 0], [0, 0, 0], [0, 0, 0]]))


def test_polarization_soundness():
    # <G[a,alpha], alpha> + <G alpha, [a,alpha]> equals the quadratic form of
    # ad_a^T G + G ad_a at alpha, so a zero skewness residual kills the
    # variational residual of the associated energy
    rng = np.random.default_rng(5)
    for name in CATALOG:
        A = la.catalog(name)
        for _ in range(200):
            Q = rng.standard_normal((A.dim, A.dim))
            G = 0.5 * (Q + Q.T)
            a = rng.standard_normal(A.dim)
            alpha = rng.standard_normal(A.dim)
            br = la.bracket(A, a, alpha).coords
            lhs = float(br @ G @ alpha + alpha @ G @ br)
            M = la.ad_matrix(A, a).T @ G + G @ la.ad_matrix(A, a)
            rhs = float(alpha @ M @ alpha)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


# ---------------------------------------------------------------------------
# feasibility decision
# ---------------------------------------------------------------------------

EXPECTED = {
    "abelian(3)": mz.Feasibility.FEASIBLE,
    "so3": mz.Feasibility.FEASIBLE,
    "so3_plus_r": mz.Feasibility.FEASIBLE,
    "heisenberg3": mz.Feasibility.INFEASIBLE,
    "e2": mz.Feasibility.INFEASIBLE,
    "sl2r": mz.Feasibility.INFEASIBLE,
}


@pytest.mark.parametrize("name, expected", sorted(EXPECTED.items()))
def test_catalog_verdicts(name, expected):
    report = mz.invariant_metrizability(la.catalog(name))
    assert report.status is expected


def test_feasible_reports_carry_valid_witnesses():
    for name in ("abelian(3)", "so3", "so3_plus_r"):
        A = la.catalog(name)
        report = mz.invariant_metrizability(A)
        W = report.witness
        assert W is not None
        assert mz.skewness_residual(A, W.G) <= 1e-9
        assert W.lambda_min >= 1e-6
        assert np.trace(W.G) == pytest.approx(A.dim)
        a_batch, al_batch = mz.sample_pairs(A, 2000, seed=4)
        res = mz.quadratic_residual_batch(A, W.G, a_batch, al_batch)
        assert np.max(np.abs(res)) <= 1e-9


def test_so3_witness_is_euclidean():
    report = mz.invariant_metrizability(la.catalog("so3"))
    np.testing.assert_allclose(report.witness.G, np.eye(3), atol=1e-12)


def test_infeasible_certificates_are_isotropic_directions():
    for name, direction in (("heisenberg3", [0, 0, 1]), ("e2", [1, 0, 0])):
        A = la.catalog(name)
        report = mz.invariant_metrizability(A)
        assert report.certificate is not None
        u = report.certificate.coords
        np.testing.assert_allclose(np.abs(u) / np.linalg.norm(u), np.abs(direction), atol=1e-12)
        W = mz.invariance_subspace(A)
        assert mz.certificate_residual(W, u / np.linalg.norm(u)) <= 1e-9


def test_sl2r_subspace_is_the_killing_line_with_mixed_signs():
    A = la.catalog("sl2r")
    W = mz.invariance_subspace(A)
    assert W.shape[0] == 1
    eigs = np.linalg.eigvalsh(W[0])
    assert eigs[0] < -1e-6 and eigs[-1] > 1e-6


def test_heisenberg_subspace_forces_center_isotropic():
    W = mz.invariance_subspace(la.catalog("heisenberg3"))
    assert W.shape[0] == 3
    assert np.max(np.abs(W[:, 2, :])) <= 1e-12
    assert np.max(np.abs(W[:, :, 2])) <= 1e-12


def test_rotated_heisenberg_is_undetermined_without_certificate():
    # moving the forced-isotropic direction off the coordinate axes removes
    # the certificate, and the optimum sits exactly on the verdict boundary
    H = la.catalog("heisenberg3")
    theta = 0.7
    R = np.array(
        [
            [np.cos(theta), 0, np.sin(theta)],
            [0, 1, 0],
            [-np.sin(theta), 0, np.cos(theta)],
        ]
    )
    c = np.einsum(
        "pi,qj,ijk,ks->pqs", R, R, np.asarray(H.structure_constants), np.linalg.inv(R)
    )
    rotated = la.LieAlgebra(dim=3, structure_constants=c)
    report = mz.invariant_metrizability(rotated)
    assert report.status is mz.Feasibility.UNDETERMINED
    assert report.certificate is None
    assert abs(report.lambda_min_achieved) < 1e-6


def test_verdict_invariant_under_constant_scaling():
    for name in CATALOG:
        A = la.catalog(name)
        scaled = la.LieAlgebra(
            dim=A.dim, structure_constants=2.0 * np.asarray(A.structure_constants)
        )
        assert (
            mz.invariant_metrizability(scaled).status
            is mz.invariant_metrizability(A).status
        )


def test_reports_are_bit_identical_for_equal_seeds():
    A = la.catalog("so3_plus_r")
    assert (
        mz.invariant_metrizability(A, seed=123).to_json()
        == mz.invariant_metrizability(A, seed=123).to_json()
    )


def test_report_serialization_fields():
    doc = mz.invariant_metrizability(la.catalog("heisenberg3")).to_dict()
    assert set(doc) == {
        "status",
        "witness",
        "certificate",
        "lambda_min_achieved",
        "subspace_dim",
        "iterations",
        "seed",
    }
    assert doc["status"] == "Infeasible"
    assert doc["witness"] is None
    assert doc["certificate"] == [0.0, 0.0, 1.0]


def test_bad_algebra_rejected_by_decision():
    c = np.zeros((3, 3, 3))
    c[0, 1, 1] = 0.3
    c[1, 0, 1] = -0.3
    c[0, 1, 2] = 1.0
    c[1, 0, 2] = -1.0
    c[0, 2, 1] = 1.0  # breaks Jacobi together with the entries above
    c[2, 0, 1] = -1.0
    broken = la.LieAlgebra(dim=3, structure_constants=c, _validate=False)
    if la.jacobi_residual(broken) > 1e-10:
        with pytest.raises(BadAlgebra):
            mz.invariant_metrizability(broken)


def test_projective_verdicts_coincide():
    for name in CATALOG:
        A = la.catalog(name)
        assert (
            mz.invariant_projective_metrizability(A).status
            is mz.invariant_metrizability(A).status
        )


# ---------------------------------------------------------------------------
# projective factor
# ---------------------------------------------------------------------------


def test_projective_factor_vanishes_for_invariant_norms():
    rng = np.random.default_rng(6)
    for name in ("heisenberg3", "so3", "e2"):
        A = la.catalog(name)
        F = mz.finsler_norm(np.eye(A.dim))
        for _ in range(10):
            x = sp.exp_orbit(
                A, sp.identity_point(A), rng.standard_normal(A.dim), 0.5
            )
            alpha = rng.standard_normal(A.dim)
            state = sp.TangentState(x=x, alpha=A.element(alpha))
            assert abs(mz.projective_factor(A, F, state)) <= 1e-7


def test_projective_factor_scale_free():
    A = la.catalog("so3")
    state = sp.TangentState(
        x=sp.identity_point(A), alpha=A.element([1.0, 0.5, -0.25])
    )
    F = mz.finsler_norm(np.eye(3))
    F3 = mz.InvariantLagrangian(
        value=lambda a: 3.0 * F.value(a),
        gradient=lambda a: 3.0 * F.gradient_at(a),
        homogeneity_degree=1.0,
    )
    assert mz.projective_factor(A, F, state) == mz.projective_factor(A, F3, state)


def test_projective_factor_zero_norm_raises():
    A = la.catalog("so3")
    F = mz.finsler_norm(np.eye(3))
    state = sp.TangentState(x=sp.identity_point(A), alpha=A.element([0.0, 0.0, 0.0]))
    with pytest.raises(ZeroFinslerNorm):
        mz.projective_factor(A, F, state)


def test_norm_from_energy_matches_closed_form():
    G = np.diag([2.0, 1.0, 0.5])
    F1 = mz.finsler_norm(G)
    F2 = mz.norm_from_energy(mz.quadratic_energy(G))
    rng = np.random.default_rng(8)
    for _ in range(20):
        a = rng.standard_normal(3)
        assert F1.value(a) == pytest.approx(F2.value(a))
        np.testing.assert_allclose(F1.gradient_at(a), F2.gradient_at(a), rtol=1e-12)
