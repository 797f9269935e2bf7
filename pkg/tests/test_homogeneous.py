import numpy as np
import pytest

from liespray import homogeneous as go
from liespray.errors import ZeroVelocity


# ---------------------------------------------------------------------------
# the rotation lift
# ---------------------------------------------------------------------------


def test_lift_matrix_zero_vector():
    assert not go.rotation_lift_matrix(1.0, [0.0, 0.0]).any()


def test_lift_matrix_kappa_zero_is_pure_translation():
    np.testing.assert_allclose(
        go.rotation_lift_matrix(0.0, [1.0, 0.0]),
        [[0, 0, 1], [0, 0, 0], [0, 0, 0]],
    )


def test_lift_matrix_three_four_five():
    np.testing.assert_allclose(
        go.rotation_lift_matrix(1.0, [3.0, 4.0]),
        [[0, -5, 3], [5, 0, 4], [0, 0, 0]],
    )


def test_lift_axiom_report_kappa_zero_all_clean():
    rep = go.lift_axiom_report(go.rotation_lift(0.0), samples=64, seed=3)
    assert rep.projection <= 1e-12
    assert rep.positive_homogeneity <= 1e-12
    assert rep.equivariance <= 1e-12
    assert rep.negative_homogeneity <= 1e-12


def test_lift_axiom_report_kappa_one():
    rep = go.lift_axiom_report(go.rotation_lift(1.0), samples=64, seed=3)
    assert rep.projection <= 1e-12
    assert rep.positive_homogeneity <= 1e-12
    assert rep.equivariance <= 1e-12
    # scaling by -1 flips the translation but not the rotation rate
    assert rep.negative_homogeneity == pytest.approx(2.0, abs=1e-12)


def test_negative_homogeneity_gap_anchor():
    gap = go.homogeneity_gap(go.rotation_lift(1.0), [1.0, 0.0], -1.0)
    assert abs(gap - 2.0) <= 1e-12


def test_lift_axiom_report_detects_broken_projection():
    broken = go.HomogeneousLift(
        kappa=0.0,
        evaluate=lambda v: go.rotation_lift_matrix(0.0, 2.0 * np.asarray(v)),
    )
    rep = go.lift_axiom_report(broken, samples=32, seed=3)
    assert rep.projection > 0.1


# ---------------------------------------------------------------------------
# geodesics
# ---------------------------------------------------------------------------


def test_straight_lines_at_kappa_zero():
    s = go.geodesic_closed_form(0.0, [1.0, 2.0], 3.0)
    np.testing.assert_allclose(s.position, [3.0, 6.0])
    np.testing.assert_allclose(s.velocity, [1.0, 2.0])


def test_unit_circle_at_kappa_one():
    s = go.geodesic_closed_form(1.0, [1.0, 0.0], np.pi)
    np.testing.assert_allclose(s.position, [0.0, 2.0], atol=1e-14)
    np.testing.assert_allclose(s.velocity, [-1.0, 0.0], atol=1e-14)
    # radius 1/kappa around (0, 1), unit speed
    for t in np.linspace(0.0, 2 * np.pi, 17):
        st = go.geodesic_closed_form(1.0, [1.0, 0.0], t)
        assert np.linalg.norm(st.position - [0.0, 1.0]) == pytest.approx(1.0)
        assert st.speed == pytest.approx(1.0)


def test_time_zero_returns_initial_data():
    s = go.geodesic_closed_form(2.5, [0.3, -0.4], 0.0)
    np.testing.assert_allclose(s.position, [0.0, 0.0])
    np.testing.assert_allclose(s.velocity, [0.3, -0.4])


def test_series_branch_agrees_with_ode_oracle():
    # straddle the branch switch at |omega * t| = 1e-4 and check both sides
    # against the independent integrator
    kappa = 1e-5
    v = np.array([1.0, 0.0])
    for t_end in (9.9, 10.1):  # theta = 0.99e-4 and 1.01e-4
        closed = go.geodesic_closed_form(kappa, v, t_end)
        _, states = go.integrate_geodesic(kappa, go.GoState([0, 0], v), t_end, 4000)
        assert np.linalg.norm(states[-1].position - closed.position) <= 1e-9
        assert np.linalg.norm(states[-1].velocity - closed.velocity) <= 1e-12


@pytest.mark.parametrize("kappa", [-1.0, 0.0, 0.5, 1.0, 2.0])
@pytest.mark.parametrize("norm", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("t_end", [1.0, float(np.pi)])
def test_ode_matches_closed_form(kappa, norm, t_end):
    v = norm * np.array([0.6, 0.8])
    _, states = go.integrate_geodesic(kappa, go.GoState([0, 0], v), t_end, 2000)
    oracle = go.geodesic_closed_form(kappa, v, t_end)
    assert np.linalg.norm(states[-1].position - oracle.position) <= 1e-7
    assert np.linalg.norm(states[-1].velocity - oracle.velocity) <= 1e-7


def test_ode_speed_conserved():
    _, states = go.integrate_geodesic(1.0, go.GoState([0, 0], [1, 0]), np.pi, 2000)
    drift = max(abs(s.speed - 1.0) for s in states)
    assert drift <= 1e-9


def test_ode_straight_line_exact_at_kappa_zero():
    v = np.array([1.0, 2.0])
    times, states = go.integrate_geodesic(0.0, go.GoState([0, 0], v), 3.0, 50)
    for t, s in zip(times, states):
        assert np.max(np.abs(s.position - t * v)) <= 1e-12


def test_non_reversibility_for_curved_family():
    fwd = go.geodesic_closed_form(1.0, [-1.0, 0.0], np.pi)
    rev = go.geodesic_closed_form(1.0, [1.0, 0.0], -np.pi)
    assert np.linalg.norm(fwd.position - rev.position) >= 0.1


def test_reversibility_at_kappa_zero():
    fwd = go.geodesic_closed_form(0.0, [-1.0, 0.0], np.pi)
    rev = go.geodesic_closed_form(0.0, [1.0, 0.0], -np.pi)
    assert np.linalg.norm(fwd.position - rev.position) <= 1e-10


def test_left_invariance_under_rigid_motions():
    # applying a fixed motion to a geodesic gives the geodesic with
    # transformed initial data
    kappa = 1.0
    theta = 0.9
    R = go.rotation_matrix(theta)
    b = np.array([2.0, -1.0])
    v = np.array([0.8, 0.3])
    for t in np.linspace(0.0, 3.0, 7):
        base = go.geodesic_closed_form(kappa, v, t)
        moved = go.geodesic_closed_form(kappa, R @ v, t, position=b)
        np.testing.assert_allclose(
            moved.position, R @ base.position + b, atol=1e-9
        )
        np.testing.assert_allclose(moved.velocity, R @ base.velocity, atol=1e-9)


def test_geodesic_vector_consistency():
    # the velocity at time t is the initial velocity pushed forward by the
    # one-parameter subgroup, i.e. rotated by the accumulated angle
    kappa, v = 0.7, np.array([1.2, -0.5])
    omega = kappa * np.linalg.norm(v)
    for t in np.linspace(0.0, 4.0, 9):
        st = go.geodesic_closed_form(kappa, v, t)
        np.testing.assert_allclose(
            st.velocity, go.rotation_matrix(omega * t) @ v, atol=1e-9
        )


def test_first_integral_drift_bounds():
    assert go.first_integral_drift(0.0, samples=5, steps=5000) <= 1e-9
    assert go.first_integral_drift(1.0, samples=5, steps=5000) <= 1e-9


def test_non_invariant_observable_drifts():
    # v1 is not rotation invariant, so it oscillates with amplitude |v|
    # along a circular geodesic
    _, states = go.integrate_geodesic(1.0, go.GoState([0, 0], [1, 0]), 5.0, 5000)
    v1 = [s.velocity[0] for s in states]
    assert max(v1) - min(v1) > 1.0


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------


def test_curvature_closed_form_values():
    assert not go.curvature_closed_form(0.0, [1.0, 0.5]).any()
    np.testing.assert_allclose(go.curvature_closed_form(1.0, [1.0, 0.0]), [0.0, 1.0])
    np.testing.assert_allclose(go.curvature_closed_form(2.0, [0.0, 1.0]), [-4.0, 0.0])


@pytest.mark.parametrize("kappa", [0.0, 1.0, 2.0])
def test_curvature_finite_difference_matches_closed_form(kappa):
    for angle in np.linspace(0.0, 2 * np.pi, 8, endpoint=False):
        y = np.array([np.cos(angle), np.sin(angle)])
        err = np.max(
            np.abs(
                go.curvature_finite_difference(kappa, y)
                - go.curvature_closed_form(kappa, y)
            )
        )
        assert err <= 1e-5


def test_curvature_flat_member_is_numerically_zero():
    for y in ([1.0, 0.0], [0.3, -2.0]):
        assert np.max(np.abs(go.curvature_finite_difference(0.0, y))) <= 1e-10


def test_curvature_quadratic_in_the_parameter():
    y = np.array([0.6, -0.8])
    r1 = go.curvature_finite_difference(1.0, y)
    r2 = go.curvature_finite_difference(2.0, y)
    np.testing.assert_allclose(r2, 4.0 * r1, atol=1e-5)


def test_curvature_rejects_zero_velocity():
    with pytest.raises(ZeroVelocity):
        go.curvature_finite_difference(1.0, [0.0, 0.0])
    with pytest.raises(ZeroVelocity):
        go.connection_matrix(1.0, [0.0, 0.0])


# ---------------------------------------------------------------------------
# verdict and export
# ---------------------------------------------------------------------------


def test_invariant_metrizability_verdicts():
    assert go.invariant_metrizability_verdict(0.0) == go.METRIZABLE
    assert go.invariant_metrizability_verdict(1.0) == go.NOT_INVARIANT_METRIZABLE
    assert go.invariant_metrizability_verdict(-1.0) == go.NOT_INVARIANT_METRIZABLE


def test_trajectory_csv_layout():
    times, states = go.integrate_geodesic(0.0, go.GoState([0, 0], [1, 2]), 3.0, 3)
    text = go.trajectory_csv(times, states)
    lines = text.strip().split("\n")
    assert lines[0] == "t,x1,x2,v1,v2,speed"
    assert len(lines) == 5
    last = [float(x) for x in lines[-1].split(",")]
    np.testing.assert_allclose(last, [3.0, 3.0, 6.0, 1.0, 2.0, np.sqrt(5.0)])
