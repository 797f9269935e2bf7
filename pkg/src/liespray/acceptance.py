"""Acceptance criteria, runnable as one suite.

Each criterion is a function returning a ``CriterionResult``; ``run_all``
executes all of them with a common seed and ``render_report`` turns the
results into the deterministic text that ``liespray verify`` prints (one
pass/fail line per criterion).  The same functions back the pytest
acceptance module, so the CLI, the HTTP endpoint and the test suite agree
by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import algebra as alg
from . import homogeneous as go
from . import metrizability as mz
from . import spray as sp

CATALOG = ("abelian(3)", "heisenberg3", "so3", "sl2r", "e2", "so3_plus_r")
FEASIBLE_EXPECTED = {
    "abelian(1)": True,
    "abelian(2)": True,
    "abelian(3)": True,
    "abelian(4)": True,
    "abelian(5)": True,
    "abelian(6)": True,
    "so3": True,
    "so3_plus_r": True,
    "heisenberg3": False,
    "e2": False,
    "sl2r": False,
}


@dataclass(frozen=True)
class CriterionResult:
    cid: int
    name: str
    passed: bool
    details: str


def _result(cid: int, name: str, passed: bool, details: str) -> CriterionResult:
    return CriterionResult(cid=cid, name=name, passed=bool(passed), details=details)


def criterion_01_heisenberg_verdict(seed: int) -> CriterionResult:
    report = mz.invariant_metrizability(alg.catalog("heisenberg3"), seed=seed)
    ok = report.status is mz.Feasibility.INFEASIBLE and report.certificate is not None
    align = resid = float("nan")
    if report.certificate is not None:
        u = report.certificate.coords
        u = u / np.linalg.norm(u)
        align = min(
            float(np.max(np.abs(u - [0, 0, 1]))), float(np.max(np.abs(u + [0, 0, 1])))
        )
        W = mz.invariance_subspace(alg.catalog("heisenberg3"))
        resid = mz.certificate_residual(W, u)
        ok = ok and align <= 1e-9 and resid <= 1e-9
    return _result(
        1,
        "Heisenberg canonical spray has no invariant metric",
        ok,
        f"status={report.status.value} cert_alignment={align:.2e} cert_residual={resid:.2e}",
    )


def criterion_02_catalog_verdicts(seed: int) -> CriterionResult:
    lines = []
    ok = True
    for name, feasible in FEASIBLE_EXPECTED.items():
        report = mz.invariant_metrizability(alg.catalog(name), seed=seed)
        good = (report.status is mz.Feasibility.FEASIBLE) == feasible and (
            report.status is not mz.Feasibility.UNDETERMINED
        )
        if feasible and good:
            A = alg.catalog(name)
            skew = mz.skewness_residual(A, report.witness.G)
            good = skew <= 1e-9 and report.witness.lambda_min >= 1e-6
        ok = ok and good
        lines.append(f"{name}:{report.status.value}")
    return _result(2, "catalog verdict table", ok, " ".join(lines))


def criterion_03_witness_soundness(seed: int) -> CriterionResult:
    worst = 0.0
    for name, feasible in FEASIBLE_EXPECTED.items():
        if not feasible:
            continue
        A = alg.catalog(name)
        report = mz.invariant_metrizability(A, seed=seed)
        if report.witness is None:
            return _result(3, "witness soundness", False, f"{name}: no witness")
        a_batch, al_batch = mz.sample_pairs(A, 10_000, seed=seed)
        res = mz.quadratic_residual_batch(A, report.witness.G, a_batch, al_batch)
        worst = max(worst, float(np.max(np.abs(res))))
    return _result(
        3,
        "witness energies satisfy the variational residual",
        worst <= 1e-9,
        f"max |<G alpha, [a, alpha]>| = {worst:.2e} over 1e4 pairs per feasible algebra",
    )


def criterion_04_zero_set_equivalence(seed: int) -> CriterionResult:
    ok = True
    checked = 0
    for name in CATALOG:
        A = alg.catalog(name)
        rng = np.random.default_rng(seed + 7)
        Q = rng.standard_normal((A.dim, A.dim))
        for G in (np.eye(A.dim), Q.T @ Q + 0.5 * np.eye(A.dim)):
            a_batch, al_batch = mz.sample_pairs(A, 1000, seed=seed)
            el = mz.quadratic_residual_batch(A, G, a_batch, al_batch)
            rap = mz.norm_residual_batch(A, G, a_batch, al_batch)
            agree = (np.abs(el) <= 1e-10) == (np.abs(rap) <= 1e-10)
            ok = ok and bool(np.all(agree))
            checked += el.size
    return _result(
        4,
        "energy and its square-root norm share a variational zero set",
        ok,
        f"{checked} sampled pairs compared at tolerance 1e-10",
    )


def criterion_05_projective_rigidity(seed: int) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    names = [n for n in CATALOG]
    for idx in range(100):
        A = alg.catalog(names[idx % len(names)])
        direction = rng.standard_normal(A.dim)
        x = sp.exp_orbit(A, sp.identity_point(A), direction, float(rng.uniform(-1, 1)))
        alpha = rng.standard_normal(A.dim)
        while np.linalg.norm(alpha) < 1e-2:
            alpha = rng.standard_normal(A.dim)
        Q = rng.standard_normal((A.dim, A.dim))
        F = mz.finsler_norm(Q.T @ Q + 0.5 * np.eye(A.dim))
        state = sp.TangentState(x=x, alpha=A.element(alpha))
        worst = max(worst, abs(mz.projective_factor(A, F, state)))
    statuses_match = all(
        mz.invariant_metrizability(alg.catalog(n), seed=seed).status
        is mz.invariant_projective_metrizability(alg.catalog(n), seed=seed).status
        for n in CATALOG
    )
    ok = worst <= 1e-7 and statuses_match
    return _result(
        5,
        "projective factor degenerates; projective verdicts match plain ones",
        ok,
        f"max |factor| = {worst:.2e} over 100 states; statuses_match={statuses_match}",
    )


def _sode_endpoint_error(A: alg.LieAlgebra, alpha, t_end: float, steps: int) -> float:
    I = sp.identity_point(A)
    v0 = A.rep.matrix(np.asarray(alpha, dtype=float))
    traj = sp.integrate_canonical_sode(I, v0, t_end, steps)
    oracle = sp.exp_orbit(A, I, alpha, t_end)
    return float(np.max(np.abs(traj.endpoint.matrix - oracle.matrix)))


ROUNDING_FLOOR = 1e-13


def criterion_06_sode_oracle(seed: int) -> CriterionResult:
    del seed  # deterministic initial data
    err_h = _sode_endpoint_error(alg.catalog("heisenberg3"), [1, 1, 0], 1.0, 1000)
    err_s = _sode_endpoint_error(alg.catalog("so3"), [0, 1, 0], 1.0, 1000)
    ok = err_h <= 1e-8 and err_s <= 1e-8

    notes = [f"endpoint errors heisenberg3={err_h:.2e} so3={err_s:.2e}"]
    for name, alpha in (("so3", [1.2, -0.7, 2.0]), ("heisenberg3", [1, 1, 0])):
        A = alg.catalog(name)
        errs = [_sode_endpoint_error(A, alpha, 1.0, steps) for steps in (250, 500, 1000)]
        if max(errs) < ROUNDING_FLOOR:
            # the integrator reproduces this flow to rounding at every step
            # count, so no order is observable; that is stronger than any
            # finite order
            notes.append(f"{name}: exact to rounding ({max(errs):.1e})")
            continue
        orders = [float(np.log2(errs[i] / errs[i + 1])) for i in range(2)]
        ok = ok and min(orders) >= 3.7
        notes.append(f"{name}: orders {orders[0]:.2f},{orders[1]:.2f}")
    return _result(6, "geodesic integrator matches exponential orbits", ok, "; ".join(notes))


def criterion_07_projector_algebra(seed: int) -> CriterionResult:
    worst = 0.0
    Z = None
    for name in CATALOG:
        A = alg.catalog(name)
        rng = np.random.default_rng(seed)
        for _ in range(1000):
            alpha = rng.standard_normal(A.dim)
            w = sp.SecondTangentVector(
                a=A.element(rng.standard_normal(A.dim)),
                b=A.element(rng.standard_normal(A.dim)),
            )
            h = sp.horizontal_project(A, alpha, w)
            v = sp.vertical_project(A, alpha, w)
            # complementarity: h keeps the base slot and h.b + v rebuilds w.b
            worst = max(worst, float(np.max(np.abs(h.a.coords - w.a.coords))))
            worst = max(worst, float(np.max(np.abs(h.b.coords + v.coords - w.b.coords))))
            # idempotence on each component
            hh = sp.horizontal_project(A, alpha, h)
            worst = max(worst, float(np.max(np.abs(hh.b.coords - h.b.coords))))
            Z = sp.SecondTangentVector(a=A.element(np.zeros(A.dim)), b=A.element(v.coords))
            vv = sp.vertical_project(A, alpha, Z)
            worst = max(worst, float(np.max(np.abs(vv.coords - v.coords))))
            # the spray itself is horizontal
            spray = sp.SecondTangentVector(a=A.element(alpha), b=A.element(np.zeros(A.dim)))
            worst = max(worst, float(np.max(np.abs(sp.vertical_project(A, alpha, spray).coords))))
    return _result(
        7,
        "projector algebra (idempotence, complementarity, spray horizontality)",
        worst <= 1e-14,
        f"max residual {worst:.2e} over 1000 samples per catalog algebra",
    )


def criterion_08_go_geodesics(seed: int) -> CriterionResult:
    del seed
    direction = np.array([0.6, 0.8])
    worst_end = 0.0
    worst_drift = 0.0
    for kappa in (-1.0, 0.0, 0.5, 1.0, 2.0):
        for norm in (0.5, 1.0, 2.0):
            v = norm * direction
            for t_end in (1.0, float(np.pi)):
                times, states = go.integrate_geodesic(
                    kappa, go.GoState([0, 0], v), t_end, 2000
                )
                oracle = go.geodesic_closed_form(kappa, v, t_end)
                worst_end = max(
                    worst_end,
                    float(np.linalg.norm(states[-1].position - oracle.position)),
                    float(np.linalg.norm(states[-1].velocity - oracle.velocity)),
                )
                drift = max(abs(s.speed**2 - norm**2) for s in states)
                worst_drift = max(worst_drift, drift)

    # kappa = 0: straight lines, exactly
    v0 = np.array([1.0, 2.0])
    times, states = go.integrate_geodesic(0.0, go.GoState([0, 0], v0), 3.0, 100)
    straight = max(
        float(np.max(np.abs(s.position - t * v0))) for t, s in zip(times, states)
    )

    fwd = go.geodesic_closed_form(1.0, [-1.0, 0.0], np.pi)
    rev = go.geodesic_closed_form(1.0, [1.0, 0.0], -np.pi)
    gap = float(np.linalg.norm(fwd.position - rev.position))

    ok = (
        worst_end <= 1e-7
        and worst_drift <= 1e-9
        and straight <= 1e-12
        and gap >= 0.1
    )
    return _result(
        8,
        "rotation-lift geodesics: oracle match, speed conservation, non-reversibility",
        ok,
        f"endpoint={worst_end:.2e} drift={worst_drift:.2e} straight={straight:.2e} gap={gap:.3f}",
    )


def criterion_09_curvature(seed: int) -> CriterionResult:
    del seed
    worst = 0.0
    for kappa in (0.0, 1.0, 2.0):
        for angle in np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False):
            y = np.array([np.cos(angle), np.sin(angle)])
            err = float(
                np.max(
                    np.abs(
                        go.curvature_finite_difference(kappa, y)
                        - go.curvature_closed_form(kappa, y)
                    )
                )
            )
            worst = max(worst, err)
    return _result(
        9,
        "finite-difference curvature matches the closed form",
        worst <= 1e-5,
        f"max error {worst:.2e} over 8 unit directions and kappa in {{0, 1, 2}}",
    )


def criterion_10_go_metrizability(seed: int) -> CriterionResult:
    del seed
    v0 = go.invariant_metrizability_verdict(0.0)
    vp = go.invariant_metrizability_verdict(1.0)
    vm = go.invariant_metrizability_verdict(-1.0)
    ok = v0 == go.METRIZABLE and vp == vm == go.NOT_INVARIANT_METRIZABLE
    return _result(
        10,
        "flat family member is metrizable; curved members are not",
        ok,
        f"kappa=0:{v0} kappa=1:{vp} kappa=-1:{vm}",
    )


def criterion_11_lift_axioms(seed: int) -> CriterionResult:
    worst = 0.0
    for kappa in (0.0, 1.0, -1.0, 2.0):
        rep = go.lift_axiom_report(go.rotation_lift(kappa), samples=64, seed=seed)
        worst = max(worst, rep.projection, rep.positive_homogeneity, rep.equivariance)
    anchor = go.homogeneity_gap(go.rotation_lift(1.0), [1.0, 0.0], -1.0)
    ok = worst <= 1e-12 and abs(anchor - 2.0) <= 1e-12
    return _result(
        11,
        "lift axioms hold; negative scaling fails by exactly twice the rotation rate",
        ok,
        f"max axiom residual {worst:.2e}; negative-scaling gap {anchor!r}",
    )


def criterion_12_first_integrals(seed: int) -> CriterionResult:
    d0 = go.first_integral_drift(0.0, samples=10, seed=seed, steps=5000, t_end=5.0)
    d1 = go.first_integral_drift(1.0, samples=10, seed=seed, steps=5000, t_end=5.0)
    ok = d0 <= 1e-9 and d1 <= 1e-9
    return _result(
        12,
        "invariant observables stay constant along integrated geodesics",
        ok,
        f"max drift kappa=0:{d0:.2e} kappa=1:{d1:.2e}",
    )


def _deterministic_documents(seed: int) -> bytes:
    parts = []
    for name in CATALOG:
        parts.append(mz.invariant_metrizability(alg.catalog(name), seed=seed).to_json())
    for kappa in (0.0, 1.0):
        parts.append(go.invariant_metrizability_verdict(kappa))
        times, states = go.integrate_geodesic(
            kappa, go.GoState([0, 0], [1.0, 0.5]), 1.0, 200
        )
        parts.append(go.trajectory_csv(times, states))
    A = alg.catalog("heisenberg3")
    traj = sp.integrate_canonical_sode(
        sp.identity_point(A), A.rep.matrix([1.0, 1.0, 0.0]), 1.0, 200
    )
    parts.append(sp.trajectory_to_csv(traj))
    return "\n".join(parts).encode()


def criterion_13_determinism(seed: int) -> CriterionResult:
    first = _deterministic_documents(seed)
    second = _deterministic_documents(seed)
    ok = first == second
    return _result(
        13,
        "identical seeds reproduce byte-identical reports",
        ok,
        f"{len(first)} report bytes compared",
    )


CRITERIA: tuple[Callable[[int], CriterionResult], ...] = (
    criterion_01_heisenberg_verdict,
    criterion_02_catalog_verdicts,
    criterion_03_witness_soundness,
    criterion_04_zero_set_equivalence,
    criterion_05_projective_rigidity,
    criterion_06_sode_oracle,
    criterion_07_projector_algebra,
    criterion_08_go_geodesics,
    criterion_09_curvature,
    criterion_10_go_metrizability,
    criterion_11_lift_axioms,
    criterion_12_first_integrals,
    criterion_13_determinism,
)


def run_all(seed: int = 42) -> list[CriterionResult]:
    return [fn(seed) for fn in CRITERIA]


def render_report(results: list[CriterionResult], seed: int) -> str:
    lines = [f"acceptance suite (seed={seed})"]
    for r in results:
        lines.append(f"[{r.cid:2d}] {'PASS' if r.passed else 'FAIL'} {r.name}: {r.details}")
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
