"""FastAPI application exposing the toolkit's operations.

Every endpoint is a stateless request/response wrapper over the core
package: validate an algebra, decide invariant metrizability, integrate
canonical geodesics, run the plane geodesic-orbit demo, and run the
acceptance suite.  Algebras arrive as catalog names or inline
structure-constant documents; the server never touches the filesystem.

Run with ``uvicorn liespray.service.app:app`` or ``liespray serve``.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import acceptance
from .. import homogeneous as go
from .. import metrizability as mz
from .. import spray as sp
from ..algebra import CATALOG_NAMES, jacobi_residual, rep_consistency
from ..errors import LieSprayError, MissingRep
from . import models

app = FastAPI(
    title="liespray",
    description=(
        "Invariant metrizability of canonical Lie-group sprays and planar "
        "geodesic-orbit structures"
    ),
)


@app.exception_handler(LieSprayError)
async def _domain_error(_request: Request, exc: LieSprayError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={"error": type(exc).__name__, "detail": str(exc)},
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/catalog", response_model=models.CatalogResponse)
def catalog_names() -> models.CatalogResponse:
    return models.CatalogResponse(names=list(CATALOG_NAMES))


@app.post("/check", response_model=models.CheckResponse)
def check(request: models.CheckRequest) -> models.CheckResponse:
    A = models.resolve_algebra(request.algebra)
    response = models.CheckResponse(
        name=A.name or "(inline)",
        dim=A.dim,
        labels=list(A.basis_labels),
        jacobi_residual=jacobi_residual(A),
        has_rep=A.rep is not None,
    )
    if A.rep is not None:
        closure, mismatch = rep_consistency(A)
        response.closure_residual = closure
        response.constants_mismatch = mismatch
    return response


@app.post("/metrize", response_model=models.FeasibilityReportModel)
def metrize(request: models.MetrizeRequest) -> models.FeasibilityReportModel:
    A = models.resolve_algebra(request.algebra)
    report = mz.invariant_metrizability(A, seed=request.seed)
    return models.FeasibilityReportModel.model_validate(report.to_dict())


@app.post("/geodesic", response_model=models.GeodesicResponse)
def geodesic(request: models.GeodesicRequest) -> models.GeodesicResponse:
    A = models.resolve_algebra(request.algebra)
    if A.rep is None:
        raise MissingRep("geodesic integration needs a matrix representation")
    v0 = A.rep.matrix(np.asarray(request.alpha, dtype=float))
    traj = sp.integrate_canonical_sode(
        sp.identity_point(A), v0, request.t_end, request.steps
    )
    samples = [
        models.TrajectorySample(
            t=float(t),
            x=[float(val) for val in p.matrix.reshape(-1)],
            v=[float(val) for val in v.reshape(-1)],
        )
        for t, p, v in zip(traj.times, traj.points, traj.velocities)
    ]
    return models.GeodesicResponse(size=traj.points[0].size, samples=samples)


@app.post("/go-demo", response_model=models.GoDemoResponse)
def go_demo(request: models.GoDemoRequest) -> models.GoDemoResponse:
    state0 = go.GoState(position=[0.0, 0.0], velocity=request.v)
    times, states = go.integrate_geodesic(
        request.kappa, state0, request.t_end, request.steps
    )
    samples = [
        models.GoSample(
            t=float(t),
            x1=float(s.position[0]),
            x2=float(s.position[1]),
            v1=float(s.velocity[0]),
            v2=float(s.velocity[1]),
            speed=s.speed,
        )
        for t, s in zip(times, states)
    ]
    axioms = go.lift_axiom_report(go.rotation_lift(request.kappa))
    return models.GoDemoResponse(
        kappa=request.kappa,
        verdict=go.invariant_metrizability_verdict(request.kappa),
        lift_axioms=models.LiftAxiomsModel.model_validate(axioms.to_dict()),
        samples=samples,
    )


@app.post("/verify", response_model=models.VerifyResponse)
def verify(request: models.VerifyRequest) -> models.VerifyResponse:
    results = acceptance.run_all(seed=request.seed)
    return models.VerifyResponse(
        seed=request.seed,
        all_passed=all(r.passed for r in results),
        results=[
            models.CriterionModel(
                cid=r.cid, name=r.name, passed=r.passed, details=r.details
            )
            for r in results
        ],
    )
