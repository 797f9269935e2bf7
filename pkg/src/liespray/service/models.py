"""Request and response schemas of the HTTP service.

``AlgebraSpec`` doubles as the on-disk algebra file schema: the CLI reads a
JSON file into this model and sends it as the request body, so one schema
serves both surfaces.  Bracket records use 1-based indices and only the
``i < j`` half is required; the remaining half is filled by antisymmetry.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..algebra import LieAlgebra, algebra_from_dict, algebra_to_dict, catalog


class BracketEntry(BaseModel):
    i: int
    j: int
    k: int
    value: float


class AlgebraSpec(BaseModel):
    """Structure-constant description of an algebra, optionally with a
    matrix representation (row-major flattened square matrices)."""

    dim: int = Field(ge=1)
    labels: list[str] = []
    brackets: list[BracketEntry] = []
    rep: list[list[float]] | None = None

    def to_algebra(self, name: str = "") -> LieAlgebra:
        return algebra_from_dict(self.model_dump(), name=name)

    @classmethod
    def from_algebra(cls, algebra: LieAlgebra) -> "AlgebraSpec":
        return cls.model_validate(algebra_to_dict(algebra))


AlgebraInput = str | AlgebraSpec
"""Catalog name or inline structure-constant document."""


def resolve_algebra(algebra: AlgebraInput) -> LieAlgebra:
    if isinstance(algebra, str):
        return catalog(algebra)
    return algebra.to_algebra()


class CheckRequest(BaseModel):
    algebra: AlgebraInput


class CheckResponse(BaseModel):
    name: str
    dim: int
    labels: list[str]
    jacobi_residual: float
    has_rep: bool
    closure_residual: float | None = None
    constants_mismatch: float | None = None


class MetrizeRequest(BaseModel):
    algebra: AlgebraInput
    seed: int = Field(default=42, ge=0)


class FeasibilityReportModel(BaseModel):
    """Wire form of a feasibility report; matrices are flattened row-major."""

    status: Literal["Feasible", "Infeasible", "Undetermined"]
    witness: list[float] | None
    certificate: list[float] | None
    lambda_min_achieved: float
    subspace_dim: int
    iterations: int
    seed: int


class GeodesicRequest(BaseModel):
    algebra: AlgebraInput
    alpha: list[float]
    t_end: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    steps: int = Field(default=1000, ge=1)


class TrajectorySample(BaseModel):
    t: float
    x: list[float]  # row-major m*m base point
    v: list[float]  # row-major m*m velocity


class GeodesicResponse(BaseModel):
    size: int
    samples: list[TrajectorySample]


class GoDemoRequest(BaseModel):
    kappa: float = 0.0
    v: list[float] = Field(min_length=2, max_length=2)
    t_end: float = Field(default=1.0, allow_inf_nan=False)
    steps: int = Field(default=1000, ge=1)


class GoSample(BaseModel):
    t: float
    x1: float
    x2: float
    v1: float
    v2: float
    speed: float


class LiftAxiomsModel(BaseModel):
    projection: float
    positive_homogeneity: float
    equivariance: float
    negative_homogeneity: float
    samples: int


class GoDemoResponse(BaseModel):
    kappa: float
    verdict: Literal["Metrizable", "NotInvariantMetrizable"]
    lift_axioms: LiftAxiomsModel
    samples: list[GoSample]


class VerifyRequest(BaseModel):
    seed: int = Field(default=42, ge=0)


class CriterionModel(BaseModel):
    cid: int
    name: str
    passed: bool
    details: str


class VerifyResponse(BaseModel):
    seed: int
    all_passed: bool
    results: list[CriterionModel]


class CatalogResponse(BaseModel):
    names: list[str]
