"""Finite-dimensional real Lie algebras given by structure constants.

A ``LieAlgebra`` stores the full coefficient array ``c[i, j, k]`` of the
bracket ``[e_i, e_j] = sum_k c[i, j, k] e_k``.  The array is antisymmetrized
in ``(i, j)`` at construction and the Jacobi identity is validated, so every
instance in circulation is an actual Lie algebra up to the stated tolerance.
Algebras may carry a faithful matrix representation, which the spray and
geodesic machinery requires; the bundled catalog provides the usual small
examples (abelian, Heisenberg, so(3), sl(2,R), the euclidean-motion algebra
of the plane, so(3) + R) with integer-entry representations.

All objects are immutable after construction and every operation is pure.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadAlgebra,
    DimensionMismatch,
    LinearDependence,
    NotClosed,
    ParseError,
    UnknownName,
)

JACOBI_TOL = 1e-12
CLOSURE_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


def as_coords(x, dim: int | None = None) -> np.ndarray:
    """Coerce an AlgebraElement or array-like to a 1-d float array."""
    v = np.asarray(getattr(x, "coords", x), dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a coordinate vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {v.shape[0]}")
    return v


@dataclass(frozen=True)
class AlgebraElement:
    """Element of a Lie algebra, held as coordinates in the chosen basis."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen(np.atleast_1d(self.coords)))
        if not np.all(np.isfinite(self.coords)):
            raise ValueError("algebra element has non-finite coordinates")

    @property
    def dim(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True)
class MatrixRep:
    """Faithful matrix representation: one m x m matrix per basis element."""

    basis_matrices: np.ndarray  # shape (n, m, m)

    def __post_init__(self):
        mats = np.asarray(self.basis_matrices, dtype=float)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise DimensionMismatch(
                f"representation must be a stack of square matrices, got shape {mats.shape}"
            )
        object.__setattr__(self, "basis_matrices", _frozen(mats))

    @property
    def size(self) -> int:
        return self.basis_matrices.shape[1]

    @property
    def n(self) -> int:
        return self.basis_matrices.shape[0]

    def matrix(self, x) -> np.ndarray:
        """Matrix of an algebra element: sum_i x^i E_i."""
        v = as_coords(x, self.n)
        return np.tensordot(v, self.basis_matrices, axes=(0, 0))


@dataclass(frozen=True)
class LieAlgebra:
    """Lie algebra defined by its structure constants.

    ``structure_constants[i, j, k]`` is the coefficient of ``e_k`` in
    ``[e_i, e_j]``.  Antisymmetry in ``(i, j)`` is enforced exactly at
    construction; the Jacobi identity must hold to ``JACOBI_TOL * max|c|``.
    """

    dim: int
    structure_constants: np.ndarray
    basis_labels: tuple[str, ...] = ()
    rep: MatrixRep | None = None
    name: str = ""
    _validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        n = int(self.dim)
        if n < 1:
            raise DimensionMismatch("dimension must be a positive integer")
        c = np.asarray(self.structure_constants, dtype=float)
        if c.shape != (n, n, n):
            raise DimensionMismatch(
                f"structure constants must have shape {(n, n, n)}, got {c.shape}"
            )
        c = 0.5 * (c - c.transpose(1, 0, 2))
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "structure_constants", _frozen(c))
        labels = tuple(self.basis_labels) or tuple(f"e{i + 1}" for i in range(n))
        if len(labels) != n:
            raise DimensionMismatch(f"expected {n} basis labels, got {len(labels)}")
        object.__setattr__(self, "basis_labels", labels)
        if self.rep is not None and self.rep.n != n:
            raise DimensionMismatch(
                f"representation has {self.rep.n} basis matrices for dimension {n}"
            )
        if self._validate:
            scale = max(float(np.max(np.abs(c))), 1.0)
            res = jacobi_residual(self)
            if res > JACOBI_TOL * scale:
                raise BadAlgebra(
                    f"Jacobi identity fails: residual {res:.3e} exceeds "
                    f"{JACOBI_TOL * scale:.3e}"
                )

    def element(self, coords) -> AlgebraElement:
        return AlgebraElement(as_coords(coords, self.dim))

    def basis_element(self, i: int) -> AlgebraElement:
        v = np.zeros(self.dim)
        v[i] = 1.0
        return AlgebraElement(v)


def bracket(algebra: LieAlgebra, x, y) -> AlgebraElement:
    """Evaluate [x, y] from the structure constants.

    Bilinear and antisymmetric by construction of the constant array.
    """
    xv = as_coords(x, algebra.dim)
    yv = as_coords(y, algebra.dim)
    return AlgebraElement(bracket_coords(algebra, xv, yv))


def bracket_coords(algebra: LieAlgebra, xv: np.ndarray, yv: np.ndarray) -> np.ndarray:
    """Bracket on raw coordinate arrays; supports batched inputs (..., n)."""
    return np.einsum("ijk,...i,...j->...k", algebra.structure_constants, xv, yv)


def jacobi_residual(algebra: LieAlgebra) -> float:
    """Max-norm of the cyclic Jacobi sum over all basis triples.

    Returns max over (i, j, k) of ||[[e_i,e_j],e_k] + [[e_j,e_k],e_i] +
    [[e_k,e_i],e_j]||_inf.
    """
    c = algebra.structure_constants
    # [[e_i, e_j], e_k]^l = sum_m c[i,j,m] c[m,k,l]
    d = np.einsum("ijm,mkl->ijkl", c, c)
    cyc = d + d.transpose(1, 2, 0, 3) + d.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(cyc))) if c.size else 0.0


def ad_matrix(algebra: LieAlgebra, a) -> np.ndarray:
    """Matrix of the adjoint map alpha -> [a, alpha].

    Entry (k, j) is sum_i c[i, j, k] a^i, so ad(a) @ coords(alpha) equals
    the coordinates of bracket(a, alpha).
    """
    av = as_coords(a, algebra.dim)
    return np.einsum("ijk,i->kj", algebra.structure_constants, av)


def ad_basis(algebra: LieAlgebra) -> np.ndarray:
    """Stack of adjoint matrices of the basis elements, shape (n, n, n)."""
    # ad(e_i)[k, j] = c[i, j, k]
    return algebra.structure_constants.transpose(0, 2, 1)


def from_matrix_rep(mats, labels=(), name: str = "") -> LieAlgebra:
    """Build a Lie algebra from a linearly independent list of matrices.

    The structure constants are the least-squares coefficients of each
    commutator in the given basis (normal equations on the Gram matrix).
    Raises ``LinearDependence`` if the matrices do not form a basis and
    ``NotClosed`` if some commutator leaves their span beyond tolerance.
    """
    stack = np.asarray(mats, dtype=float)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise DimensionMismatch(
            f"expected a stack of square matrices, got shape {stack.shape}"
        )
    n, m, _ = stack.shape
    flat = stack.reshape(n, m * m)
    scale = max(float(np.max(np.abs(stack))), 1.0)

    sv = np.linalg.svd(flat, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise LinearDependence(
            f"basis matrices are linearly dependent (smallest singular value "
            f"{sv[-1]:.3e} vs largest {sv[0]:.3e})"
        )

    gram = flat @ flat.T
    c = np.zeros((n, n, n))
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            comm = stack[i] @ stack[j] - stack[j] @ stack[i]
            rhs = flat @ comm.reshape(-1)
            coeffs = np.linalg.solve(gram, rhs)
            residual = float(
                np.max(np.abs(comm.reshape(-1) - flat.T @ coeffs))
            )
            worst = max(worst, residual)
            c[i, j, :] = coeffs
            c[j, i, :] = -coeffs
    if worst > CLOSURE_TOL * scale:
        raise NotClosed(
            f"commutators leave the span: reconstruction residual {worst:.3e} "
            f"exceeds {CLOSURE_TOL * scale:.3e}"
        )
    return LieAlgebra(
        dim=n,
        structure_constants=c,
        basis_labels=tuple(labels),
        rep=MatrixRep(stack),
        name=name,
    )


def rep_consistency(algebra: LieAlgebra) -> tuple[float, float]:
    """Closure residual and structure-constant mismatch of the attached rep.

    Returns (0.0, 0.0) for algebras without a representation.
    """
    if algebra.rep is None:
        return 0.0, 0.0
    induced = from_matrix_rep(algebra.rep.basis_matrices)
    mismatch = float(
        np.max(
            np.abs(induced.structure_constants - algebra.structure_constants)
        )
    )
    stack = algebra.rep.basis_matrices
    flat = stack.reshape(algebra.dim, -1)
    worst = 0.0
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            comm = stack[i] @ stack[j] - stack[j] @ stack[i]
            recon = np.tensordot(
                induced.structure_constants[i, j], flat, axes=(0, 0)
            )
            worst = max(worst, float(np.max(np.abs(comm.reshape(-1) - recon))))
    return worst, mismatch


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

_ABELIAN_RE = re.compile(r"^abelian\((\d+)\)$")


def _elementary(m: int, r: int, s: int) -> np.ndarray:
    e = np.zeros((m, m))
    e[r, s] = 1.0
    return e


def _so3_generators() -> np.ndarray:
    # (L_i)_{jk} = -eps_{ijk}: rotation generators with [L1, L2] = L3 cyclically.
    L1 = np.array([[0.0, 0, 0], [0, 0, -1], [0, 1, 0]])
    L2 = np.array([[0.0, 0, 1], [0, 0, 0], [-1, 0, 0]])
    L3 = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]])
    return np.stack([L1, L2, L3])


def _catalog_builders():
    def heisenberg3():
        mats = np.stack(
            [_elementary(3, 0, 1), _elementary(3, 1, 2), _elementary(3, 0, 2)]
        )
        return from_matrix_rep(mats, name="heisenberg3")

    def so3():
        return from_matrix_rep(_so3_generators(), name="so3")

    def sl2r():
        H = np.array([[1.0, 0], [0, -1]])
        E = np.array([[0.0, 1], [0, 0]])
        F = np.array([[0.0, 0], [1, 0]])
        return from_matrix_rep(
            np.stack([H, E, F]), labels=("H", "E", "F"), name="sl2r"
        )

    def e2():
        # Euclidean-motion algebra of the plane: two translations and the
        # infinitesimal rotation, as 3x3 affine blocks.
        P1 = _elementary(3, 0, 2)
        P2 = _elementary(3, 1, 2)
        J = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]])
        return from_matrix_rep(
            np.stack([P1, P2, J]), labels=("P1", "P2", "J"), name="e2"
        )

    def so3_plus_r():
        mats = np.zeros((4, 4, 4))
        mats[:3, :3, :3] = _so3_generators()
        mats[3, 3, 3] = 1.0
        return from_matrix_rep(
            mats, labels=("e1", "e2", "e3", "z"), name="so3_plus_r"
        )

    return {
        "heisenberg3": heisenberg3,
        "so3": so3,
        "sl2r": sl2r,
        "e2": e2,
        "so3_plus_r": so3_plus_r,
    }


_BUILDERS = _catalog_builders()

CATALOG_NAMES = ("abelian(n)",) + tuple(sorted(_BUILDERS))


def catalog(name: str) -> LieAlgebra:
    """Return a named algebra with its matrix representation attached.

    Known names: ``abelian(n)`` for any positive n, plus
    ``heisenberg3``, ``so3``, ``sl2r``, ``e2``, ``so3_plus_r``.
    """
    key = name.strip()
    m = _ABELIAN_RE.match(key)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise UnknownName(f"abelian dimension must be positive: {name!r}")
        mats = np.zeros((n, n, n))
        for i in range(n):
            mats[i, i, i] = 1.0
        return from_matrix_rep(mats, name=key)
    try:
        return _BUILDERS[key]()
    except KeyError:
        raise UnknownName(
            f"unknown algebra {name!r}; expected abelian(n) or one of "
            f"{', '.join(sorted(_BUILDERS))}"
        ) from None


# ---------------------------------------------------------------------------
# Algebra file format (JSON)
# ---------------------------------------------------------------------------


def algebra_to_dict(algebra: LieAlgebra) -> dict:
    """Serialize to the documented file schema (sparse upper-triangle brackets)."""
    entries = []
    c = algebra.structure_constants
    n = algebra.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if c[i, j, k] != 0.0:
                    entries.append(
                        {"i": i + 1, "j": j + 1, "k": k + 1, "value": float(c[i, j, k])}
                    )
    doc = {
        "dim": n,
        "labels": list(algebra.basis_labels),
        "brackets": entries,
    }
    if algebra.rep is not None:
        doc["rep"] = [mat.reshape(-1).tolist() for mat in algebra.rep.basis_matrices]
    return doc


def algebra_from_dict(doc: dict, name: str = "") -> LieAlgebra:
    """Build an algebra from the file schema, with field-level diagnostics.

    Schema: ``dim`` (int), optional ``labels`` (list of str), ``brackets``
    (list of records ``{i, j, k, value}`` with 1-based indices, ``i < j``
    sufficient), optional ``rep`` (list of row-major flattened square
    matrices, one per basis element).
    """
    if not isinstance(doc, dict):
        raise ParseError("algebra document must be an object")
    try:
        n = int(doc["dim"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("missing or non-integer field 'dim'") from None
    if n < 1:
        raise ParseError(f"'dim' must be positive, got {n}")

    labels = doc.get("labels", [])
    if labels and (
        not isinstance(labels, list) or not all(isinstance(s, str) for s in labels)
    ):
        raise ParseError("'labels' must be a list of strings")
    if labels and len(labels) != n:
        raise ParseError(f"'labels' has {len(labels)} entries for dim {n}")

    c = np.zeros((n, n, n))
    entries = doc.get("brackets", [])
    if not isinstance(entries, list):
        raise ParseError("'brackets' must be a list of {i, j, k, value} records")
    for pos, rec in enumerate(entries):
        if not isinstance(rec, dict):
            raise ParseError(f"brackets[{pos}]: expected an object")
        try:
            i, j, k = int(rec["i"]), int(rec["j"]), int(rec["k"])
            value = float(rec["value"])
        except (KeyError, TypeError, ValueError):
            raise ParseError(
                f"brackets[{pos}]: needs integer fields i, j, k and numeric 'value'"
            ) from None
        for fieldname, idx in (("i", i), ("j", j), ("k", k)):
            if not 1 <= idx <= n:
                raise ParseError(
                    f"brackets[{pos}]: index {fieldname}={idx} outside 1..{n}"
                )
        c[i - 1, j - 1, k - 1] += value
        c[j - 1, i - 1, k - 1] -= value

    rep = None
    raw_rep = doc.get("rep")
    if raw_rep is not None:
        if not isinstance(raw_rep, list) or len(raw_rep) != n:
            raise ParseError(f"'rep' must be a list of {n} flattened matrices")
        mats = []
        for pos, row in enumerate(raw_rep):
            arr = np.asarray(row, dtype=float).reshape(-1)
            m = int(round(np.sqrt(arr.size)))
            if m * m != arr.size:
                raise ParseError(
                    f"rep[{pos}]: length {arr.size} is not a perfect square"
                )
            mats.append(arr.reshape(m, m))
        sizes = {mat.shape[0] for mat in mats}
        if len(sizes) != 1:
            raise ParseError("rep matrices have inconsistent sizes")
        rep = MatrixRep(np.stack(mats))

    try:
        return LieAlgebra(
            dim=n,
            structure_constants=c,
            basis_labels=tuple(labels),
            rep=rep,
            name=name,
        )
    except (BadAlgebra, DimensionMismatch) as exc:
        raise ParseError(f"invalid algebra: {exc}") from exc


def load_algebra(path_or_name: str) -> LieAlgebra:
    """Load an algebra from a catalog name or a JSON file path."""
    m = _ABELIAN_RE.match(path_or_name.strip())
    if m or path_or_name.strip() in _BUILDERS:
        return catalog(path_or_name)
    try:
        with open(path_or_name, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ParseError(
            f"{path_or_name!r} is neither a catalog name nor a readable file"
        ) from None
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path_or_name}: invalid JSON at line {exc.lineno}, column {exc.colno}"
        ) from exc
    return algebra_from_dict(doc, name=path_or_name)
