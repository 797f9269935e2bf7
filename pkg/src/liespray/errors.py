"""Exception types shared across the package."""


class LieSprayError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(LieSprayError):
    """Inputs have incompatible dimensions."""


class LinearDependence(LieSprayError):
    """A supposed basis of matrices is linearly dependent."""


class NotClosed(LieSprayError):
    """Matrix commutators leave the span of the given basis."""


class UnknownName(LieSprayError):
    """Requested catalog entry does not exist."""


class MissingRep(LieSprayError):
    """Operation needs a matrix representation but the algebra has none."""


class SingularMatrix(LieSprayError):
    """A group element became (numerically) non-invertible."""


class ZeroFiberPoint(LieSprayError):
    """A positively homogeneous Lagrangian was evaluated at the zero section."""


class AsymmetricInput(LieSprayError):
    """A matrix that must be symmetric is not."""


class BadAlgebra(LieSprayError):
    """Structure constants fail the Jacobi identity beyond tolerance."""


class ZeroFinslerNorm(LieSprayError):
    """The Finsler function vanishes where a quotient requires it nonzero."""


class ZeroVelocity(LieSprayError):
    """Connection coefficients requested at zero velocity."""


class ParseError(LieSprayError):
    """An input document does not match the algebra file schema."""
