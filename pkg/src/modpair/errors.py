"""Exception types shared across the package."""


class ModPairError(Exception):
    """Base class for all errors raised by this package."""


class NotFinite(ModPairError):
    """Input contains NaN or infinite entries."""


class NotSymmetric(ModPairError):
    """Matrix expected to be symmetric is not."""


class NotPositiveDefinite(ModPairError):
    """Gram matrix has a non-positive Cholesky pivot."""


class DomainError(ModPairError):
    """Scalar function is undefined on an eigenvalue of its matrix argument."""


class DimensionMismatch(ModPairError):
    """Operands live in different spaces."""


class RankDeficientBasis(ModPairError):
    """Basis columns are linearly dependent under the rank tolerance."""


class NotComplementary(ModPairError):
    """The subspace pair violates K + L = V or K meet L = {0}."""

    def __init__(self, message, sum_spans=None, trivial_intersection=None):
        super().__init__(message)
        self.sum_spans = sum_spans
        self.trivial_intersection = trivial_intersection


class BadDimensions(ModPairError):
    """Requested subspace dimensions are inconsistent with the ambient space."""


class UnrecognizedProduct(ModPairError):
    """A group product matches no signed canonical element."""


class ZeroVector(ModPairError):
    """Operation undefined for the zero vector."""


class BadParameter(ModPairError):
    """Parameter outside its admissible range."""
