"""Modular-operator toolkit for complementary pairs of subspaces."""

from .errors import (
    BadDimensions,
    BadParameter,
    DimensionMismatch,
    DomainError,
    ModPairError,
    NotComplementary,
    NotFinite,
    NotPositiveDefinite,
    NotSymmetric,
    RankDeficientBasis,
    UnrecognizedProduct,
    ZeroVector,
)
from .linalg import (
    DEFAULT_TOL,
    BasisOps,
    Metric,
    SpectralDecomposition,
    ToleranceConfig,
    basis_ops,
    matrix_function,
    orthogonal_complement,
    orthonormal_basis,
    polar_selfadjoint,
    s_adjoint,
    subspace_intersection,
    subspace_rank,
    subspace_sum,
    sym_eig,
)

__version__ = "0.1.0"
