"""Metric-aware dense real linear algebra.

All spectral work happens in coordinates that are orthonormal for the
inner product s(x, y) = x^T G y given by a Gram matrix G.  The upper
triangular Cholesky factor R (G = R^T R) maps problem coordinates to
orthonormal ones via x -> R x; every s-self-adjoint operator becomes a
plain symmetric matrix there, so a single symmetric eigensolver serves
all matrix formulas in the package.

Eigen and singular value decompositions use cyclic Jacobi rotations:
deterministic, accurate to machine precision, and fast enough for the
desk-scale problems (n <= ~64) this package targets.  Singular values
are computed one-sidedly, without forming A^T A, so the relative rank
cutoff stays meaningful down to ~1e-15.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    BadParameter,
    DimensionMismatch,
    DomainError,
    NotFinite,
    NotPositiveDefinite,
    NotSymmetric,
)

Array = np.ndarray

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used across the package.

    rank_tol: relative cutoff below which singular/eigen values count as zero.
    residual_tol: pass/fail bound for verification residuals.
    cluster_tol: half-width of the band around 1 used when extracting the
        fixed subspace of T (and around other exact spectral markers).
    """

    rank_tol: float = 1e-10
    residual_tol: float = 1e-8
    cluster_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_tol", "residual_tol", "cluster_tol"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise BadParameter(f"{name} must lie strictly in (0, 1), got {value!r}")


DEFAULT_TOL = ToleranceConfig()


# ---------------------------------------------------------------------------
# input coercion


def as_matrix(a, name: str = "matrix") -> Array:
    """Coerce to a float 2-d array, rejecting NaN/Inf entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-dimensional, got shape {m.shape}")
    if m.size and not np.isfinite(m).all():
        raise NotFinite(f"{name} contains NaN or Inf entries")
    return m


def as_vector(x, name: str = "vector") -> Array:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size and not np.isfinite(v).all():
        raise NotFinite(f"{name} contains NaN or Inf entries")
    return v


def require_symmetric(a: Array, rtol: float = 1e-12, name: str = "matrix") -> Array:
    """Check symmetry to a relative tolerance; return the symmetrized matrix."""
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > rtol * max(scale, 1e-300):
        raise NotSymmetric(f"{name} is not symmetric within relative tolerance {rtol}")
    return 0.5 * (a + a.T)


# ---------------------------------------------------------------------------
# metric


@dataclass(frozen=True)
class Metric:
    """Inner product s(x, y) = x^T gram y together with its Cholesky factor.

    ``chol`` is the upper triangular R with gram = R^T R.  The map
    x -> R x takes problem coordinates to s-orthonormal coordinates.
    """

    gram: Array
    chol: Array

    def __post_init__(self):
        eye = np.eye(self.gram.shape[0])
        object.__setattr__(self, "_euclidean", bool(np.array_equal(self.gram, eye)))

    @classmethod
    def from_gram(cls, gram) -> "Metric":
        g = as_matrix(gram, "gram")
        g = require_symmetric(g, 1e-12, "gram")
        try:
            lower = np.linalg.cholesky(g)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite("gram matrix is not positive definite") from exc
        return cls(gram=g, chol=lower.T.copy())

    @classmethod
    def identity(cls, dim: int) -> "Metric":
        eye = np.eye(dim)
        return cls(gram=eye, chol=eye.copy())

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @property
    def is_euclidean(self) -> bool:
        return self._euclidean

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.gram @ np.asarray(y))

    def norm(self, x) -> float:
        return float(np.sqrt(max(self.inner(x, x), 0.0)))

    # coordinate maps ------------------------------------------------------

    def to_ortho(self, x: Array) -> Array:
        """Vector (or matrix of column vectors) to s-orthonormal coordinates."""
        if self._euclidean:
            return np.asarray(x, dtype=float)
        return self.chol @ x

    def from_ortho(self, x: Array) -> Array:
        if self._euclidean:
            return np.asarray(x, dtype=float)
        return np.linalg.solve(self.chol, x)

    def op_to_ortho(self, a: Array) -> Array:
        """Conjugate an operator into s-orthonormal coordinates: R A R^{-1}."""
        if self._euclidean:
            return np.asarray(a, dtype=float)
        m = self.chol @ a
        return np.linalg.solve(self.chol.T, m.T).T

    def op_from_ortho(self, a: Array) -> Array:
        if self._euclidean:
            return np.asarray(a, dtype=float)
        return np.linalg.solve(self.chol, a @ self.chol)


# ---------------------------------------------------------------------------
# Jacobi eigendecomposition


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (descending) and orthonormal eigenvector columns."""

    eigenvalues: Array
    eigenvectors: Array

    @property
    def dim(self) -> int:
        return self.eigenvectors.shape[0]


def _fix_column_signs(v: Array) -> Array:
    """Make the first component of largest magnitude positive in each column."""
    if v.size == 0:
        return v
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[idx, np.arange(v.shape[1])] < 0.0, -1.0, 1.0)
    return v * signs


def _jacobi_eigh(a: Array, max_sweeps: int = 100) -> tuple[Array, Array]:
    """Cyclic-by-rows Jacobi; returns (eigenvalues, eigenvectors), unsorted."""
    n = a.shape[0]
    v = np.eye(n)
    if n <= 1:
        return np.diag(a).astype(float).copy(), v
    a = a.copy()
    stop = n * _EPS * max(np.linalg.norm(a), 1e-300)
    # entries below this cannot push the off-diagonal norm above `stop`
    skip = 0.5 * stop / (n * n)
    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = float(a[p, q])
                if abs(apq) <= skip:
                    continue
                tau = (float(a[q, q]) - float(a[p, p])) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rp = a[p, :]
                rq = a[q, :]
                new_p = c * rp - s * rq
                new_q = s * rp + c * rq
                a[p, :] = new_p
                a[q, :] = new_q
                a[:, p] = new_p
                a[:, q] = new_q
                # diagonal corner entries of the two-sided update
                app = c * new_p[p] - s * new_p[q]
                aqq = s * new_q[p] + c * new_q[q]
                a[p, p] = app
                a[q, q] = aqq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p]
                vq = v[:, q]
                new_vp = c * vp - s * vq
                new_vq = s * vp + c * vq
                v[:, p] = new_vp
                v[:, q] = new_vq
    return np.diag(a).copy(), v


def sym_eig(a, cfg: ToleranceConfig = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Eigenvector signs are fixed deterministically so repeated runs on the
    same input produce identical output.
    """
    m = as_matrix(a, "matrix")
    m = require_symmetric(m, 1e-12, "matrix")
    vals, vecs = _jacobi_eigh(m)
    order = np.argsort(-vals, kind="stable")
    return SpectralDecomposition(
        eigenvalues=vals[order],
        eigenvectors=_fix_column_signs(vecs[:, order]),
    )


def function_from_spectrum(
    dec: SpectralDecomposition, f: Callable[[float], float], cfg: ToleranceConfig = DEFAULT_TOL
) -> Array:
    """Apply a scalar function through an existing eigendecomposition.

    Eigenvalues below the relative rank cutoff are snapped to exactly 0
    before f is evaluated, so e.g. sqrt of a positive semidefinite matrix
    never sees a -1e-17 rounding eigenvalue.  If f raises or returns a
    non-finite value on any (snapped) eigenvalue a DomainError is raised.
    """
    vals = dec.eigenvalues
    amax = float(np.max(np.abs(vals))) if vals.size else 0.0
    snapped = np.where(np.abs(vals) <= cfg.rank_tol * amax, 0.0, vals)
    fvals = np.empty_like(snapped)
    for i, lam in enumerate(snapped):
        try:
            y = float(f(float(lam)))
        except (ArithmeticError, ValueError) as exc:
            raise DomainError(f"function undefined on eigenvalue {lam!r}") from exc
        if not np.isfinite(y):
            raise DomainError(f"function not finite on eigenvalue {lam!r}")
        fvals[i] = y
    m = (dec.eigenvectors * fvals) @ dec.eigenvectors.T
    return 0.5 * (m + m.T)


def matrix_function(a, f: Callable[[float], float], cfg: ToleranceConfig = DEFAULT_TOL) -> Array:
    """V diag(f(lambda)) V^T for a symmetric matrix a = V diag(lambda) V^T."""
    return function_from_spectrum(sym_eig(a, cfg), f, cfg)


def polar_from_spectrum(
    dec: SpectralDecomposition,
    cfg: ToleranceConfig = DEFAULT_TOL,
    scale: Optional[float] = None,
) -> tuple[Array, Array]:
    """Self-adjoint polar factors (u, |a|) from an eigendecomposition of a.

    u is the sign of a on eigenvectors above the rank cutoff and 0 on the
    kernel, which makes it a self-adjoint partial isometry; |a| = sqrt(a^2).
    The cutoff is rank_tol relative to the largest |eigenvalue|; ``scale``
    raises that reference when the matrix itself may be rounding noise of
    a quantity with a known natural scale (e.g. differences of projectors,
    whose spectrum lies in [-1, 1]).
    """
    vals = dec.eigenvalues
    vecs = dec.eigenvectors
    amax = float(np.max(np.abs(vals))) if vals.size else 0.0
    keep = np.abs(vals) > cfg.rank_tol * max(amax, scale or 0.0)
    signs = np.where(keep, np.sign(vals), 0.0)
    mags = np.where(keep, np.abs(vals), 0.0)
    u = (vecs * signs) @ vecs.T
    absa = (vecs * mags) @ vecs.T
    return 0.5 * (u + u.T), 0.5 * (absa + absa.T)


def polar_selfadjoint(
    a, cfg: ToleranceConfig = DEFAULT_TOL, scale: Optional[float] = None
) -> tuple[Array, Array]:
    """Polar decomposition a = u |a| of a symmetric matrix; u vanishes on ker a."""
    return polar_from_spectrum(sym_eig(a, cfg), cfg, scale)


def s_adjoint(a, metric: Metric) -> Array:
    """Adjoint with respect to the metric: A* = G^{-1} A^T G."""
    m = as_matrix(a, "operator")
    if m.shape[0] != m.shape[1] or m.shape[0] != metric.dim:
        raise DimensionMismatch(
            f"operator shape {m.shape} does not match metric dimension {metric.dim}"
        )
    if metric.is_euclidean:
        return m.T.copy()
    return np.linalg.solve(metric.gram, m.T @ metric.gram)


# ---------------------------------------------------------------------------
# one-sided Jacobi SVD and subspace arithmetic


def _jacobi_svd(a: Array, max_sweeps: int = 100) -> tuple[Array, Array, Array]:
    """One-sided Jacobi SVD of a real m x k matrix.

    Returns (u, s, v) with a = u diag(s) v^T and s sorted descending.
    Columns of u belonging to zero singular values are zero vectors.
    """
    a = np.asarray(a, dtype=float)
    m, k = a.shape
    u = a.copy()
    v = np.eye(k)
    if k == 0 or m == 0:
        return u, np.zeros(min(m, k) if k else 0), v
    # columns whose norm has collapsed to rounding level are final;
    # rotating them further only chases noise
    floor2 = (max(m, k) * _EPS * max(float(np.linalg.norm(a)), 1e-300)) ** 2
    for _ in range(max_sweeps):
        rotated = False
        for p in range(k - 1):
            for q in range(p + 1, k):
                up = u[:, p]
                uq = u[:, q]
                alpha = float(up @ up)
                beta = float(uq @ uq)
                if alpha <= floor2 or beta <= floor2:
                    continue
                gamma = float(up @ uq)
                if gamma == 0.0 or abs(gamma) <= _EPS * math.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                new_p = c * up - s * uq
                new_q = s * up + c * uq
                u[:, p] = new_p
                u[:, q] = new_q
                vp = v[:, p]
                vq = v[:, q]
                new_vp = c * vp - s * vq
                new_vq = s * vp + c * vq
                v[:, p] = new_vp
                v[:, q] = new_vq
        if not rotated:
            break
    sv = np.sqrt(np.sum(u * u, axis=0))
    with np.errstate(invalid="ignore", divide="ignore"):
        un = np.where(sv > 0.0, u / np.where(sv > 0.0, sv, 1.0), 0.0)
    order = np.argsort(-sv, kind="stable")
    un = un[:, order]
    sv = sv[order]
    v = v[:, order]
    # deterministic signs: fix v columns, flip the matching u columns
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[idx, np.arange(k)] < 0.0, -1.0, 1.0)
    return un * signs, sv, v * signs


def column_rank(a, cfg: ToleranceConfig = DEFAULT_TOL) -> int:
    """Rank of the column span under the relative singular value cutoff."""
    m = as_matrix(a, "matrix")
    if m.shape[1] == 0:
        return 0
    _, sv, _ = _jacobi_svd(m)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > cfg.rank_tol * sv[0]))


def orthonormal_columns(a, cfg: ToleranceConfig = DEFAULT_TOL) -> Array:
    """Orthonormal basis (columns) of the column span, Euclidean sense."""
    m = as_matrix(a, "matrix")
    if m.shape[1] == 0:
        return np.zeros((m.shape[0], 0))
    u, sv, _ = _jacobi_svd(m)
    if sv.size == 0 or sv[0] == 0.0:
        return np.zeros((m.shape[0], 0))
    return u[:, sv > cfg.rank_tol * sv[0]].copy()


def null_columns(a, cfg: ToleranceConfig = DEFAULT_TOL) -> Array:
    """Orthonormal basis of the (right) null space of a."""
    m = as_matrix(a, "matrix")
    k = m.shape[1]
    if k == 0:
        return np.zeros((0, 0))
    _, sv, v = _jacobi_svd(m)
    if sv.size == 0 or sv[0] == 0.0:
        return np.eye(k)
    return v[:, sv <= cfg.rank_tol * sv[0]].copy()


def _householder_completion(u: Array) -> Array:
    """Complete an n x k matrix with orthonormal columns to a full basis.

    Returns the n x (n-k) block of new columns, orthonormal and orthogonal
    to the span of u.
    """
    n, k = u.shape
    if k == 0:
        return np.eye(n)
    if k >= n:
        return np.zeros((n, 0))
    a = u.copy()
    reflectors: list[Optional[Array]] = []
    for j in range(k):
        x = a[j:, j]
        norm_x = math.sqrt(float(x @ x))
        alpha = -norm_x if x[0] >= 0.0 else norm_x
        v = x.copy()
        v[0] -= alpha
        vn = math.sqrt(float(v @ v))
        if vn > 0.0:
            v /= vn
            a[j:, j:] -= 2.0 * np.outer(v, v @ a[j:, j:])
            reflectors.append(v)
        else:
            reflectors.append(None)
    comp = np.zeros((n, n - k))
    comp[k:, :] = np.eye(n - k)
    for j in range(k - 1, -1, -1):
        v = reflectors[j]
        if v is not None:
            comp[j:, :] -= 2.0 * np.outer(v, v @ comp[j:, :])
    return comp


def complement_columns(a, cfg: ToleranceConfig = DEFAULT_TOL) -> Array:
    """Orthonormal basis of the orthogonal complement of the column span."""
    m = as_matrix(a, "matrix")
    if m.shape[1] == 0:
        return np.eye(m.shape[0])
    return _householder_completion(orthonormal_columns(m, cfg))


def intersect_columns(a, b, cfg: ToleranceConfig = DEFAULT_TOL) -> Array:
    """Orthonormal basis of span(a) meet span(b), Euclidean sense.

    Found as the kernel of the stacked system [A | -B] built from
    orthonormalized inputs; a kernel vector (c1; c2) yields the common
    direction A c1 = B c2.
    """
    oa = orthonormal_columns(a, cfg)
    ob = orthonormal_columns(b, cfg)
    n = oa.shape[0]
    if oa.shape[1] == 0 or ob.shape[1] == 0:
        return np.zeros((n, 0))
    nulls = null_columns(np.hstack([oa, -ob]), cfg)
    if nulls.shape[1] == 0:
        return np.zeros((n, 0))
    vecs = oa @ nulls[: oa.shape[1], :]
    return orthonormal_columns(vecs, cfg)


# metric-aware wrappers ------------------------------------------------------


def _check_basis(b, metric: Metric, name: str) -> Array:
    m = as_matrix(b, name)
    if m.shape[0] != metric.dim:
        raise DimensionMismatch(
            f"{name} has {m.shape[0]} rows but the metric dimension is {metric.dim}"
        )
    return m


def subspace_rank(b, metric: Metric, cfg: ToleranceConfig = DEFAULT_TOL) -> int:
    return column_rank(metric.to_ortho(_check_basis(b, metric, "basis")), cfg)


def orthonormal_basis(b, metric: Metric, cfg: ToleranceConfig = DEFAULT_TOL) -> Array:
    """s-orthonormal basis of the span of b (columns, problem coordinates)."""
    ob = orthonormal_columns(metric.to_ortho(_check_basis(b, metric, "basis")), cfg)
    return metric.from_ortho(ob)


def orthogonal_complement(b, metric: Metric, cfg: ToleranceConfig = DEFAULT_TOL) -> Array:
    """s-orthonormal basis of the s-orthogonal complement of span(b)."""
    oc = complement_columns(metric.to_ortho(_check_basis(b, metric, "basis")), cfg)
    return metric.from_ortho(oc)


def subspace_sum(b1, b2, metric: Metric, cfg: ToleranceConfig = DEFAULT_TOL) -> Array:
    """s-orthonormal basis of span(b1) + span(b2)."""
    m1 = metric.to_ortho(_check_basis(b1, metric, "basis1"))
    m2 = metric.to_ortho(_check_basis(b2, metric, "basis2"))
    return metric.from_ortho(orthonormal_columns(np.hstack([m1, m2]), cfg))


def subspace_intersection(b1, b2, metric: Metric, cfg: ToleranceConfig = DEFAULT_TOL) -> Array:
    """s-orthonormal basis of span(b1) meet span(b2)."""
    m1 = metric.to_ortho(_check_basis(b1, metric, "basis1"))
    m2 = metric.to_ortho(_check_basis(b2, metric, "basis2"))
    return metric.from_ortho(intersect_columns(m1, m2, cfg))


@dataclass(frozen=True)
class BasisOps:
    """Bundle returned by basis_ops."""

    onb: Array
    rank: int
    sum_basis: Optional[Array]
    intersection_basis: Optional[Array]


def basis_ops(
    b1,
    b2=None,
    *,
    metric: Metric,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> BasisOps:
    """Orthonormalization, rank, and (if b2 is given) sum and intersection.

    Orthonormality is with respect to the metric; rank decisions use the
    relative cutoff cfg.rank_tol on singular values.
    """
    onb = orthonormal_basis(b1, metric, cfg)
    if b2 is None:
        return BasisOps(onb=onb, rank=onb.shape[1], sum_basis=None, intersection_basis=None)
    return BasisOps(
        onb=onb,
        rank=onb.shape[1],
        sum_basis=subspace_sum(b1, b2, metric, cfg),
        intersection_basis=subspace_intersection(b1, b2, metric, cfg),
    )
