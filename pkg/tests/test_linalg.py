"""Tests for the metric-aware linear algebra substrate."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modpair.errors import (
    DimensionMismatch,
    DomainError,
    NotFinite,
    NotPositiveDefinite,
    NotSymmetric,
)
from modpair.linalg import (
    DEFAULT_TOL,
    Metric,
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

from reference_values import (
    EUCLID_C,
    EUCLID_K,
    EUCLID_P_PLUS_Q_MINUS_I,
    EUCLID_T,
    EUCLID_T2,
    larmor_gram,
)


def random_symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return a + a.T


def random_spd(rng, n):
    a = rng.standard_normal((n, n))
    return a @ a.T + n * np.eye(n)


# ---------------------------------------------------------------------------
# ToleranceConfig / Metric


def test_tolerance_config_rejects_bad_values():
    from modpair.errors import BadParameter

    with pytest.raises(BadParameter):
        ToleranceConfig(rank_tol=0.0)
    with pytest.raises(BadParameter):
        ToleranceConfig(residual_tol=1.5)


def test_metric_cholesky_reproduces_gram():
    rng = np.random.default_rng(7)
    g = random_spd(rng, 5)
    m = Metric.from_gram(g)
    assert np.linalg.norm(m.chol.T @ m.chol - g) <= 1e-12 * np.linalg.norm(g)
    assert not m.is_euclidean
    assert Metric.identity(4).is_euclidean


def test_metric_rejects_bad_gram():
    with pytest.raises(NotSymmetric):
        Metric.from_gram([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(NotPositiveDefinite):
        Metric.from_gram([[1.0, 0.0], [0.0, -2.0]])


def test_metric_coordinate_maps_roundtrip():
    rng = np.random.default_rng(3)
    m = Metric.from_gram(random_spd(rng, 4))
    x = rng.standard_normal(4)
    a = rng.standard_normal((4, 4))
    np.testing.assert_allclose(m.from_ortho(m.to_ortho(x)), x, atol=1e-12)
    np.testing.assert_allclose(m.op_from_ortho(m.op_to_ortho(a)), a, atol=1e-12)
    # the ortho image of the gram is the identity inner product
    y = rng.standard_normal(4)
    assert abs(m.inner(x, y) - m.to_ortho(x) @ m.to_ortho(y)) <= 1e-12 * abs(m.inner(x, y)) + 1e-12


# ---------------------------------------------------------------------------
# sym_eig


def test_sym_eig_diagonal():
    d = sym_eig(np.diag([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(d.eigenvalues, [3.0, 2.0, 1.0], atol=0)
    # eigenvectors are permuted identity columns with positive signs
    np.testing.assert_allclose(np.abs(d.eigenvectors), np.eye(3)[:, [2, 1, 0]], atol=0)
    np.testing.assert_allclose(d.eigenvectors.sum(axis=0), [1.0, 1.0, 1.0], atol=0)


def test_sym_eig_euclid_t2_spectrum():
    d = sym_eig(EUCLID_T2)
    np.testing.assert_allclose(d.eigenvalues, [1.0, 1.0 / 3.0, 1.0 / 3.0], atol=1e-14)


def test_sym_eig_random_residuals():
    rng = np.random.default_rng(42)
    a = random_symmetric(rng, 6)
    d = sym_eig(a)
    assert (
        np.linalg.norm(a @ d.eigenvectors - d.eigenvectors * d.eigenvalues)
        <= 1e-10 * np.linalg.norm(a)
    )
    assert np.linalg.norm(d.eigenvectors.T @ d.eigenvectors - np.eye(6)) <= 1e-10


def test_sym_eig_rejects_asymmetric_and_nonfinite():
    with pytest.raises(NotSymmetric):
        sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NotFinite):
        sym_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_sym_eig_deterministic():
    rng = np.random.default_rng(11)
    a = random_symmetric(rng, 7)
    d1 = sym_eig(a)
    d2 = sym_eig(a.copy())
    assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
    assert np.array_equal(d1.eigenvectors, d2.eigenvectors)


@given(seed=st.integers(0, 10**6), n=st.integers(1, 10))
@settings(max_examples=40, deadline=None)
def test_sym_eig_reconstruction_property(seed, n):
    rng = np.random.default_rng(seed)
    a = random_symmetric(rng, n)
    d = sym_eig(a)
    scale = max(np.linalg.norm(a), 1.0)
    assert (
        np.linalg.norm((d.eigenvectors * d.eigenvalues) @ d.eigenvectors.T - a) <= 1e-10 * scale
    )
    assert np.linalg.norm(d.eigenvectors.T @ d.eigenvectors - np.eye(n)) <= 1e-10
    assert np.all(np.diff(d.eigenvalues) <= 1e-300)


# ---------------------------------------------------------------------------
# matrix_function


def test_matrix_function_sqrt_matches_euclid_t():
    np.testing.assert_allclose(matrix_function(EUCLID_T2, math.sqrt), EUCLID_T, atol=1e-12)


def test_matrix_function_identity_returns_input():
    rng = np.random.default_rng(5)
    a = random_symmetric(rng, 5)
    np.testing.assert_allclose(matrix_function(a, lambda u: u), a, atol=1e-12 * np.linalg.norm(a))


def test_matrix_function_diagonal_log():
    a = np.diag([math.e, math.e**2])
    np.testing.assert_allclose(matrix_function(a, math.log), np.diag([1.0, 2.0]), atol=1e-14)


def test_matrix_function_domain_errors():
    with pytest.raises(DomainError):
        matrix_function(np.diag([1.0, 0.0]), math.log)
    with pytest.raises(DomainError):
        # eigenvalue below the rank cutoff is snapped to zero before 1/u
        matrix_function(np.diag([1.0, 1e-30]), lambda u: 1.0 / u)
    with pytest.raises(DomainError):
        matrix_function(np.diag([1.0, -1.0]), math.sqrt)


def test_matrix_function_snaps_rounding_negatives():
    # psd matrix with an eigenvalue at rounding level: sqrt must not fail
    a = np.diag([1.0, 1e-17])
    r = matrix_function(a, math.sqrt)
    np.testing.assert_allclose(r, np.diag([1.0, 0.0]), atol=1e-12)


# ---------------------------------------------------------------------------
# polar_selfadjoint


def test_polar_euclid_cross_operator():
    u, absa = polar_selfadjoint(EUCLID_P_PLUS_Q_MINUS_I)
    np.testing.assert_allclose(u, EUCLID_K, atol=1e-12)
    np.testing.assert_allclose(absa, EUCLID_C, atol=1e-12)


def test_polar_identity_and_zero():
    u, absa = polar_selfadjoint(np.eye(3))
    np.testing.assert_allclose(u, np.eye(3), atol=0)
    np.testing.assert_allclose(absa, np.eye(3), atol=0)
    u0, a0 = polar_selfadjoint(np.zeros((3, 3)))
    assert np.all(u0 == 0.0) and np.all(a0 == 0.0)


@given(seed=st.integers(0, 10**6), n=st.integers(1, 8))
@settings(max_examples=40, deadline=None)
def test_polar_properties(seed, n):
    rng = np.random.default_rng(seed)
    a = random_symmetric(rng, n)
    u, absa = polar_selfadjoint(a)
    tol = 1e-10 * max(np.linalg.norm(a), 1.0)
    assert np.linalg.norm(u @ absa - a) <= tol
    assert np.linalg.norm(u - u.T) <= 1e-12
    assert np.linalg.norm(u @ u @ u - u) <= 1e-10
    assert np.linalg.norm(u @ absa - absa @ u) <= tol
    # u^2 is the orthogonal projector onto the range of |a|
    d = sym_eig(a)
    keep = np.abs(d.eigenvalues) > DEFAULT_TOL.rank_tol * np.max(np.abs(d.eigenvalues))
    proj = d.eigenvectors[:, keep] @ d.eigenvectors[:, keep].T
    assert np.linalg.norm(u @ u - proj) <= 1e-10


def test_polar_rank_cutoff_gives_partial_isometry():
    a = np.diag([2.0, -1.0, 0.0])
    u, absa = polar_selfadjoint(a)
    np.testing.assert_allclose(u, np.diag([1.0, -1.0, 0.0]), atol=1e-14)
    np.testing.assert_allclose(absa, np.diag([2.0, 1.0, 0.0]), atol=1e-14)


# ---------------------------------------------------------------------------
# s_adjoint


def test_s_adjoint_euclidean_is_transpose():
    rng = np.random.default_rng(9)
    a = rng.standard_normal((4, 4))
    np.testing.assert_allclose(s_adjoint(a, Metric.identity(4)), a.T, atol=0)


def test_s_adjoint_pairing_identity():
    rng = np.random.default_rng(21)
    m = Metric.from_gram(random_spd(rng, 5))
    a = rng.standard_normal((5, 5))
    astar = s_adjoint(a, m)
    for _ in range(5):
        x = rng.standard_normal(5)
        y = rng.standard_normal(5)
        lhs = m.inner(a @ x, y)
        rhs = m.inner(x, astar @ y)
        bound = 1e-10 * np.linalg.norm(a) * np.linalg.norm(x) * np.linalg.norm(y)
        assert abs(lhs - rhs) <= bound


def test_s_adjoint_larmor_projector_is_selfadjoint():
    # the s-orthogonal projector onto span{e1,e2,e3} under the r-dependent metric
    m = Metric.from_gram(larmor_gram(0.5))
    b = np.eye(4)[:, :3]
    g = m.gram
    p = b @ np.linalg.solve(b.T @ g @ b, b.T @ g)
    np.testing.assert_allclose(s_adjoint(p, m), p, atol=1e-10)


@given(seed=st.integers(0, 10**6), n=st.integers(1, 7))
@settings(max_examples=30, deadline=None)
def test_s_adjoint_involution(seed, n):
    rng = np.random.default_rng(seed)
    m = Metric.from_gram(random_spd(rng, n))
    a = rng.standard_normal((n, n))
    back = s_adjoint(s_adjoint(a, m), m)
    assert np.linalg.norm(back - a) <= 1e-12 * max(np.linalg.norm(a), 1.0)


def test_s_adjoint_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        s_adjoint(np.eye(3), Metric.identity(4))


# ---------------------------------------------------------------------------
# basis_ops and friends


def euclid3():
    return Metric.identity(3)


def test_basis_ops_euclid_trivial_intersection():
    m = euclid3()
    k = np.array([[1.0], [1.0], [1.0]])
    l = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    ops = basis_ops(k, l, metric=m)
    assert ops.rank == 1
    assert ops.intersection_basis.shape[1] == 0
    assert ops.sum_basis.shape[1] == 3


def test_basis_ops_euclid_l_meets_k_perp():
    m = euclid3()
    k = np.array([[1.0], [1.0], [1.0]])
    l = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    k_perp = orthogonal_complement(k, m)
    inter = subspace_intersection(l, k_perp, m)
    assert inter.shape[1] == 1
    v = inter[:, 0]
    expected = np.array([0.0, 1.0, -1.0]) / math.sqrt(2.0)
    assert min(np.linalg.norm(v - expected), np.linalg.norm(v + expected)) <= 1e-10


def test_orthonormal_basis_is_s_orthonormal():
    rng = np.random.default_rng(13)
    m = Metric.from_gram(random_spd(rng, 5))
    b = rng.standard_normal((5, 3))
    onb = orthonormal_basis(b, m)
    gram_out = onb.T @ m.gram @ onb
    np.testing.assert_allclose(gram_out, np.eye(3), atol=1e-10)
    # same span
    assert subspace_rank(np.hstack([b, onb]), m) == 3


def test_rank_reported_for_dependent_columns():
    m = euclid3()
    b = np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0]])
    assert subspace_rank(b, m) == 1
    assert orthonormal_basis(b, m).shape == (3, 1)


def test_basis_ops_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        basis_ops(np.ones((4, 1)), metric=euclid3())


@given(
    seed=st.integers(0, 10**6),
    n=st.integers(2, 7),
    k1=st.integers(1, 4),
    k2=st.integers(1, 4),
)
@settings(max_examples=40, deadline=None)
def test_dimension_formula(seed, n, k1, k2):
    rng = np.random.default_rng(seed)
    k1 = min(k1, n)
    k2 = min(k2, n)
    m = Metric.from_gram(random_spd(rng, n))
    b1 = rng.standard_normal((n, k1))
    b2 = rng.standard_normal((n, k2))
    r1 = subspace_rank(b1, m)
    r2 = subspace_rank(b2, m)
    s = subspace_sum(b1, b2, m).shape[1]
    i = subspace_intersection(b1, b2, m).shape[1]
    assert s + i == r1 + r2


def test_intersection_detects_engineered_overlap():
    rng = np.random.default_rng(99)
    m = Metric.identity(6)
    common = rng.standard_normal((6, 2))
    b1 = np.hstack([common, rng.standard_normal((6, 1))])
    b2 = np.hstack([common @ rng.standard_normal((2, 2)), rng.standard_normal((6, 1))])
    inter = subspace_intersection(b1, b2, m)
    assert inter.shape[1] == 2
    # intersection vectors lie in both spans
    for j in range(2):
        v = inter[:, j]
        c1, *_ = np.linalg.lstsq(b1, v, rcond=None)
        assert np.linalg.norm(b1 @ c1 - v) <= 1e-9
