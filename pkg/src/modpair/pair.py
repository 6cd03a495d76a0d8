"""Projections, polar factors and modular data for a pair of subspaces.

Given complementary subspaces K and L of a real inner-product space
(K + L = V, K meet L = {0}), this module builds the whole operator
bundle derived from the projections P and Q:

    P - Q = J T            T = sqrt((P - Q)^2)     J orthogonal involution
    P + Q - I = K C        C = sqrt((P + Q - I)^2) K partial isometry
    Delta = (2I - (P + Q)) / (P + Q)
    S (y + z) = y - z      for y in K, z in L

together with the fixed subspace {x : T x = x}, genericity flags, and a
residual report that checks every derived operator identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    BadDimensions,
    BadParameter,
    DimensionMismatch,
    ModPairError,
    NotComplementary,
    RankDeficientBasis,
)
from .linalg import (
    DEFAULT_TOL,
    Array,
    Metric,
    SpectralDecomposition,
    ToleranceConfig,
    _jacobi_svd,
    as_matrix,
    as_vector,
    column_rank,
    complement_columns,
    function_from_spectrum,
    intersect_columns,
    orthonormal_columns,
    polar_from_spectrum,
    sym_eig,
)

_INTERSECTION_KEYS = ("k_and_l", "k_and_l_perp", "k_perp_and_l", "k_perp_and_l_perp")


@dataclass(frozen=True)
class Subspace:
    """Linear subspace spanned by the columns of ``basis`` under ``metric``."""

    basis: Array
    metric: Metric

    def __post_init__(self):
        b = as_matrix(self.basis, "basis")
        object.__setattr__(self, "basis", b)
        if b.shape[0] != self.metric.dim:
            raise DimensionMismatch(
                f"basis has {b.shape[0]} rows but the metric dimension is {self.metric.dim}"
            )
        if column_rank(self.metric.to_ortho(b)) != b.shape[1]:
            raise RankDeficientBasis("basis columns are linearly dependent")

    @classmethod
    def from_vectors(cls, vectors, metric: Metric) -> "Subspace":
        """Build from a sequence of spanning vectors (one vector per row)."""
        arr = np.asarray(vectors, dtype=float)
        if arr.ndim == 1:
            arr = arr[np.newaxis, :]
        return cls(basis=arr.T.copy(), metric=metric)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class PairOperators:
    """The operator bundle of one pair, in a single coordinate system."""

    P: Array
    Q: Array
    T: Array
    C: Array
    J: Array
    K: Array
    S: Array
    Delta: Array


@dataclass(frozen=True)
class PairAnalysis:
    """Everything derived from one complementary pair.

    ``ops`` holds the operators in the problem coordinates of the input
    bases; ``ortho`` holds the same operators in s-orthonormal coordinates
    (where self-adjoint means symmetric).  The cached orthonormal frames
    and spectra avoid recomputing decompositions during verification.
    """

    metric: Metric
    cfg: ToleranceConfig
    k: Subspace
    l: Subspace
    ops: PairOperators
    ortho: PairOperators
    sym_basis: Array
    sym_basis_ortho: Array
    complementary: tuple[bool, bool]
    generic: bool
    intersection_report: dict[str, int]
    k_onb: Array
    l_onb: Array
    k_perp: Array
    l_perp: Array
    spec_diff: SpectralDecomposition
    spec_sum: SpectralDecomposition
    intersections: dict[str, Array] = field(repr=False, default_factory=dict)

    @property
    def dim(self) -> int:
        return self.metric.dim

    @property
    def P(self) -> Array:
        return self.ops.P

    @property
    def Q(self) -> Array:
        return self.ops.Q

    @property
    def T(self) -> Array:
        return self.ops.T

    @property
    def C(self) -> Array:
        return self.ops.C

    @property
    def J(self) -> Array:
        return self.ops.J

    @property
    def K(self) -> Array:
        return self.ops.K

    @property
    def S(self) -> Array:
        return self.ops.S

    @property
    def Delta(self) -> Array:
        return self.ops.Delta


def projector(sub: Subspace, cfg: ToleranceConfig = DEFAULT_TOL) -> Array:
    """s-orthogonal projector onto the subspace, in problem coordinates.

    Uses the closed form B (B^T G B)^{-1} B^T G, which is independent of
    the orthonormalization route used elsewhere.
    """
    b = sub.basis
    if column_rank(sub.metric.to_ortho(b), cfg) != b.shape[1]:
        raise RankDeficientBasis("basis columns are linearly dependent")
    if b.shape[1] == 0:
        return np.zeros((sub.ambient_dim, sub.ambient_dim))
    g = sub.metric.gram
    return b @ np.linalg.solve(b.T @ g @ b, b.T @ g)


def _metrics_match(a: Metric, b: Metric) -> bool:
    if a is b:
        return True
    if a.dim != b.dim:
        return False
    scale = max(np.linalg.norm(a.gram), 1.0)
    return np.linalg.norm(a.gram - b.gram) <= 1e-12 * scale


def analyze_pair(
    k: Subspace, l: Subspace, cfg: ToleranceConfig = DEFAULT_TOL
) -> PairAnalysis:
    """Construct the full operator bundle for a complementary pair.

    Raises NotComplementary (naming the violated condition) if K + L
    does not span the space or K meet L is nontrivial.
    """
    if k.ambient_dim != l.ambient_dim:
        raise DimensionMismatch("subspaces live in different ambient dimensions")
    if not _metrics_match(k.metric, l.metric):
        raise DimensionMismatch("subspaces carry different metrics")
    metric = k.metric
    n = metric.dim

    bk = metric.to_ortho(k.basis)
    bl = metric.to_ortho(l.basis)
    k_onb = orthonormal_columns(bk, cfg)
    l_onb = orthonormal_columns(bl, cfg)
    dim_k = k_onb.shape[1]
    dim_l = l_onb.shape[1]

    sum_rank = column_rank(np.hstack([bk, bl]), cfg) if dim_k + dim_l else 0
    sum_spans = sum_rank == n
    inter_dim = dim_k + dim_l - sum_rank
    trivial = inter_dim == 0
    if not (sum_spans and trivial):
        reasons = []
        if not sum_spans:
            reasons.append(
                f"K + L spans only a {sum_rank}-dimensional subspace of the "
                f"{n}-dimensional space (the assumption K + L = V fails)"
            )
        if not trivial:
            reasons.append(
                f"K and L share a {inter_dim}-dimensional intersection "
                "(the assumption K ∩ L = {0} fails)"
            )
        raise NotComplementary(
            "pair is not complementary: " + "; ".join(reasons),
            sum_spans=sum_spans,
            trivial_intersection=trivial,
        )

    p = k_onb @ k_onb.T
    q = l_onb @ l_onb.T
    diff = 0.5 * ((p - q) + (p - q).T)
    total = 0.5 * ((p + q) + (p + q).T)
    spec_diff = sym_eig(diff, cfg)
    spec_sum = sym_eig(total, cfg)

    # P - Q and P + Q - I have spectrum in [-1, 1]; anchor the kernel cutoff
    # at that scale so a matrix that is rounding noise of 0 gets kernel 0
    j_mat, t_mat = polar_from_spectrum(spec_diff, cfg, scale=1.0)
    # P + Q - I has the same eigenvectors as P + Q with eigenvalues shifted by 1
    spec_cross = SpectralDecomposition(
        eigenvalues=spec_sum.eigenvalues - 1.0, eigenvectors=spec_sum.eigenvectors
    )
    k_mat, c_mat = polar_from_spectrum(spec_cross, cfg, scale=1.0)
    delta = function_from_spectrum(spec_sum, lambda u: (2.0 - u) / u, cfg)
    s_mat = diff @ function_from_spectrum(spec_sum, lambda u: 1.0 / u, cfg)

    fixed = np.abs(np.abs(spec_diff.eigenvalues) - 1.0) <= cfg.cluster_tol
    sym_ortho = spec_diff.eigenvectors[:, fixed].copy()

    k_perp = complement_columns(k_onb, cfg)
    l_perp = complement_columns(l_onb, cfg)
    frames = {
        "k_and_l": (k_onb, l_onb),
        "k_and_l_perp": (k_onb, l_perp),
        "k_perp_and_l": (k_perp, l_onb),
        "k_perp_and_l_perp": (k_perp, l_perp),
    }
    intersections = {
        name: intersect_columns(a, b, cfg) for name, (a, b) in frames.items()
    }
    report = {name: basis.shape[1] for name, basis in intersections.items()}
    generic = all(d == 0 for d in report.values())

    ortho = PairOperators(
        P=p, Q=q, T=t_mat, C=c_mat, J=j_mat, K=k_mat, S=s_mat, Delta=delta
    )
    if metric.is_euclidean:
        ops = ortho
        sym_basis = sym_ortho
    else:
        ops = PairOperators(
            **{
                name: metric.op_from_ortho(getattr(ortho, name))
                for name in ("P", "Q", "T", "C", "J", "K", "S", "Delta")
            }
        )
        sym_basis = metric.from_ortho(sym_ortho)

    return PairAnalysis(
        metric=metric,
        cfg=cfg,
        k=k,
        l=l,
        ops=ops,
        ortho=ortho,
        sym_basis=sym_basis,
        sym_basis_ortho=sym_ortho,
        complementary=(sum_spans, trivial),
        generic=generic,
        intersection_report=report,
        k_onb=k_onb,
        l_onb=l_onb,
        k_perp=k_perp,
        l_perp=l_perp,
        spec_diff=spec_diff,
        spec_sum=spec_sum,
        intersections=intersections,
    )


def decompose(x, pa: PairAnalysis) -> tuple[Array, Array]:
    """Split x = y + z with y in K and z in L (problem coordinates)."""
    v = as_vector(x, "x")
    if v.size != pa.dim:
        raise DimensionMismatch(f"vector has dimension {v.size}, expected {pa.dim}")
    sx = pa.ops.S @ v
    return 0.5 * (v + sx), 0.5 * (v - sx)


def symmetric_subspace(pa: PairAnalysis) -> Array:
    """s-orthonormal basis of the fixed subspace {x : T x = x}."""
    return pa.sym_basis


def is_generic(pa: PairAnalysis) -> tuple[bool, dict[str, int]]:
    """Whether all four pairwise intersections among K, L and their
    complements are trivial, plus the dimension report."""
    return pa.generic, dict(pa.intersection_report)


# ---------------------------------------------------------------------------
# random pair generation


def random_pair(
    ambient_dim: int,
    dim_k: int,
    dim_l: int,
    seed,
    mode: str = "raw",
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> tuple[Subspace, Subspace]:
    """Sample a complementary pair in the Euclidean space of given dimension.

    ``mode="raw"`` draws Gaussian bases and resamples until the pair is
    complementary.  ``mode="force-nongeneric"`` reserves one direction on
    which K and L restrict to an orthogonal split, so the fixed subspace
    of T is nontrivial by construction.  Deterministic for a fixed seed.

    Draws whose smallest principal angle between K and L falls below
    ~0.05 rad are resampled as well: such pairs are numerically within
    rounding noise of violating complementarity and make verification
    residuals meaningless.
    """
    if ambient_dim < 1 or dim_k < 0 or dim_l < 0 or dim_k + dim_l != ambient_dim:
        raise BadDimensions(
            f"need dim_k + dim_l = ambient_dim >= 1, got ({ambient_dim}, {dim_k}, {dim_l})"
        )
    if mode not in ("raw", "force-nongeneric"):
        raise BadParameter(f"unknown mode {mode!r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    metric = Metric.identity(ambient_dim)
    n = ambient_dim

    for _ in range(100):
        if mode == "raw":
            bk = rng.standard_normal((n, dim_k))
            bl = rng.standard_normal((n, dim_l))
        else:
            bk = np.zeros((n, dim_k))
            bl = np.zeros((n, dim_l))
            if dim_k >= 1:
                bk[0, 0] = 1.0
                bk[1:, 1:] = rng.standard_normal((n - 1, dim_k - 1))
                bl[1:, :] = rng.standard_normal((n - 1, dim_l))
            else:
                bl[0, 0] = 1.0
                bl[1:, 1:] = rng.standard_normal((n - 1, dim_l - 1))
            rot = orthonormal_columns(rng.standard_normal((n, n)), cfg)
            if rot.shape[1] != n:
                continue
            bk = rot @ bk
            bl = rot @ bl
        onb_k = orthonormal_columns(bk, cfg)
        onb_l = orthonormal_columns(bl, cfg)
        if onb_k.shape[1] != dim_k or onb_l.shape[1] != dim_l:
            continue
        _, sv, _ = _jacobi_svd(np.hstack([onb_k, onb_l]))
        if sv.size != n or sv[-1] < 0.05:
            continue
        return Subspace(basis=bk, metric=metric), Subspace(basis=bl, metric=metric)
    raise ModPairError("failed to sample a complementary pair in 100 attempts")


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Check:
    """One named residual with its pass/fail verdict."""

    label: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


@dataclass(frozen=True)
class VerificationReport:
    """Named residual checks; passes iff every residual is within tolerance."""

    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def worst(self) -> Check:
        return max(self.checks, key=lambda c: c.residual / c.tol)

    def __getitem__(self, label: str) -> Check:
        for c in self.checks:
            if c.label == label:
                return c
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "checks": [
                {"label": c.label, "residual": c.residual, "passed": c.passed}
                for c in self.checks
            ],
            "passed": self.passed,
        }


def _fro(a) -> float:
    return float(np.linalg.norm(a))


def _proj(onb: Array, n: int) -> Array:
    if onb.shape[1] == 0:
        return np.zeros((n, n))
    return onb @ onb.T


def verify_propositions(
    pa: PairAnalysis, cfg: Optional[ToleranceConfig] = None
) -> VerificationReport:
    """Residual checks for every operator identity the pair must satisfy.

    All checks are evaluated in s-orthonormal coordinates, where the
    metric geometry is the Euclidean one and adjoints are transposes.
    Failures are reported, not raised.
    """
    cfg = cfg or pa.cfg
    tol = cfg.residual_tol
    n = pa.dim
    o = pa.ortho
    p, q, t, c, j, k_iso, s, delta = o.P, o.Q, o.T, o.C, o.J, o.K, o.S, o.Delta
    eye = np.eye(n)
    checks: list[Check] = []

    def add(label: str, residual: float, tolerance: float = tol):
        checks.append(Check(label=label, residual=float(residual), tol=tolerance))

    # projector axioms
    add("P^2=P", _fro(p @ p - p))
    add("P*=P", _fro(p - p.T))
    add("Q^2=Q", _fro(q @ q - q))
    add("Q*=Q", _fro(q - q.T))

    # polar decompositions and the basic identities
    diff = p - q
    cross = p + q - eye
    add("JT=P-Q", _fro(j @ t - diff))
    add("KC=P+Q-I", _fro(k_iso @ c - cross))
    add("T^2+C^2=I", _fro(t @ t + c @ c - eye))

    # the commutator of the projections
    w = p @ q - q @ p
    add("[PQ-QP,T]=0", _fro(w @ t - t @ w))
    add("[PQ-QP,C]=0", _fro(w @ c - c @ w))
    add("{PQ-QP,J}=0", _fro(w @ j + j @ w))
    add("{PQ-QP,K}=0", _fro(w @ k_iso + k_iso @ w))

    # the two partial isometries anticommute
    add("KJ+JK=0", _fro(k_iso @ j + j @ k_iso))

    # strict positivity and the square-root factorization of T
    lam_sum = pa.spec_sum.eigenvalues
    add("P+Q>0", max(0.0, -float(lam_sum.min())))
    add("2I-(P+Q)>0", max(0.0, float(lam_sum.max()) - 2.0))
    root_sum = function_from_spectrum(pa.spec_sum, math.sqrt, cfg)
    root_co = function_from_spectrum(pa.spec_sum, lambda u: math.sqrt(max(2.0 - u, 0.0)), cfg)
    add("T=(P+Q)^{1/2}(2I-(P+Q))^{1/2}", _fro(root_sum @ root_co - t))
    add("J^2=I", _fro(j @ j - eye))
    add("[T,P]=0", _fro(t @ p - p @ t))
    add("[T,Q]=0", _fro(t @ q - q @ t))
    add("[T,J]=0", _fro(t @ j - j @ t))
    add("JP=(I-Q)J", _fro(j @ p - (eye - q) @ j))
    add("JQ=(I-P)J", _fro(j @ q - (eye - p) @ j))

    # J exchanges the pair with the complements' pair
    add("J(K)=L^perp", _fro(j @ p @ j - (eye - q)))
    add("J(L)=K^perp", _fro(j @ q @ j - (eye - p)))
    pjp = sym_eig(0.5 * ((p @ j @ p) + (p @ j @ p).T), cfg).eigenvalues
    qjq = sym_eig(0.5 * ((q @ j @ q) + (q @ j @ q).T), cfg).eigenvalues
    add("PJP>=0", max(0.0, -float(pjp.min())))
    add("QJQ<=0", max(0.0, float(qjq.max())))
    add("PJQ=0", _fro(p @ j @ q))

    # the fixed subspace of T
    w_fix = pa.sym_basis_ortho
    pi_fix = _proj(w_fix, n)
    add("J(fix T)=fix T", _fro(j @ pi_fix @ j - pi_fix))
    kl_perp = pa.intersections["k_and_l_perp"]
    kperp_l = pa.intersections["k_perp_and_l"]
    union = orthonormal_columns(np.hstack([kl_perp, kperp_l]), cfg)
    add("fix T=(K^L^perp)+(K^perp^L)", _fro(pi_fix - _proj(union, n)))
    fix_k = intersect_columns(w_fix, pa.k_onb, cfg)
    fix_l = intersect_columns(w_fix, pa.l_onb, cfg)
    add("fixT^K=L^perp^K", _fro(_proj(fix_k, n) - _proj(kl_perp, n)))
    add("fixT^L=K^perp^L", _fro(_proj(fix_l, n) - _proj(kperp_l, n)))
    add(
        "dim fixT>=|dimK-dimL|",
        float(max(0, abs(pa.k_onb.shape[1] - pa.l_onb.shape[1]) - w_fix.shape[1])),
    )
    # K^2 projects onto the orthogonal complement of the fixed subspace
    add("K^2=proj(fixT^perp)", _fro(k_iso @ k_iso - (eye - pi_fix)))

    # pointwise statements on fix T meet K and fix T meet L
    for idx in range(fix_k.shape[1]):
        y = fix_k[:, idx]
        add(f"JQy=-Qy (y{idx})", float(np.linalg.norm(j @ q @ y + q @ y)))
        add(f"PQy=0 (y{idx})", float(np.linalg.norm(p @ q @ y)))
    for idx in range(fix_l.shape[1]):
        z = fix_l[:, idx]
        add(f"JPz=Pz (z{idx})", float(np.linalg.norm(j @ p @ z - p @ z)))
        add(f"QPz=0 (z{idx})", float(np.linalg.norm(q @ p @ z)))

    # the involution S and the modular operator.  Delta (and with it S) is
    # unbounded as the pair approaches degeneracy, and the achievable
    # floating-point accuracy of every identity below degrades like
    # eps * ||Delta||, so these residuals are measured relative to it.
    d_scale = max(1.0, _fro(delta))
    add("SP=P", _fro(s @ p - p) / d_scale)
    add("SQ=-Q", _fro(s @ q + q) / d_scale)
    add("S^2=I", _fro(s @ s - eye) / d_scale)
    add("S(P+Q)=P-Q", _fro(s @ (p + q) - diff) / d_scale)
    add("S(P-Q)=P+Q", _fro(s @ diff - (p + q)) / d_scale)
    add("S*S=Delta", _fro(s.T @ s - delta) / d_scale)
    add("(2I-(P+Q))S=P-Q", _fro((2.0 * eye - (p + q)) @ s - diff) / d_scale)
    add("S*J=JS", _fro(s.T @ j - j @ s) / d_scale)
    half = function_from_spectrum(pa.spec_sum, lambda u: math.sqrt((2.0 - u) / u), cfg)
    inv_half = function_from_spectrum(pa.spec_sum, lambda u: math.sqrt(u / (2.0 - u)), cfg)
    add("S=J.Delta^{1/2}", _fro(j @ half - s) / d_scale)
    add("Delta^{-1/2}=J.Delta^{1/2}J", _fro(inv_half - j @ half @ j) / d_scale)
    s_alt = function_from_spectrum(pa.spec_sum, lambda u: 1.0 / (2.0 - u), cfg) @ diff
    add("(P-Q)(P+Q)^{-1}=(2I-(P+Q))^{-1}(P-Q)", _fro(s - s_alt) / d_scale)
    delta_eigs = (2.0 - lam_sum) / lam_sum
    add("Delta>0", max(0.0, -float(delta_eigs.min())))
    add(
        "(P-Q)(P+Q)(2I-(P+Q))=(P-Q)T^2",
        _fro(diff @ (p + q) @ (2.0 * eye - (p + q)) - diff @ t @ t),
        tol * n,
    )

    # restricting the pair to the complement of fix T is generic.  The
    # intersections are decided by the same rank route as the top-level
    # report, so a merely ill-conditioned direction does not count.
    m_fix = w_fix.shape[1]
    if n - m_fix == 0:
        add("restriction to fixT^perp generic", 0.0)
    elif m_fix == 0:
        add("restriction to fixT^perp generic", float(sum(pa.intersection_report.values())))
    else:
        w_perp = complement_columns(w_fix, cfg)
        pr = w_perp.T @ p @ w_perp
        qr = w_perp.T @ q @ w_perp
        k_res = orthonormal_columns(pr, cfg)
        l_res = orthonormal_columns(qr, cfg)
        k_res_perp = complement_columns(k_res, cfg)
        l_res_perp = complement_columns(l_res, cfg)
        counts = 0
        for a, b in (
            (k_res, l_res),
            (k_res, l_res_perp),
            (k_res_perp, l_res),
            (k_res_perp, l_res_perp),
        ):
            counts += intersect_columns(a, b, cfg).shape[1]
        add("restriction to fixT^perp generic", float(counts))

    return VerificationReport(checks=tuple(checks))
