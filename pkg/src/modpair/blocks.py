"""Complexification of the doubled space V x V.

The orthogonal involution J of a complementary pair turns V x V into a
complex Hilbert space: the operator i_hat [x, y] = [J y, -J x] squares
to -1 and the sesquilinear inner product

    ([x, y], [u, v]) = s(x, u) + s(y, v) + i s(x, J v) - i s(J y, u)

extends s.  Operators on the doubled space are assembled from n x n
blocks in two flavours,

    [A : B]  = [[A, BJ], [-JB, JAJ]]   (commutes with i_hat)
    [A .. B] = [[A, BJ], [JB, -JAJ]]   (anticommutes with i_hat)

and the eight canonical elements built from I and J generate, with
signs, a group of order 16.  This module provides the block calculus,
the group with its multiplication-table verification, the lifted
projections diag(P, I-P) and diag(Q, I-Q), and the doubled modular
operator with its fixed-point classification.

All 2n x 2n matrices live in s-orthonormal coordinates, where the
sesquilinear adjoint of either flavour is the plain transpose.
ProductVector components stay in problem coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BadParameter,
    DimensionMismatch,
    UnrecognizedProduct,
    ZeroVector,
)
from .linalg import (
    Array,
    ToleranceConfig,
    as_matrix,
    as_vector,
    complement_columns,
    function_from_spectrum,
    intersect_columns,
    orthonormal_columns,
)
from .pair import Check, PairAnalysis, VerificationReport

COMPLEX_LINEAR = "complex-linear"
ANTILINEAR = "antilinear"
REAL_LINEAR = "real-linear"

MEMBER_K = "K_oplus"
MEMBER_L = "L_oplus"
NEITHER = "neither"


@dataclass(frozen=True)
class ProductVector:
    """Element [x, y] of the doubled space, components in problem coordinates."""

    x: Array
    y: Array

    def __post_init__(self):
        object.__setattr__(self, "x", as_vector(self.x, "x"))
        object.__setattr__(self, "y", as_vector(self.y, "y"))
        if self.x.size != self.y.size:
            raise DimensionMismatch("components of a product vector must have equal dimension")

    @property
    def dim(self) -> int:
        return self.x.size

    def stacked(self) -> Array:
        return np.concatenate([self.x, self.y])

    @classmethod
    def from_stacked(cls, vec) -> "ProductVector":
        v = as_vector(vec, "vector")
        if v.size % 2:
            raise DimensionMismatch("stacked product vector must have even length")
        n = v.size // 2
        return cls(x=v[:n], y=v[n:])


@dataclass(frozen=True)
class BlockOperator:
    """2n x 2n real operator on the doubled space, in s-orthonormal coordinates.

    ``linearity`` records how the operator interacts with the
    complexification i_hat: COMPLEX_LINEAR commutes, ANTILINEAR
    anticommutes, REAL_LINEAR makes no claim (the lifted projections are
    of this kind).
    """

    mat: Array
    linearity: str

    def __post_init__(self):
        m = as_matrix(self.mat, "block operator")
        object.__setattr__(self, "mat", m)
        if m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise DimensionMismatch(f"block operator must be 2n x 2n, got {m.shape}")
        if self.linearity not in (COMPLEX_LINEAR, ANTILINEAR, REAL_LINEAR):
            raise BadParameter(f"unknown linearity tag {self.linearity!r}")

    @property
    def dim(self) -> int:
        return self.mat.shape[0] // 2


def inner_product(v: ProductVector, w: ProductVector, pa: PairAnalysis) -> complex:
    """Sesquilinear inner product of the complexified space.

    Linear in the first argument; restricting to vectors [x, 0] recovers
    the real inner product s.
    """
    n = pa.dim
    if v.dim != n or w.dim != n:
        raise DimensionMismatch(f"product vectors must have component dimension {n}")
    g = pa.metric.gram
    j = pa.ops.J
    re = float(v.x @ g @ w.x + v.y @ g @ w.y)
    im = float(v.x @ g @ (j @ w.y) - (j @ v.y) @ g @ w.x)
    return complex(re, im)


def symplectic_form(v: ProductVector, w: ProductVector, pa: PairAnalysis) -> float:
    """Imaginary part of the inner product: s(x, Jv') - s(Jy, u')."""
    return inner_product(v, w, pa).imag


def make_block(a, b, linearity: str, pa: PairAnalysis) -> BlockOperator:
    """Assemble [A : B] (complex-linear) or [A .. B] (antilinear).

    A and B are n x n operators in s-orthonormal coordinates.
    """
    n = pa.dim
    am = as_matrix(a, "A")
    bm = as_matrix(b, "B")
    if am.shape != (n, n) or bm.shape != (n, n):
        raise DimensionMismatch(f"blocks must be {n} x {n} matrices")
    j = pa.ortho.J
    if linearity == COMPLEX_LINEAR:
        mat = np.block([[am, bm @ j], [-j @ bm, j @ am @ j]])
    elif linearity == ANTILINEAR:
        mat = np.block([[am, bm @ j], [j @ bm, -j @ am @ j]])
    else:
        raise BadParameter("make_block supports complex-linear and antilinear operators")
    return BlockOperator(mat=mat, linearity=linearity)


def block_components(op: BlockOperator, pa: PairAnalysis) -> tuple[Array, Array]:
    """Recover (A, B) from an assembled block operator (J is an involution)."""
    n = op.dim
    j = pa.ortho.J
    return op.mat[:n, :n].copy(), op.mat[:n, n:] @ j


def adjoint(op: BlockOperator) -> BlockOperator:
    """Sesquilinear adjoint; in orthonormal coordinates the real transpose.

    Equals [A* : -B*] for complex-linear and [A* .. B*] for antilinear
    operators, and preserves the linearity tag.
    """
    return BlockOperator(mat=op.mat.T.copy(), linearity=op.linearity)


def product(op1: BlockOperator, op2: BlockOperator) -> BlockOperator:
    """Compose two block operators; linearity tags multiply mod 2."""
    if op1.dim != op2.dim:
        raise DimensionMismatch("block operators act on different spaces")
    tags = (op1.linearity, op2.linearity)
    if REAL_LINEAR in tags:
        tag = REAL_LINEAR
    elif op1.linearity == op2.linearity:
        tag = COMPLEX_LINEAR
    else:
        tag = ANTILINEAR
    return BlockOperator(mat=op1.mat @ op2.mat, linearity=tag)


def apply_block(op: BlockOperator, v: ProductVector, pa: PairAnalysis) -> ProductVector:
    """Apply a block operator to a product vector (problem coordinates)."""
    if op.dim != pa.dim or v.dim != pa.dim:
        raise DimensionMismatch("operator, vector and pair dimensions disagree")
    xo = pa.metric.to_ortho(v.x)
    yo = pa.metric.to_ortho(v.y)
    out = op.mat @ np.concatenate([xo, yo])
    n = pa.dim
    return ProductVector(
        x=pa.metric.from_ortho(out[:n]), y=pa.metric.from_ortho(out[n:])
    )


def complex_unit(pa: PairAnalysis) -> BlockOperator:
    """The complexification i_hat = [0 : I], sending [x, y] to [Jy, -Jx]."""
    n = pa.dim
    return make_block(np.zeros((n, n)), np.eye(n), COMPLEX_LINEAR, pa)


def linearity_residual(op: BlockOperator, pa: PairAnalysis) -> float:
    """Relative commutation (or anticommutation) defect against i_hat."""
    i_mat = complex_unit(pa).mat
    if op.linearity == COMPLEX_LINEAR:
        defect = op.mat @ i_mat - i_mat @ op.mat
    elif op.linearity == ANTILINEAR:
        defect = op.mat @ i_mat + i_mat @ op.mat
    else:
        return 0.0
    return float(np.linalg.norm(defect) / max(np.linalg.norm(op.mat), 1e-300))


# ---------------------------------------------------------------------------
# the order-16 group


@dataclass(frozen=True)
class GroupElement:
    """One signed canonical element with its matrix realization."""

    name: str
    sign: int
    realization: BlockOperator


# canonical assembly: name -> (A-block is J?, B-block is J?, linearity)
# I = [I:0], i = [0:I], c = [J:0], l = [0:J]   (complex-linear)
# k = [I..0], j = [0..I], m = [J..0], n = [0..J]  (antilinear)
_CANONICAL = {
    "I": ("I", None, COMPLEX_LINEAR),
    "i": (None, "I", COMPLEX_LINEAR),
    "c": ("J", None, COMPLEX_LINEAR),
    "l": (None, "J", COMPLEX_LINEAR),
    "k": ("I", None, ANTILINEAR),
    "j": (None, "I", ANTILINEAR),
    "m": ("J", None, ANTILINEAR),
    "n": (None, "J", ANTILINEAR),
}

ELEMENT_ORDER = ("I", "i", "c", "l", "k", "j", "m", "n")

# expected products of the eight canonical generators, row times column,
# in ELEMENT_ORDER; entries are signed element names
GROUP_TABLE = (
    ("+I", "+i", "+c", "+l", "+k", "+j", "+m", "+n"),
    ("+i", "-I", "+l", "-c", "-j", "+k", "-n", "+m"),
    ("+c", "+l", "+I", "+i", "+m", "+n", "+k", "+j"),
    ("+l", "-c", "+i", "-I", "-n", "+m", "-j", "+k"),
    ("+k", "+j", "+m", "+n", "+I", "+i", "+c", "+l"),
    ("+j", "-k", "+n", "-m", "-i", "+I", "-l", "+c"),
    ("+m", "+n", "+k", "+j", "+c", "+l", "+I", "+i"),
    ("+n", "-m", "+j", "-k", "-l", "+c", "-i", "+I"),
)

# the four embedded split-quaternion systems {1, e2, e3, e4} with
# e2^2 = -1, e3^2 = e4^2 = +1 and pairwise anticommutation
SPLIT_QUADRUPLES = (("i", "j", "k"), ("i", "m", "n"), ("l", "j", "m"), ("l", "k", "n"))


def group_elements(pa: PairAnalysis) -> dict[str, GroupElement]:
    """The eight canonical elements built from I and J, keyed by name."""
    n = pa.dim
    eye = np.eye(n)
    j = pa.ortho.J
    blocks = {"I": eye, "J": j, None: np.zeros((n, n))}
    out = {}
    for name, (a_key, b_key, tag) in _CANONICAL.items():
        op = make_block(blocks[a_key], blocks[b_key], tag, pa)
        out[name] = GroupElement(name=name, sign=1, realization=op)
    return out


def identify_element(
    mat: Array, elements: dict[str, GroupElement], cfg: ToleranceConfig
) -> tuple[int, str]:
    """Match a matrix against the sixteen signed canonical elements."""
    n2 = mat.shape[0]
    tol = cfg.residual_tol * math.sqrt(float(n2))
    for name, el in elements.items():
        if np.linalg.norm(mat - el.realization.mat) <= tol:
            return 1, name
        if np.linalg.norm(mat + el.realization.mat) <= tol:
            return -1, name
    raise UnrecognizedProduct("product matrix matches no signed canonical element")


@dataclass(frozen=True)
class GroupTableReport:
    """Result of multiplying out the canonical elements."""

    products: dict[tuple[str, str], tuple[int, str]]
    mismatches: tuple[tuple[str, str, str, str], ...]
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return not self.mismatches and all(c.passed for c in self.checks)


def verify_group_table(
    pa: PairAnalysis, cfg: Optional[ToleranceConfig] = None
) -> GroupTableReport:
    """Multiply all 64 ordered pairs of canonical elements and compare
    against the stored table; also check the structural group facts."""
    cfg = cfg or pa.cfg
    tol = cfg.residual_tol
    els = group_elements(pa)
    eye2 = np.eye(2 * pa.dim)

    products: dict[tuple[str, str], tuple[int, str]] = {}
    mismatches: list[tuple[str, str, str, str]] = []
    for ri, rname in enumerate(ELEMENT_ORDER):
        for ci, cname in enumerate(ELEMENT_ORDER):
            mat = els[rname].realization.mat @ els[cname].realization.mat
            sign, name = identify_element(mat, els, cfg)
            products[(rname, cname)] = (sign, name)
            got = ("+" if sign > 0 else "-") + name
            expected = GROUP_TABLE[ri][ci]
            if got != expected:
                mismatches.append((rname, cname, expected, got))

    checks: list[Check] = []

    def add(label, residual, tolerance=tol):
        checks.append(Check(label=label, residual=float(residual), tol=tolerance))

    # {+-I, +-i, +-j, +-k} is closed under multiplication
    normal = {"I", "i", "j", "k"}
    closure_violations = sum(
        1
        for a in normal
        for b in normal
        if products[(a, b)][1] not in normal
    )
    add("normal subgroup closed", float(closure_violations))

    # c commutes with all eight generators
    c_mat = els["c"].realization.mat
    central = max(
        float(np.linalg.norm(c_mat @ e.realization.mat - e.realization.mat @ c_mat))
        for e in els.values()
    )
    add("c central", central)

    # orders: i and l square to -1 (order 4), the rest square to +1
    for name in ELEMENT_ORDER:
        mat = els[name].realization.mat
        sq = mat @ mat
        if name in ("i", "l"):
            add(f"{name}^2=-1", float(np.linalg.norm(sq + eye2)))
            add(f"{name}^4=+1", float(np.linalg.norm(sq @ sq - eye2)))
        elif name != "I":
            add(f"{name}^2=+1", float(np.linalg.norm(sq - eye2)))

    # the four split-quaternion systems
    for e2, e3, e4 in SPLIT_QUADRUPLES:
        m2 = els[e2].realization.mat
        m3 = els[e3].realization.mat
        m4 = els[e4].realization.mat
        label = f"split({e2},{e3},{e4})"
        add(f"{label}: {e2}^2=-1", float(np.linalg.norm(m2 @ m2 + eye2)))
        add(f"{label}: {e3}^2=+1", float(np.linalg.norm(m3 @ m3 - eye2)))
        add(f"{label}: {e4}^2=+1", float(np.linalg.norm(m4 @ m4 - eye2)))
        add(f"{label}: anticommute", float(
            np.linalg.norm(m2 @ m3 + m3 @ m2)
            + np.linalg.norm(m2 @ m4 + m4 @ m2)
            + np.linalg.norm(m3 @ m4 + m4 @ m3)
        ))
        closure = (
            (products[(e2, e3)][1] == e4)
            + (products[(e3, e4)][1] == e2)
            + (products[(e4, e2)][1] == e3)
        )
        add(f"{label}: closes", float(3 - closure))

    return GroupTableReport(
        products=products, mismatches=tuple(mismatches), checks=tuple(checks)
    )


# ---------------------------------------------------------------------------
# lifted projections and the doubled modular operator


@dataclass(frozen=True)
class LiftReport:
    """Projector residuals and genericity of the lifted pair."""

    checks: tuple[Check, ...]
    intersection_dims: dict[str, int]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def lift_pair(
    pa: PairAnalysis, cfg: Optional[ToleranceConfig] = None
) -> tuple[BlockOperator, BlockOperator, LiftReport]:
    """The lifted projections diag(P, I-P), diag(Q, I-Q) with a report.

    The lifted subspaces K + K^perp and L + L^perp of the doubled space
    form a generic pair even when the base pair is not generic; the
    report verifies this by ranks of the stacked bases.
    """
    cfg = cfg or pa.cfg
    tol = cfg.residual_tol
    n = pa.dim
    p = pa.ortho.P
    q = pa.ortho.Q
    eye = np.eye(n)
    zero = np.zeros((n, n))
    p_hat = BlockOperator(
        mat=np.block([[p, zero], [zero, eye - p]]), linearity=REAL_LINEAR
    )
    q_hat = BlockOperator(
        mat=np.block([[q, zero], [zero, eye - q]]), linearity=REAL_LINEAR
    )

    checks: list[Check] = []

    def add(label, residual, tolerance=tol):
        checks.append(Check(label=label, residual=float(residual), tol=tolerance))

    for label, op in (("p", p_hat), ("q", q_hat)):
        add(f"{label}^2={label}", float(np.linalg.norm(op.mat @ op.mat - op.mat)))
        add(f"{label}*={label}", float(np.linalg.norm(op.mat - op.mat.T)))

    def lifted(first: Array, second: Array) -> Array:
        out = np.zeros((2 * n, first.shape[1] + second.shape[1]))
        out[:n, : first.shape[1]] = first
        out[n:, first.shape[1] :] = second
        return out

    k_lift = lifted(pa.k_onb, pa.k_perp)
    l_lift = lifted(pa.l_onb, pa.l_perp)
    k_lift_perp = lifted(pa.k_perp, pa.k_onb)
    l_lift_perp = lifted(pa.l_perp, pa.l_onb)

    sum_rank = orthonormal_columns(np.hstack([k_lift, l_lift]), cfg).shape[1]
    add("K_oplus+L_oplus spans", float(2 * n - sum_rank))

    dims = {}
    for label, (a, b) in {
        "k_and_l": (k_lift, l_lift),
        "k_and_l_perp": (k_lift, l_lift_perp),
        "k_perp_and_l": (k_lift_perp, l_lift),
        "k_perp_and_l_perp": (k_lift_perp, l_lift_perp),
    }.items():
        dims[label] = intersect_columns(a, b, cfg).shape[1]
        add(f"lifted {label} trivial", float(dims[label]))

    return p_hat, q_hat, LiftReport(checks=tuple(checks), intersection_dims=dims)


@dataclass(frozen=True)
class OplusBundle:
    """The doubled operators with their polar-decomposition report."""

    T_op: BlockOperator
    C_op: BlockOperator
    K_op: BlockOperator
    m_hat: BlockOperator
    n_hat: BlockOperator
    S_op: BlockOperator
    Delta_op: BlockOperator
    report: VerificationReport


def oplus_operators(
    pa: PairAnalysis, cfg: Optional[ToleranceConfig] = None
) -> OplusBundle:
    """Assemble the doubled operators and verify their polar structure."""
    cfg = cfg or pa.cfg
    tol = cfg.residual_tol
    n = pa.dim
    o = pa.ortho
    eye = np.eye(n)
    zero = np.zeros((n, n))

    t_op = make_block(o.T, zero, COMPLEX_LINEAR, pa)
    c_op = make_block(o.C, zero, COMPLEX_LINEAR, pa)
    k_op = make_block(o.K, zero, COMPLEX_LINEAR, pa)
    delta_op = make_block(o.Delta, zero, COMPLEX_LINEAR, pa)
    s_op = make_block(o.S, zero, ANTILINEAR, pa)
    s_swap = make_block(zero, o.S, ANTILINEAR, pa)
    els = group_elements(pa)
    m_hat = els["m"].realization
    n_hat = els["n"].realization
    i_mat = els["i"].realization.mat

    p_hat_mat = np.block([[o.P, zero], [zero, eye - o.P]])
    q_hat_mat = np.block([[o.Q, zero], [zero, eye - o.Q]])
    diff_hat = p_hat_mat - q_hat_mat
    cross_hat = p_hat_mat + q_hat_mat - np.eye(2 * n)

    delta_inv = function_from_spectrum(pa.spec_sum, lambda u: u / (2.0 - u), cfg)
    half = function_from_spectrum(pa.spec_sum, lambda u: math.sqrt((2.0 - u) / u), cfg)
    inv_half = function_from_spectrum(pa.spec_sum, lambda u: math.sqrt(u / (2.0 - u)), cfg)
    delta_half = np.block([[half, zero], [zero, inv_half]])

    checks: list[Check] = []

    def add(label, residual, tolerance=tol):
        checks.append(Check(label=label, residual=float(residual), tol=tolerance))

    add("p-q=m.[T:0]", float(np.linalg.norm(diff_hat - m_hat.mat @ t_op.mat)))
    add("p+q-I=[K:0][C:0]", float(np.linalg.norm(cross_hat - k_op.mat @ c_op.mat)))
    add(
        "Delta_oplus=diag(Delta,Delta^{-1})",
        float(
            np.linalg.norm(delta_op.mat - np.block([[o.Delta, zero], [zero, delta_inv]]))
        ),
    )
    add(
        "S_oplus=diag(S,-S*)",
        float(np.linalg.norm(s_op.mat - np.block([[o.S, zero], [zero, -o.S.T]]))),
    )
    add(
        "S_oplus*S_oplus=Delta_oplus",
        float(np.linalg.norm(s_op.mat.T @ s_op.mat - delta_op.mat)),
    )
    add("S_oplus=m.Delta_oplus^{1/2}", float(np.linalg.norm(s_op.mat - m_hat.mat @ delta_half)))
    add("[0..S]=n.Delta_oplus^{1/2}", float(np.linalg.norm(s_swap.mat - n_hat.mat @ delta_half)))
    scale_diff = max(np.linalg.norm(diff_hat), 1e-300)
    add(
        "p-q antilinear",
        float(np.linalg.norm(diff_hat @ i_mat + i_mat @ diff_hat)) / scale_diff,
    )
    scale_cross = max(np.linalg.norm(cross_hat), 1e-300)
    add(
        "p+q-I complex-linear",
        float(np.linalg.norm(cross_hat @ i_mat - i_mat @ cross_hat)) / scale_cross,
    )

    return OplusBundle(
        T_op=t_op,
        C_op=c_op,
        K_op=k_op,
        m_hat=m_hat,
        n_hat=n_hat,
        S_op=s_op,
        Delta_op=delta_op,
        report=VerificationReport(checks=tuple(checks)),
    )


def classify(
    v: ProductVector, pa: PairAnalysis, cfg: Optional[ToleranceConfig] = None
) -> str:
    """Locate a vector relative to the +-1 fixed-point sets of S_oplus.

    Returns MEMBER_K if S_oplus v = v, MEMBER_L if S_oplus v = -v,
    NEITHER otherwise (relative to residual_tol).
    """
    cfg = cfg or pa.cfg
    if v.dim != pa.dim:
        raise DimensionMismatch(f"vector has component dimension {v.dim}, expected {pa.dim}")
    xo = pa.metric.to_ortho(v.x)
    yo = pa.metric.to_ortho(v.y)
    vec = np.concatenate([xo, yo])
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise ZeroVector("cannot classify the zero vector")
    s = pa.ortho.S
    out = np.concatenate([s @ xo, -(s.T @ yo)])
    if np.linalg.norm(out - vec) <= cfg.residual_tol * norm:
        return MEMBER_K
    if np.linalg.norm(out + vec) <= cfg.residual_tol * norm:
        return MEMBER_L
    return NEITHER
