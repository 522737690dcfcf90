"""Braided classical r-matrices, braided Schouten brackets and the braided
first Sklyanin bracket.

All ov-embeddings into V^{(x)3} use an involutive F, so A_{ov kl} with k > l
is well defined as (F A F)_{ov lk}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .braidings import Braiding, check_compatible
from .currents import PoleError
from .report import CheckReport, FAIL, combine, matrix_check
from .scalars import as_scalar
from .tensor import PositionContext, TensorOp, commutator, embed_ov_pair, embed_ov_single, place

__all__ = [
    "BraidedRMatrix",
    "rational_r",
    "trigonometric_r",
    "constant_r_from_expansion",
    "check_constant_r",
    "check_r_properties",
    "alternative_form_check",
    "schouten_defect",
    "schouten_AA_formula",
    "check_commutation",
    "sklyanin_bracket",
    "sklyanin_skew_check",
    "jacobi_expression",
    "jacobi_check",
]


def _op(x):
    return x.op if isinstance(x, Braiding) else x


def _require_involutive(F):
    if F @ F != TensorOp.identity(F.N, 2):
        raise ValueError("braided r-matrices need an involutive F")


@dataclass(frozen=True, eq=False)
class BraidedRMatrix:
    """kind is "rational_current", "trigonometric_current" or "constant"."""

    kind: str
    F: TensorOp
    r_const: TensorOp = None

    def __post_init__(self):
        _require_involutive(self.F)
        if self.kind != "rational_current" and self.r_const is None:
            raise ValueError(f"{self.kind} r-matrix needs the constant r")

    @property
    def N(self):
        return self.F.N

    @property
    def is_current(self):
        return self.kind != "constant"

    def __call__(self, u=None, v=None) -> TensorOp:
        if self.kind == "constant":
            return self.r_const
        u, v = as_scalar(u), as_scalar(v)
        if u == v:
            raise PoleError(f"r(u,v) has a pole at u = v = {u}")
        if self.kind == "rational_current":
            return self.F.scale(Fraction(1) / (u - v))
        return self.F.scale(u / (u - v)) - self.r_const.scale(Fraction(1, 2))


def rational_r(F) -> BraidedRMatrix:
    """r(u,v) = F/(u - v)."""
    return BraidedRMatrix("rational_current", _op(F))


def trigonometric_r(F, r_const) -> BraidedRMatrix:
    """r(u,v) = F u/(u - v) - r/2."""
    return BraidedRMatrix("trigonometric_current", _op(F), r_const)


def constant_r_from_expansion(R: Braiding, F) -> TensorOp:
    """r in R(q) F = I + h r + O(h^2), q = exp(h): r = d/dq (R(q) F) at q = 1."""
    f = _op(F)
    _require_involutive(f)
    RF = R.op @ f
    I = TensorOp.identity(f.N, 2)
    if RF.evaluate(1) != I:
        raise ValueError(f"R(1) F != I for R = {R.name}: R is not a deformation of F")
    return RF.derivative().evaluate(1)


def _ov_pairs(X, ctx, pairs):
    return {p: embed_ov_pair(X, p[0], p[1], ctx) for p in pairs}


def cybe_sum(r12, r13, r23):
    return commutator(r12, r13) + commutator(r12, r23) + commutator(r13, r23)


def check_constant_r(r: TensorOp, F) -> CheckReport:
    """r_{ov12} + r_{ov21} = 2F and the constant braided CYBE on V^{(x)3}."""
    f = _op(F)
    _require_involutive(f)
    ctx = PositionContext(f, 3)
    e = _ov_pairs(r, ctx, [(1, 2), (1, 3), (2, 3)])
    return combine("constant_r", [
        matrix_check("r12+r21=2F", r + f @ r @ f, f.scale(2)),
        matrix_check("braided_cybe", cybe_sum(e[1, 2], e[1, 3], e[2, 3]), TensorOp.zero(f.N, 3)),
    ])


def check_r_properties(r: BraidedRMatrix, points) -> CheckReport:
    """Skew-symmetry r_{ov21}(v,u) + r_{ov12}(u,v) = 0 and the braided CYBE
    (constant r: r + F r F = 2F and the constant CYBE)."""
    if not r.is_current:
        return check_constant_r(r.r_const, r.F)
    F = r.F
    ctx = PositionContext(F, 3)
    Z3 = TensorOp.zero(F.N, 3)
    subs = []
    for (u, v, w) in points:
        subs.append(matrix_check("skew", F @ r(v, u) @ F + r(u, v), TensorOp.zero(F.N, 2), point=[u, v]))
        r12 = embed_ov_pair(r(u, v), 1, 2, ctx)
        r13 = embed_ov_pair(r(u, w), 1, 3, ctx)
        r23 = embed_ov_pair(r(v, w), 2, 3, ctx)
        subs.append(matrix_check("braided_cybe", cybe_sum(r12, r13, r23), Z3, point=[u, v, w]))
    return combine(f"r_properties[{r.kind}]", subs, points=len(points))


def alternative_form_check(r: BraidedRMatrix, points) -> CheckReport:
    """r(u,v) = 1/2 (F (u+v)/(u-v) - (r - r_{ov21})/2) for the trigonometric current."""
    if r.kind != "trigonometric_current":
        raise ValueError("alternative form applies to the trigonometric current")
    F, c = r.F, r.r_const
    subs = []
    for (u, v) in points:
        u, v = as_scalar(u), as_scalar(v)
        alt = (F.scale((u + v) / (u - v)) - (c - F @ c @ F).scale(Fraction(1, 2))).scale(Fraction(1, 2))
        subs.append(matrix_check("alternative_form", r(u, v), alt, point=[u, v]))
    return combine("alternative_form", subs)


def schouten_defect(A, B, point=None, F=None) -> TensorOp:
    """Braided Schouten bracket [[A, B]](u,v,w): six commutators of ov-embedded
    values on V^{(x)3}; constant arguments ignore the spectral parameters."""
    if F is None:
        carriers = [X.F for X in (A, B) if isinstance(X, BraidedRMatrix)]
        if not carriers:
            raise ValueError("constant operands need the braiding F")
        F = carriers[0]
    f = _op(F)
    ctx = PositionContext(f, 3)
    u, v, w = point if point is not None else (None, None, None)

    def vals(X):
        if isinstance(X, BraidedRMatrix) and X.is_current:
            return {(1, 2): X(u, v), (1, 3): X(u, w), (2, 3): X(v, w)}
        op = X(u, v) if isinstance(X, BraidedRMatrix) else X
        return {(1, 2): op, (1, 3): op, (2, 3): op}

    a, b = vals(A), vals(B)
    ea = {p: embed_ov_pair(a[p], p[0], p[1], ctx) for p in a}
    eb = {p: embed_ov_pair(b[p], p[0], p[1], ctx) for p in b}
    out = TensorOp.zero(f.N, 3)
    for x, y in ((ea, eb), (eb, ea)):
        out = out + commutator(x[1, 2], y[1, 3]) + commutator(x[1, 2], y[2, 3]) + commutator(x[1, 3], y[2, 3])
    return out


def schouten_AA_formula(F, point) -> CheckReport:
    """[[A, A]](u,v,w) = 2u/(u - w) [F_23, F_12] for A = F u/(u - v)."""
    f = _op(F)
    _require_involutive(f)
    A = BraidedRMatrix("trigonometric_current", f, TensorOp.zero(f.N, 2))
    u, v, w = (as_scalar(x) for x in point)
    lhs = schouten_defect(A, A, (u, v, w))
    F12, F23 = place(f, (1, 2), 3), place(f, (2, 3), 3)
    rhs = commutator(F23, F12).scale(2 * u / (u - w))
    return matrix_check("schouten_AA", lhs, rhs, point=[u, v, w])


def check_commutation(R, F, As, points=(), r_current=None) -> CheckReport:
    """RR_{ov ij} A_{ov k} = A_{ov k} RR_{ov ij} (RR = R F) and the same for
    r_{ov ij}(u,v), for all pairwise distinct (i, j, k) in 1..3."""
    f, rop = _op(F), _op(R)
    _require_involutive(f)
    comp = check_compatible(rop, f)
    if not comp.passed:
        return CheckReport("commutation", FAIL, witnesses=comp.witnesses, details={"reason": "incompatible pair"})
    ctx = PositionContext(f, 3)
    RR = rop @ f
    subs = []
    for (i, j, k) in permutations((1, 2, 3)):
        RRij = embed_ov_pair(RR, i, j, ctx)
        for t, A in enumerate(As):
            Ak = embed_ov_single(A, k, ctx)
            subs.append(matrix_check(f"RR_ov{i}{j}_A_ov{k}", RRij @ Ak, Ak @ RRij, sample=t))
            if r_current is not None:
                for (u, v) in points:
                    rij = embed_ov_pair(r_current(u, v), i, j, ctx)
                    subs.append(matrix_check(f"r_ov{i}{j}_A_ov{k}", rij @ Ak, Ak @ rij, sample=t, point=[u, v]))
    return combine("commutation", subs)


# --- Sklyanin bracket ---------------------------------------------------------

def sklyanin_bracket(X, Y, u, v, r: BraidedRMatrix) -> TensorOp:
    """[X_{ov1} + Y_{ov2}, r(u,v)] on V (x) V."""
    ctx = PositionContext(r.F, 2)
    return commutator(embed_ov_single(X, 1, ctx) + embed_ov_single(Y, 2, ctx), r(u, v))


def sklyanin_skew_check(X, Y, u, v, r: BraidedRMatrix) -> CheckReport:
    """bracket(X, Y, u, v) = -F bracket(Y, X, v, u) F."""
    F = r.F
    return matrix_check("sklyanin_skew", sklyanin_bracket(X, Y, u, v, r),
                        -(F @ sklyanin_bracket(Y, X, v, u, r) @ F), point=[u, v])


def jacobi_expression(X, Y, Z, u, v, w, r: BraidedRMatrix) -> TensorOp:
    """Reduced nested bracket with XX = X_{ov1} + Y_{ov2} + Z_{ov3}:
    [XX, r12] r23 + [XX, r13] r23 - r23 [XX, r12] - r23 [XX, r13]."""
    ctx = PositionContext(r.F, 3)
    XX = embed_ov_single(X, 1, ctx) + embed_ov_single(Y, 2, ctx) + embed_ov_single(Z, 3, ctx)
    r12 = embed_ov_pair(r(u, v), 1, 2, ctx)
    r13 = embed_ov_pair(r(u, w), 1, 3, ctx)
    r23 = embed_ov_pair(r(v, w), 2, 3, ctx)
    a = commutator(XX, r12) + commutator(XX, r13)
    return a @ r23 - r23 @ a


def jacobi_check(X, Y, Z, u, v, w, r: BraidedRMatrix) -> CheckReport:
    """Sum of the reduced expression over the three cyclic images: the images
    permute (X,u), (Y,v), (Z,w) and are conjugated by F12 F23 resp. F23 F12."""
    F = r.F
    F12, F23 = place(F, (1, 2), 3), place(F, (2, 3), 3)
    Pi, Pi2 = F12 @ F23, F23 @ F12
    total = (jacobi_expression(X, Y, Z, u, v, w, r)
             + Pi @ jacobi_expression(Y, Z, X, v, w, u, r) @ Pi2
             + Pi2 @ jacobi_expression(Z, X, Y, w, u, v, r) @ Pi)
    return matrix_check("sklyanin_jacobi", total, TensorOp.zero(F.N, 3), point=[u, v, w])
