"""Concrete braidings and verifiers for the structure they are assumed to have.

Catalog entries are never trusted: every property (braid relation, involutive
or Hecke condition, compatibility, skew-invertibility) is re-verified by the
checks below.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, combinations

from .scalars import Q, as_scalar, depends_on_q, format_scalar
from .tensor import (
    PositionContext, ShapeError, SingularError, TensorOp, embed_ov_pair, partial_trace, place,
)
from .report import CheckReport, combine, matrix_check, FAIL
from .linalg import solve_columns

__all__ = [
    "Braiding",
    "BraidingPair",
    "SkewInverse",
    "NotSkewInvertible",
    "catalog",
    "catalog_names",
    "parse_braiding_spec",
    "check_braid",
    "classify_symmetry",
    "check_compatible",
    "check_braided_ybe",
    "make_pair",
    "skew_inverse",
    "f_trace",
]


class NotSkewInvertible(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class Braiding:
    """An operator on V (x) V together with its declared symmetry type.

    ``kind`` is one of "involutive", "hecke", "generic".  For Hecke braidings
    ``q`` is the deformation parameter: the symbolic ``Q`` or an exact rational.
    """

    op: TensorOp
    kind: str = "generic"
    name: str = "custom"
    q: object = None

    @property
    def N(self):
        return self.op.N

    def at(self, q0):
        """Specialise q to the rational q0."""
        q0 = Fraction(q0)
        q = self.q
        if q is not None and depends_on_q(q):
            q = q.evaluate(q0)
        kind = self.kind
        if kind == "hecke" and q in (1, -1):
            kind = "involutive" if q == 1 else "generic"
        return Braiding(self.op.evaluate(q0), kind, f"{self.name}@q={format_scalar(q0)}", q)

    def __repr__(self):
        return f"Braiding({self.name}, kind={self.kind})"


# --- catalog ----------------------------------------------------------------

def _flip(N):
    return TensorOp.flip(N)


def _superflip(m, n):
    N = m + n
    rows = [dict() for _ in range(N * N)]
    for i in range(N):
        for j in range(N):
            sign = -1 if (i >= m and j >= m) else 1
            rows[j * N + i][i * N + j] = Fraction(sign)
    return TensorOp(N, 2, tuple(rows))


def _dj_hecke(N, q=Q):
    # q on e_i(x)e_i, flips off the diagonal, (q - q^-1) on e_i(x)e_j for i < j
    rows = [dict() for _ in range(N * N)]
    w = q - Fraction(1) / q
    for i in range(N):
        rows[i * N + i][i * N + i] = q
        for j in range(N):
            if i != j:
                rows[i * N + j][j * N + i] = Fraction(1)
            if i < j:
                rows[i * N + j][i * N + j] = w
    return TensorOp(N, 2, tuple(rows))


def _uq_sl11(q=Q):
    qi = Fraction(1) / q
    return TensorOp.from_dense(2, 2, [
        [q, 0, 0, 0],
        [0, q - qi, 1, 0],
        [0, 1, 0, 0],
        [0, 0, 0, -qi],
    ])


_CATALOG = {
    "flip": "flip(N): the flip P on C^N (x) C^N",
    "superflip": "superflip(m,n): the super-flip P_(m|n)",
    "dj_hecke": "dj_hecke(N): Hecke symmetry of U_q(sl(N)), eigenvalues q and -q^-1",
    "uq_sl11": "uq_sl11: Hecke symmetry of U_q(sl(1|1)) (4x4)",
}


def catalog_names():
    return dict(_CATALOG)


def catalog(name: str, *params, q=None) -> Braiding:
    """Catalog braiding; ``q`` (rational) specialises Hecke entries."""
    try:
        params = tuple(int(p) for p in params)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad parameters for {name}: {params}") from exc
    if name == "flip":
        (N,) = params or (2,)
        if N < 1:
            raise ValueError("flip needs N >= 1")
        b = Braiding(_flip(N), "involutive", f"flip:{N}")
    elif name == "superflip":
        if len(params) != 2 or min(params) < 0 or sum(params) < 1:
            raise ValueError("superflip needs two nonnegative dimensions m,n with m+n >= 1")
        m, n = params
        b = Braiding(_superflip(m, n), "involutive", f"superflip:{m},{n}")
    elif name == "dj_hecke":
        (N,) = params or (2,)
        if N < 1:
            raise ValueError("dj_hecke needs N >= 1")
        b = Braiding(_dj_hecke(N), "hecke", f"dj_hecke:{N}", Q)
    elif name == "uq_sl11":
        if params:
            raise ValueError("uq_sl11 takes no parameters")
        b = Braiding(_uq_sl11(), "hecke", "uq_sl11", Q)
    else:
        raise KeyError(f"unknown braiding {name!r}; known: {sorted(_CATALOG)}")
    return b.at(q) if q is not None and b.kind == "hecke" else b


def parse_braiding_spec(spec: str, q=None) -> Braiding:
    """``"dj_hecke:2"``, ``"superflip:1,1"``, ``"uq_sl11"`` or a matrix file path."""
    if spec.endswith(".json"):
        from .tensor import load_matrix
        with open(spec, encoding="utf-8") as fh:
            op = load_matrix(fh.read())
        sym = classify_symmetry(op)
        b = Braiding(op, sym.kind, spec, sym.q)
        return b.at(q) if q is not None and b.kind == "hecke" else b
    name, _, rest = spec.partition(":")
    params = [p for p in rest.split(",") if p] if rest else []
    return catalog(name, *params, q=q)


# --- structural checks ------------------------------------------------------

def _op(B):
    return B.op if isinstance(B, Braiding) else B


def check_braid(B) -> CheckReport:
    """(B (x) I)(I (x) B)(B (x) I) == (I (x) B)(B (x) I)(I (x) B) on V^{(x)3}."""
    op = _op(B)
    if op.n != 2:
        raise ShapeError("braid relation needs an operator on V (x) V")
    b12, b23 = place(op, (1, 2), 3), place(op, (2, 3), 3)
    return matrix_check("braid_relation", b12 @ b23 @ b12, b23 @ b12 @ b23)


@dataclass(frozen=True)
class Symmetry:
    kind: str           # "involutive" | "hecke" | "neither"
    q: object = None

    def __str__(self):
        return f"hecke({format_scalar(self.q)})" if self.kind == "hecke" else self.kind


def classify_symmetry(B, q=None) -> Symmetry:
    """Involutive if B^2 = I, else Hecke if (B - qI)(B + q^-1 I) = 0.

    With symbolic entries q is the formal variable; with rational entries the
    Hecke test needs a rational q (taken from ``B.q`` when B is a Braiding).
    """
    op = _op(B)
    I = TensorOp.identity(op.N, 2)
    sq = op @ op
    if sq == I:
        return Symmetry("involutive")
    if q is None and isinstance(B, Braiding) and B.q is not None:
        q = B.q
    symbolic = any(depends_on_q(v) for r in op.rows for v in r.values())
    if q is None:
        if not symbolic:
            return Symmetry("neither")
        q = Q
    q = as_scalar(q)
    if q in (0, 1, -1):
        return Symmetry("neither")
    # (B - qI)(B + q^-1 I) = B^2 + (q^-1 - q) B - I
    if sq + op.scale(Fraction(1) / q - q) - I == TensorOp.zero(op.N, 2):
        return Symmetry("hecke", q)
    return Symmetry("neither")


@dataclass(frozen=True, eq=False)
class BraidingPair:
    R: Braiding
    F: Braiding
    compatible: bool
    F_skew_invertible: bool
    skew: object = None

    @property
    def N(self):
        return self.R.N

    def ctx(self, n):
        return PositionContext(self.F.op, n)

    @property
    def F_involutive(self):
        return self.F.kind == "involutive"


def check_compatible(R, F) -> CheckReport:
    """Both compatibility relations on V^{(x)3} plus the consequence R_{ov 23} = R_23.

    The relations with R and F exchanged are recorded as diagnostics only.
    """
    r, f = _op(R), _op(F)
    if r.n != 2 or f.n != 2:
        raise ShapeError("compatibility needs two operators on V (x) V")
    if r.N != f.N:
        raise ShapeError(f"dimension mismatch: N={r.N} vs N={f.N}")
    R12, R23 = place(r, (1, 2), 3), place(r, (2, 3), 3)
    F12, F23 = place(f, (1, 2), 3), place(f, (2, 3), 3)
    first = matrix_check("compat_R12F23F12", R12 @ F23 @ F12, F23 @ F12 @ R23)
    second = matrix_check("compat_R23F12F23", R23 @ F12 @ F23, F12 @ F23 @ R12)
    try:
        ctx = PositionContext(f, 3)
        ov = matrix_check("R_ov23_equals_R23", embed_ov_pair(r, 2, 3, ctx), R23)
    except SingularError:
        ov = CheckReport("R_ov23_equals_R23", FAIL, witnesses=[{"reason": "F singular"}])
    swapped = (F12 @ R23 @ R12 == R23 @ R12 @ F23) and (F23 @ R12 @ R23 == R12 @ R23 @ F12)
    rep = combine("compatible", [first, second, ov])
    rep.details["swapped_relations_hold"] = swapped
    return rep


def check_braided_ybe(R, F, n=3) -> CheckReport:
    """RR = R F satisfies RR_{ov ij} RR_{ov ik} RR_{ov jk} = RR_{ov jk} RR_{ov ik} RR_{ov ij}
    for i < j < k <= n, and for all pairwise distinct triples when F^2 = I."""
    r, f = _op(R), _op(F)
    RR = r @ f
    ctx = PositionContext(f, n)
    triples = list(permutations(range(1, n + 1), 3)) if ctx.involutive else list(combinations(range(1, n + 1), 3))
    subs = []
    for i, j, k in triples:
        a, b, c = (embed_ov_pair(RR, *p, ctx) for p in ((i, j), (i, k), (j, k)))
        subs.append(matrix_check(f"braided_ybe[{i}{j}{k}]", a @ b @ c, c @ b @ a, triple=[i, j, k]))
    return combine(f"braided_ybe_n{n}", subs, triples=len(triples))


def make_pair(R: Braiding, F: Braiding, require=True) -> BraidingPair:
    """Verify compatibility (and try skew-invertibility of F) and bundle the pair."""
    comp = check_compatible(R, F)
    if require and not comp.passed:
        raise ValueError(f"braidings {R.name} and {F.name} are not compatible: {comp.witnesses[:1]}")
    try:
        sk = skew_inverse(F)
        ok = True
    except NotSkewInvertible:
        sk, ok = None, False
    return BraidingPair(R, F, comp.passed, ok, sk)


# --- skew-invertibility and the F-trace --------------------------------------

@dataclass(frozen=True, eq=False)
class SkewInverse:
    psi: TensorOp
    c: TensorOp
    report: CheckReport = field(default=None, repr=False)


def _skew_identities(f, psi):
    F12, F23 = place(f, (1, 2), 3), place(f, (2, 3), 3)
    # after tracing slot 2, P_13 acts on the remaining pair of slots
    P13 = TensorOp.flip(f.N)
    a = partial_trace(F12 @ place(psi, (2, 3), 3), [2])
    b = partial_trace(place(psi, (1, 2), 3) @ F23, [2])
    return a, b, P13


def skew_inverse(F) -> SkewInverse:
    """Solve Tr_(2) F_12 Psi_23 = Tr_(2) Psi_12 F_23 = P_13 for Psi exactly."""
    f = _op(F)
    if f.n != 2:
        raise ShapeError("skew inverse needs an operator on V (x) V")
    N = f.N
    d = N * N
    F12, F23 = place(f, (1, 2), 3), place(f, (2, 3), 3)
    P13 = TensorOp.flip(N)
    columns = []
    for r in range(d):
        for s in range(d):
            E = TensorOp.from_entries(N, 2, {(r, s): 1})
            a = partial_trace(F12 @ place(E, (2, 3), 3), [2])
            b = partial_trace(place(E, (1, 2), 3) @ F23, [2])
            col = {}
            for tag, m in (("a", a), ("b", b)):
                for i, row in enumerate(m.rows):
                    for j, v in row.items():
                        col[(tag, i, j)] = v
            columns.append(col)
    target = {}
    for tag in ("a", "b"):
        for i, row in enumerate(P13.rows):
            for j, v in row.items():
                target[(tag, i, j)] = v
    sol = solve_columns(columns, target)
    if sol is None:
        raise NotSkewInvertible("no Psi satisfies the skew-invertibility equations")
    psi = TensorOp.from_entries(N, 2, {divmod(k, d): v for k, v in sol.items()})
    a, b, P13 = _skew_identities(f, psi)
    rep = combine("skew_inverse", [
        matrix_check("TrF12Psi23", a, P13),
        matrix_check("TrPsi12F23", b, P13),
    ])
    if not rep.passed:
        raise NotSkewInvertible("solution failed re-verification")
    c = partial_trace(psi, [2])
    return SkewInverse(psi, c, rep)


def f_trace(X: TensorOp, k: int, skew: SkewInverse):
    """Tr_{F(1..k)} X = Tr_(1..k)(C_1 ... C_k X); a scalar when k == X.n."""
    if skew is None:
        raise ValueError("F-trace needs the skew inverse of F")
    if not 1 <= k <= X.n:
        raise ValueError(f"k must lie in 1..{X.n}")
    Y = X
    for s in range(1, k + 1):
        Y = place(skew.c, (s,), X.n) @ Y
    out = partial_trace(Y, range(1, k + 1))
    if out.n == 0:
        return out.entry(0, 0)
    return out
