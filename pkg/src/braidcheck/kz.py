"""Braided KZ connections (classical, flatness) and braided quantum KZ
difference systems (holonomy), evaluated exactly at rational points."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .braidings import Braiding, BraidingPair
from .currents import NormalizedR, PoleError, canonical_kind, normalized_R
from .report import CheckReport, combine, matrix_check
from .scalars import as_scalar
from .tensor import PositionContext, TensorOp, commutator, embed_ov_pair, embed_ov_single

__all__ = [
    "ValidationFailed",
    "check_flatness",
    "check_holonomy",
    "GMatrix",
    "validate_g",
    "KZConnection",
    "build_connection",
    "curvature_defect",
    "derivative_symmetry_defect",
    "QKZSystem",
    "build_qkz",
    "holonomy_defect",
]


class ValidationFailed(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


def _op(x):
    return x.op if isinstance(x, Braiding) else x


@dataclass(frozen=True, eq=False)
class GMatrix:
    g: TensorOp
    F: TensorOp
    validated: bool = True
    conditions: tuple = ()


def validate_g(g, F, R=None, r_const=None, strict=True) -> GMatrix:
    """F12 g1 F12 g1 = g1 F12 g1 F12; with R also [R_{ov12}, g_{ov1} g_{ov2}] = 0;
    with a constant r also [g_{ov1} + g_{ov2}, r] = 0 (needed by the
    trigonometric connection, where r enters next to g)."""
    f = _op(F)
    if f @ f != TensorOp.identity(f.N, 2):
        raise ValueError("KZ constructions need an involutive F")
    g1 = embed_ov_single(g, 1, PositionContext(f, 2))
    g2 = embed_ov_single(g, 2, PositionContext(f, 2))
    checks = [matrix_check("Fg1Fg1=g1Fg1F", f @ g1 @ f @ g1, g1 @ f @ g1 @ f)]
    if R is not None:
        r = _op(R)
        checks.append(matrix_check("[R_ov12,g1g2]=0", commutator(r, g1 @ g2), TensorOp.zero(f.N, 2)))
    if r_const is not None:
        checks.append(matrix_check("[g1+g2,r]=0", commutator(g1 + g2, r_const), TensorOp.zero(f.N, 2)))
    names = tuple(c.name for c in checks)
    for c in checks:
        if not c.passed:
            if strict:
                raise ValidationFailed(f"g fails {c.name}", c.witnesses[0])
            return GMatrix(g, f, False, names)
    return GMatrix(g, f, True, names)


# --- classical KZ -------------------------------------------------------------

def _distinct(point):
    if len(set(point)) < len(point):
        raise PoleError(f"coincident coordinates in {tuple(point)}")


@dataclass(eq=False)
class KZConnection:
    """M_i = g_{ov i} + kappa sum_{k != i} F_{ov ik}/(u_i - u_k)  (rational)
    N_i = g_{ov i} + kappa sum_{k != i} (F_{ov ik} u_i/(u_i - u_k) - r_{ov ik}/2)  (trig)."""

    kind: str
    n: int
    kappa: Fraction
    g: GMatrix
    r_const: TensorOp = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.ctx = PositionContext(self.g.F, self.n)

    @property
    def F(self):
        return self.g.F

    def F_ov(self, i, k):
        key = ("F", i, k)
        if key not in self._cache:
            self._cache[key] = embed_ov_pair(self.F, i, k, self.ctx)
        return self._cache[key]

    def r_ov(self, i, k):
        key = ("r", i, k)
        if key not in self._cache:
            self._cache[key] = embed_ov_pair(self.r_const, i, k, self.ctx)
        return self._cache[key]

    def g_ov(self, i):
        key = ("g", i)
        if key not in self._cache:
            self._cache[key] = embed_ov_single(self.g.g, i, self.ctx)
        return self._cache[key]

    def coefficient(self, i, k, u):
        """Scalar in front of F_{ov ik} in the i-th matrix."""
        ui, uk = u[i - 1], u[k - 1]
        return Fraction(1) / (ui - uk) if self.kind == "rational" else ui / (ui - uk)

    def d_coefficient(self, j, k, i, u):
        """(u_i d/du_i or d/du_i) of the F_{ov jk} coefficient in the j-th matrix;
        nonzero only for k == i."""
        if k != i:
            return Fraction(0)
        uj, ui = u[j - 1], u[i - 1]
        if self.kind == "rational":
            return Fraction(1) / (uj - ui) ** 2
        return ui * uj / (uj - ui) ** 2

    def matrix(self, i, u) -> TensorOp:
        u = tuple(as_scalar(x) for x in u)
        _distinct(u)
        out = self.g_ov(i)
        for k in range(1, self.n + 1):
            if k == i:
                continue
            term = self.F_ov(i, k).scale(self.coefficient(i, k, u))
            if self.kind == "trigonometric":
                term = term - self.r_ov(i, k).scale(Fraction(1, 2))
            out = out + term.scale(self.kappa)
        return out

    def derivative(self, j, i, u) -> TensorOp:
        """d_i M_j (rational) or u_i d_i N_j (trigonometric), closed form."""
        u = tuple(as_scalar(x) for x in u)
        out = TensorOp.zero(self.F.N, self.n)
        for k in range(1, self.n + 1):
            if k == j:
                continue
            c = self.d_coefficient(j, k, i, u)
            if c:
                out = out + self.F_ov(j, k).scale(c * self.kappa)
        return out


def build_connection(kind, n, kappa, g: GMatrix, r_const=None) -> KZConnection:
    kind = canonical_kind(kind)
    if n < 2:
        raise ValueError("KZ connections need n >= 2")
    if kind == "trigonometric" and r_const is None:
        raise ValueError("trigonometric connection needs the constant r")
    return KZConnection(kind, n, as_scalar(kappa), g, r_const)


def curvature_defect(conn: KZConnection, i, j, point) -> TensorOp:
    """d_i M_j - d_j M_i - [M_i, M_j] (u_i d_i for the trigonometric family)."""
    if i == j:
        raise ValueError("curvature needs i != j")
    Mi, Mj = conn.matrix(i, point), conn.matrix(j, point)
    return conn.derivative(j, i, point) - conn.derivative(i, j, point) - commutator(Mi, Mj)


def derivative_symmetry_defect(conn: KZConnection, i, j, point) -> TensorOp:
    """d_i(F_{ov ji} c_ji) - d_j(F_{ov ij} c_ij) for the scalar coefficients c."""
    u = tuple(as_scalar(x) for x in point)
    return (conn.F_ov(j, i).scale(conn.d_coefficient(j, i, i, u))
            - conn.F_ov(i, j).scale(conn.d_coefficient(i, j, j, u)))


def check_flatness(conn: KZConnection, points) -> CheckReport:
    Z = TensorOp.zero(conn.F.N, conn.n)
    subs = []
    for pt in points:
        for i in range(1, conn.n + 1):
            for j in range(i + 1, conn.n + 1):
                subs.append(matrix_check(f"curvature[{i},{j}]", curvature_defect(conn, i, j, pt), Z, point=list(pt)))
    rep = combine(f"kz_flatness[{conn.kind},n={conn.n}]", subs, points=len(points))
    if rep.passed:
        rep.witnesses = []
    return rep


# --- quantum KZ -----------------------------------------------------------------

@dataclass(eq=False)
class QKZSystem:
    """M_i(u) = kappa RR_{ov i,i-1}(s(u_i), u_{i-1}) ... RR_{ov i,1}(s(u_i), u_1) g_{ov i}
                RR_{ov i,n}(u_i, u_n) ... RR_{ov i,i+1}(u_i, u_{i+1}),
    with s(x) = x + p (rational) or p x (trigonometric)."""

    pair: BraidingPair
    kind: str
    n: int
    g: GMatrix
    p: Fraction
    kappa: Fraction
    RR: NormalizedR

    def __post_init__(self):
        self.ctx = PositionContext(self.pair.F.op, self.n)
        self._g = {i: embed_ov_single(self.g.g, i, self.ctx) for i in range(1, self.n + 1)}

    def shift(self, x):
        return x + self.p if self.kind == "rational" else x * self.p

    def shifted(self, u, i):
        u = list(u)
        u[i - 1] = self.shift(u[i - 1])
        return tuple(u)

    def RR_ov(self, i, k, a, b):
        return embed_ov_pair(self.RR(a, b), i, k, self.ctx)

    def matrix(self, i, u) -> TensorOp:
        u = tuple(as_scalar(x) for x in u)
        out = TensorOp.identity(self.pair.N, self.n)
        si = self.shift(u[i - 1])
        for k in range(i - 1, 0, -1):
            out = out @ self.RR_ov(i, k, si, u[k - 1])
        out = out @ self._g[i]
        for k in range(self.n, i, -1):
            out = out @ self.RR_ov(i, k, u[i - 1], u[k - 1])
        return out.scale(self.kappa)

    def admissible(self, u):
        u = tuple(as_scalar(x) for x in u)
        pts = [u] + [self.shifted(u, i) for i in range(1, self.n + 1)]
        try:
            for pt in pts:
                for i in range(1, self.n + 1):
                    self.matrix(i, pt)
        except ZeroDivisionError:
            return False
        return True


def build_qkz(pair: BraidingPair, kind, n, g: GMatrix, p, kappa=1) -> QKZSystem:
    kind = canonical_kind(kind)
    p, kappa = as_scalar(p), as_scalar(kappa)
    if not p:
        raise ValueError("shift p must be nonzero")
    if not kappa:
        raise ValueError("kappa must be nonzero")
    RR = normalized_R(pair, kind)
    return QKZSystem(pair, kind, n, g, p, kappa, RR)


def holonomy_defect(sys: QKZSystem, i, j, point) -> TensorOp:
    """M_j(s_i u) M_i(u) - M_i(s_j u) M_j(u)."""
    if i == j:
        raise ValueError("holonomy needs i != j")
    u = tuple(as_scalar(x) for x in point)
    return (sys.matrix(j, sys.shifted(u, i)) @ sys.matrix(i, u)
            - sys.matrix(i, sys.shifted(u, j)) @ sys.matrix(j, u))


def check_holonomy(sys: QKZSystem, points) -> CheckReport:
    Z = TensorOp.zero(sys.pair.N, sys.n)
    subs = []
    for pt in points:
        for i in range(1, sys.n + 1):
            for j in range(i + 1, sys.n + 1):
                subs.append(matrix_check(f"holonomy[{i},{j}]", holonomy_defect(sys, i, j, pt), Z, point=list(pt)))
    rep = combine(f"qkz_holonomy[{sys.kind},n={sys.n}]", subs, points=len(points))
    if rep.passed:
        rep.witnesses = []
    return rep
