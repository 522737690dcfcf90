"""Baxterization of symmetries into current R-matrices and related checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .braidings import Braiding, BraidingPair, classify_symmetry
from .report import CheckReport, combine, matrix_check
from .scalars import Q, as_scalar
from .tensor import PositionContext, TensorOp, embed_ov_pair, place

__all__ = [
    "PoleError",
    "CurrentRMatrix",
    "NormalizedR",
    "baxterize",
    "check_param_ybe",
    "normalized_R",
    "check_unitarity",
    "check_shift_invariance",
    "hqa_degeneration",
]

RATIONAL, TRIG = "rational", "trigonometric"
_KIND_ALIASES = {"rational": RATIONAL, "rat": RATIONAL, "trig": TRIG, "trigonometric": TRIG}


class PoleError(ZeroDivisionError):
    pass


def canonical_kind(kind):
    try:
        return _KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown kind {kind!r}; use rational or trigonometric") from None


@dataclass(frozen=True, eq=False)
class CurrentRMatrix:
    """R(u,v) = R - I/(u-v) (rational) or R - (q - q^-1) u I/(u-v) (trigonometric).

    ``sign=+1`` flips the sign of the spectral term; only useful as a
    negative control.
    """

    kind: str
    base: Braiding
    sign: int = -1

    @property
    def q(self):
        return self.base.q if self.base.q is not None else Q

    def scalar_part(self, u, v):
        u, v = as_scalar(u), as_scalar(v)
        if u == v:
            raise PoleError(f"current R-matrix has a pole at u = v = {u}")
        if self.kind == RATIONAL:
            return Fraction(1) / (u - v)
        q = self.q
        return (q - Fraction(1) / q) * u / (u - v)

    def __call__(self, u, v) -> TensorOp:
        R = self.base.op
        return R + TensorOp.identity(R.N, 2).scale(self.sign * self.scalar_part(u, v))


def baxterize(B: Braiding, kind) -> CurrentRMatrix:
    """Rational for involutive B, trigonometric for Hecke B; mismatches are refused."""
    kind = canonical_kind(kind)
    sym = classify_symmetry(B)
    want = "involutive" if kind == RATIONAL else "hecke"
    if sym.kind != want:
        raise ValueError(f"{kind} Baxterization needs an {want} symmetry; {B.name} is {sym}")
    if kind == TRIG and B.q is None:
        B = Braiding(B.op, "hecke", B.name, sym.q)
    return CurrentRMatrix(kind, B)


def check_param_ybe(Rc: CurrentRMatrix, points) -> CheckReport:
    """R12(u,v) R23(u,w) R12(v,w) = R23(v,w) R12(u,w) R23(u,v) at each point."""
    subs = []
    for (u, v, w) in points:
        if len({u, v, w}) < 3:
            raise PoleError(f"sample point {(u, v, w)} has coincident coordinates")

        def r12(a, b):
            return place(Rc(a, b), (1, 2), 3)

        def r23(a, b):
            return place(Rc(a, b), (2, 3), 3)

        lhs = r12(u, v) @ r23(u, w) @ r12(v, w)
        rhs = r23(v, w) @ r12(u, w) @ r23(u, v)
        subs.append(matrix_check("param_ybe", lhs, rhs, point=[u, v, w]))
    rep = combine(f"param_ybe[{Rc.base.name},{Rc.kind}]", subs, points=len(subs))
    if rep.passed:
        rep.witnesses = []
    return rep


@dataclass(frozen=True, eq=False)
class NormalizedR:
    """RR(u,v) = R(u,v) F f(u,v)^{-1}."""

    current: CurrentRMatrix
    F: TensorOp

    def f(self, u, v):
        u, v = as_scalar(u), as_scalar(v)
        if u == v:
            raise PoleError(f"pole at u = v = {u}")
        if self.current.kind == RATIONAL:
            return 1 - Fraction(1) / (u - v)
        q = self.current.q
        return q - (q - Fraction(1) / q) * u / (u - v)

    def __call__(self, u, v) -> TensorOp:
        fv = self.f(u, v)
        if not fv:
            raise PoleError(f"normalisation f(u,v) vanishes at {(u, v)}")
        return (self.current(u, v) @ self.F).scale(Fraction(1) / fv)

    def admissible(self, u, v):
        try:
            return u != v and bool(self.f(u, v))
        except ZeroDivisionError:
            return False


def normalized_R(pair: BraidingPair, kind) -> NormalizedR:
    kind = canonical_kind(kind)
    if not pair.compatible:
        raise ValueError("normalised R-matrix needs a compatible pair")
    if (pair.F.op @ pair.F.op) != TensorOp.identity(pair.N, 2):
        raise ValueError("normalised R-matrix needs an involutive F")
    return NormalizedR(baxterize(pair.R, kind), pair.F.op)


def check_unitarity(RR: NormalizedR, points) -> CheckReport:
    """RR_{ov12}(u,v) RR_{ov21}(v,u) = I, with RR_{ov21} = F RR F."""
    ctx = PositionContext(RR.F, 2)
    I = TensorOp.identity(RR.F.N, 2)
    subs = []
    for (u, v) in points:
        a = RR(u, v)
        b = embed_ov_pair(RR(v, u), 2, 1, ctx)
        subs.append(matrix_check("unitarity", a @ b, I, point=[u, v]))
    return combine("unitarity", subs, points=len(subs))


def check_shift_invariance(Rc: CurrentRMatrix, points, shifts) -> CheckReport:
    """(T (x) T) R(u,v) = R(u,v): additive shifts for rational, multiplicative
    for trigonometric currents."""
    subs = []
    for (u, v), s in zip(points, shifts):
        if Rc.kind == RATIONAL:
            uu, vv = u + s, v + s
        else:
            if not s:
                raise ValueError("multiplicative shift must be nonzero")
            uu, vv = u * s, v * s
        subs.append(matrix_check("shift_invariance", Rc(uu, vv), Rc(u, v), point=[u, v], shift=s))
    return combine(f"shift_invariance[{Rc.kind}]", subs)


def hqa_degeneration(B: Braiding, u_values=(1, 2, Fraction(-3, 7))) -> CheckReport:
    """R(u, q^-2 u) = R - qI = -(q + q^-1) A^(2), with A^(2) = (qI - R)/(q + q^-1).

    Checked for symbolic q at several values of u (the left side does not
    depend on u).  Also checks A^(2) + S^(2) = I for the matching symmetrizer.
    """
    sym = classify_symmetry(B)
    if sym.kind != "hecke":
        raise ValueError(f"HQA degeneration needs a Hecke symmetry with q != +-1; {B.name} is {sym}")
    q = sym.q
    Rc = baxterize(B, TRIG)
    R = B.op
    I = TensorOp.identity(R.N, 2)
    qi = Fraction(1) / q
    target = R - I.scale(q)
    A2 = (I.scale(q) - R).scale(Fraction(1) / (q + qi))
    S2 = (I.scale(qi) + R).scale(Fraction(1) / (q + qi))
    subs = []
    for u in u_values:
        u = as_scalar(u)
        subs.append(matrix_check("R(u,q^-2u)=R-qI", Rc(u, u * qi * qi), target, u=u))
    subs.append(matrix_check("R-qI=-(q+q^-1)A2", target, A2.scale(-(q + qi))))
    subs.append(matrix_check("A2+S2=I", A2 + S2, I))
    return combine(f"hqa_degeneration[{B.name}]", subs)
