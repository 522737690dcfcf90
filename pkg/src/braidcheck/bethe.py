"""Skew-symmetrizers, quantum elementary symmetric polynomials and power sums,
Newton identities and certified Bethe commutativity in generalized Yangians.

Series in u^-1 are lists ``s`` with ``s[m]`` the NCPoly coefficient of u^-m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb

from .braidings import Braiding, BraidingPair, classify_symmetry, make_pair
from .freealg import (
    Gen, NCPoly, RelationSet, certificate_to_json, defining_relations, generator_tensor,
    ideal_membership, nc_multiply, replay_certificate,
)
from .report import CheckReport, FAIL, INCONCLUSIVE, PASS, combine
from .scalars import as_scalar, is_zero
from .tensor import PositionContext, TensorOp, place

__all__ = [
    "Symmetrizer",
    "BetheElement",
    "q_integer",
    "skew_symmetrizer",
    "elementary_symmetric",
    "power_sum",
    "power_sum_reduced",
    "newton_defect",
    "bethe_commutator_coefficients",
    "bethe_commutator_certify",
    "newton_certify",
    "EvaluationOracle",
]


def q_integer(k, q):
    """k_q = q^{k-1} + q^{k-3} + ... + q^{1-k}; equals k at q = 1."""
    q = as_scalar(q)
    if q == 1:
        return Fraction(k)
    qi = Fraction(1) / q
    total = Fraction(0)
    term = q ** (k - 1) if k >= 1 else Fraction(1)
    for _ in range(k):
        total = total + term
        term = term * qi * qi
    return total


def _sym_q(R: Braiding, q=None):
    if q is not None:
        return as_scalar(q)
    if R.kind == "involutive":
        return Fraction(1)
    if R.q is not None:
        return R.q
    sym = classify_symmetry(R)
    if sym.kind == "involutive":
        return Fraction(1)
    if sym.kind == "hecke":
        return sym.q
    raise ValueError(f"{R.name} is neither involutive nor Hecke")


@dataclass(frozen=True, eq=False)
class Symmetrizer:
    k: int
    op: TensorOp
    base: Braiding
    q: object

    def is_idempotent(self):
        return self.op @ self.op == self.op

    def is_zero(self):
        return self.op.is_zero()


def skew_symmetrizer(R: Braiding, k, q=None, verify=True) -> Symmetrizer:
    """A^(1) = I, A^(j+1) = j_q/(j+1)_q A^(j) (q^j/j_q I - R_j) A^(j)."""
    if k < 1:
        raise ValueError("symmetrizer order must be >= 1")
    q = _sym_q(R, q)
    N = R.N
    A = TensorOp.identity(N, 1)
    for j in range(1, k):
        jq, j1q = q_integer(j, q), q_integer(j + 1, q)
        if is_zero(jq) or is_zero(j1q):
            raise ValueError(f"q-integer ({j if is_zero(jq) else j + 1})_q vanishes at q = {q}")
        At = place(A, tuple(range(1, j + 1)), j + 1)
        Rj = place(R.op, (j, j + 1), j + 1)
        mid = TensorOp.identity(N, j + 1).scale(q ** j / jq) - Rj
        A = (At @ mid @ At).scale(jq / j1q)
    S = Symmetrizer(k, A, R, q)
    if verify and not S.is_idempotent():
        raise ArithmeticError(f"A^({k}) is not idempotent")
    return S


# --- series -----------------------------------------------------------------

def shift_weights(kind, s, m, K, q=None):
    """Coefficients of u^-L (L <= K) in the expansion of (sigma^s u)^-m.

    trigonometric: sigma^s u = q^{-2s} u, giving q^{2sm} u^-m.
    rational: sigma^s u = u - s, giving sum_r C(m+r-1, r) s^r u^{-m-r}.
    """
    if m > K:
        return {}
    if kind == "trigonometric":
        return {m: as_scalar(q) ** (2 * s * m) if s else Fraction(1)}
    if m == 0 or s == 0:
        return {m: Fraction(1)}
    return {m + r: Fraction(comb(m + r - 1, r) * s ** r) for r in range(K - m + 1)}


def series_shift(series, kind, s, q=None):
    K = len(series) - 1
    out = [NCPoly() for _ in range(K + 1)]
    for m, c in enumerate(series):
        if not c:
            continue
        for L, w in shift_weights(kind, s, m, K, q).items():
            out[L] = out[L] + c.scale(w)
    return out


def series_mul(a, b):
    K = min(len(a), len(b)) - 1
    out = [NCPoly() for _ in range(K + 1)]
    for i in range(K + 1):
        if not a[i]:
            continue
        for j in range(K + 1 - i):
            if b[j]:
                out[i + j] = out[i + j] + nc_multiply(a[i], b[j])
    return out


def series_one(K):
    return [NCPoly.one()] + [NCPoly() for _ in range(K)]


def _traced_series(coeff_tensors, shifts, kind, K, q):
    """sum over alpha of c_alpha * t_alpha1(sigma^{s1} u) ... t_alphak(sigma^{sk} u)."""
    k = len(shifts)
    out = [dict() for _ in range(K + 1)]
    weights = [[shift_weights(kind, s, m, K, q) for m in range(K + 1)] for s in shifts]
    for ms in product(range(K + 1), repeat=k):
        if sum(ms) > K:
            continue
        conv = {0: Fraction(1)}
        for t, m in enumerate(ms):
            new = {}
            for L1, w1 in conv.items():
                for L2, w2 in weights[t][m].items():
                    if L1 + L2 <= K:
                        new[L1 + L2] = new.get(L1 + L2, 0) + w1 * w2
            conv = new
        for alpha, c in coeff_tensors.items():
            w = tuple(Gen(a, b, m) for (a, b), m in zip(alpha, ms))
            for L, x in conv.items():
                v = c * x
                if v:
                    d = out[L]
                    s = d[w] + v if w in d else v
                    if s:
                        d[w] = s
                    else:
                        d.pop(w, None)
    return [NCPoly._raw(d) for d in out]


@dataclass
class BetheElement:
    family: str
    k: int
    kind: str
    coeffs: list
    q: object = None

    @property
    def K(self):
        return len(self.coeffs) - 1

    def __getitem__(self, m):
        if m > self.K:
            raise IndexError(f"coefficient u^-{m} beyond truncation order K={self.K}")
        return self.coeffs[m]

    def is_zero(self):
        return not any(self.coeffs)


def _kind(kind):
    from .currents import canonical_kind
    return canonical_kind(kind)


def _pair_q(pair: BraidingPair, kind):
    if kind == "rational":
        return Fraction(1)
    q = _sym_q(pair.R)
    if not isinstance(q, Fraction) and not isinstance(q, int):
        raise ValueError("evaluate q (Braiding.at) before building Bethe elements")
    return q


def _trace_tensor(pair, k, left=None, right=None):
    if pair.skew is None:
        raise ValueError(f"F = {pair.F.name} is not skew-invertible; F-trace unavailable")
    ctx = PositionContext(pair.F.op, k)
    C = pair.skew.c
    Cfull = C
    for _ in range(k - 1):
        Cfull = Cfull.kron(C)
    lhs = Cfull if left is None else Cfull @ left
    tensors = generator_tensor(ctx, tuple(range(1, k + 1)), left=lhs, right=right)
    out = {}
    for alpha, M in tensors.items():
        t = M.trace()
        if t:
            out[alpha] = t
    return out


def elementary_symmetric(kind, k, pair: BraidingPair, K) -> BetheElement:
    """e_k(u) = Tr_F(1..k) A^(k) T_ov1(u) T_ov2(sigma u) ... T_ovk(sigma^{k-1} u)."""
    kind = _kind(kind)
    q = _pair_q(pair, kind)
    if k == 0:
        return BetheElement("e", 0, kind, series_one(K), q)
    A = skew_symmetrizer(pair.R, k, q=q if kind == "trigonometric" else None)
    if A.is_zero():
        return BetheElement("e", k, kind, [NCPoly() for _ in range(K + 1)], q)
    c = _trace_tensor(pair, k, left=A.op)
    return BetheElement("e", k, kind, _traced_series(c, list(range(k)), kind, K, q), q)


def power_sum(kind, k, pair: BraidingPair, K) -> BetheElement:
    """p_k(u) = Tr_F(1..k) T_ov1(sigma^{k-1} u) ... T_ovk(u) R_{k-1} ... R_1."""
    kind = _kind(kind)
    q = _pair_q(pair, kind)
    if k == 0:
        return BetheElement("p", 0, kind, series_one(K), q)
    right = TensorOp.identity(pair.N, k)
    for j in range(k - 1, 0, -1):
        right = right @ place(pair.R.op, (j, j + 1), k)
    c = _trace_tensor(pair, k, right=right)
    return BetheElement("p", k, kind, _traced_series(c, [k - t for t in range(1, k + 1)], kind, K, q), q)


def power_sum_reduced(kind, k, pair: BraidingPair, K) -> BetheElement:
    """Tr_F T(sigma^{k-1} u) T(sigma^{k-2} u) ... T(u), the RE-type shortcut."""
    kind = _kind(kind)
    q = _pair_q(pair, kind)
    if k == 0:
        return BetheElement("p", 0, kind, series_one(K), q)
    if pair.skew is None:
        raise ValueError("F-trace unavailable")
    N = pair.N
    C = pair.skew.c
    coeffs = {}
    for alpha in product([(a, b) for a in range(N) for b in range(N)], repeat=k):
        # Tr(C E_{a1 b1} ... E_{ak bk}) = C[bk, a1] when the chain closes
        if any(alpha[t][1] != alpha[t + 1][0] for t in range(k - 1)):
            continue
        v = C.entry(alpha[-1][1], alpha[0][0])
        if v:
            coeffs[alpha] = v
    return BetheElement("p~", k, kind, _traced_series(coeffs, [k - t for t in range(1, k + 1)], kind, K, q), q)


def newton_defect(kind, k, pair: BraidingPair, K, elements=None):
    """Coefficients (m <= K) of
    k_q e_k(u) + sum_{j=1..k} (-1)^j q^{k-j} p_j(sigma^{k-j} u) e_{k-j}(u)
    (q = 1 and additive shifts in the rational case)."""
    kind = _kind(kind)
    q = _pair_q(pair, kind)
    cache = elements if elements is not None else {}

    def get(fam, j):
        key = (fam, j)
        if key not in cache:
            fn = elementary_symmetric if fam == "e" else power_sum
            cache[key] = fn(kind, j, pair, K)
        return cache[key].coeffs

    total = [c.scale(q_integer(k, q)) for c in get("e", k)]
    for j in range(1, k + 1):
        w = (-1) ** j * (q ** (k - j) if kind == "trigonometric" else 1)
        term = series_mul(series_shift(get("p", j), kind, k - j, q), get("e", k - j))
        total = [a + b.scale(w) for a, b in zip(total, term)]
    return total


# --- commutativity ---------------------------------------------------------

def bethe_commutator_coefficients(ek: BetheElement, ep: BetheElement, bound):
    """{(a, b): coefficient of u^-a v^-b in e_k(u) e_p(v) - e_p(v) e_k(u)}."""
    A, B = bound
    if A > ek.K or B > ep.K:
        raise ValueError(f"bound {bound} exceeds truncation orders ({ek.K}, {ep.K})")
    return {(a, b): nc_multiply(ek[a], ep[b]) - nc_multiply(ep[b], ek[a])
            for a in range(A + 1) for b in range(B + 1)}


def _membership_report(name, poly, rels: RelationSet, level_bound=None, **details):
    res = ideal_membership(poly, rels, level_bound=level_bound)
    if res.verified:
        if not replay_certificate(poly, rels, res.certificate):
            return CheckReport(name, FAIL, witnesses=[{"reason": "certificate replay failed"}], details=details)
        return CheckReport(name, PASS, certificates=[certificate_to_json(res.certificate)] if res.certificate else [],
                           details={**details, "columns": res.columns, "terms": len(res.certificate)})
    return CheckReport(name, INCONCLUSIVE, witnesses=[{"reason": res.reason, "terms": len(poly.terms)}],
                       details={**details, "columns": res.columns})


def _pair_at(R: Braiding, F, q0):
    Rq = R.at(q0) if q0 is not None and R.q is not None and not isinstance(R.q, (int, Fraction)) else R
    if F == "same" or F is R:
        Fq = Rq
    else:
        Fq = F.at(q0) if q0 is not None and F.q is not None and not isinstance(F.q, (int, Fraction)) else F
    return make_pair(Rq, Fq)


def bethe_commutator_certify(k, p, kind, R: Braiding, F, K, bound, q_values=(None,),
                             T0_identity=False, level_bound=None, relations_K=None) -> CheckReport:
    """Certify every coefficient of [e_k(u), e_p(v)] up to ``bound`` lies in the
    ideal of the truncated relations, separately at each q in ``q_values``.

    The Bethe elements are truncated at K.  Relations are emitted up to
    ``relations_K`` (default K + 1): cancelling level a+b terms of a cubic
    commutator typically needs relations whose letters reach level K + 1.
    Those are relations of the full algebra, so certificates stay valid.
    """
    kind = _kind(kind)
    relations_K = K + 1 if relations_K is None else relations_K
    subs = []
    for q0 in q_values:
        pair = _pair_at(R, F, q0)
        rels = defining_relations(pair, kind, K=relations_K, T0_identity=T0_identity)
        ek = elementary_symmetric(kind, k, pair, K)
        ep = ek if p == k else elementary_symmetric(kind, p, pair, K)
        for (a, b), poly in sorted(bethe_commutator_coefficients(ek, ep, bound).items()):
            if T0_identity:
                poly = poly.substitute_T0_identity()
            tag = f"[e{k},e{p}]({a},{b})" + (f"@q={q0}" if q0 is not None else "")
            subs.append(_membership_report(tag, poly, rels, level_bound, bidegree=[a, b], q=q0))
    return combine(f"bethe[{kind},{R.name},k={k},p={p},K={K}]", subs,
                   relations_K=relations_K, T0_identity=T0_identity,
                   inconclusive=[s.name for s in subs if s.status == INCONCLUSIVE])


def newton_certify(k, kind, R: Braiding, F, K, q_values=(None,), level_bound=None,
                   relations_K=None) -> CheckReport:
    """Certify the Newton defect coefficients (m <= K) as ideal members."""
    kind = _kind(kind)
    relations_K = K + 1 if relations_K is None else relations_K
    subs = []
    for q0 in q_values:
        pair = _pair_at(R, F, q0)
        rels = defining_relations(pair, kind, K=relations_K)
        for m, poly in enumerate(newton_defect(kind, k, pair, K)):
            tag = f"newton[k={k}](u^-{m})" + (f"@q={q0}" if q0 is not None else "")
            subs.append(_membership_report(tag, poly, rels, level_bound, order=m, q=q0))
    return combine(f"newton[{kind},{R.name},k={k},K={K}]", subs, relations_K=relations_K)


# --- Yangian evaluation oracle -----------------------------------------------

class EvaluationOracle:
    """Operator-valued solution of the rational R = F = P relations.

    T(u) = G (I + E^(1)/u)(I + E^(2)/(u - c)) acting on W = C^N (x) C^N, where
    E^(s)_{ab} = -e_{ba} acting on the s-th factor of W and G is a constant
    numeric matrix.  Each T[m] is the exact u^-m coefficient.
    """

    def __init__(self, N, G=None, shift=Fraction(3, 7)):
        self.N = N
        self.G = G if G is not None else TensorOp.identity(N, 1)
        self.c = Fraction(shift)
        self._images = {}
        I = TensorOp.identity(N, 2)
        E1, E2 = {}, {}
        for a in range(N):
            for b in range(N):
                e = TensorOp.from_entries(N, 1, {(b, a): -1})
                E1[a, b] = place(e, (1,), 2)
                E2[a, b] = place(e, (2,), 2)
        Z = TensorOp.zero(N, 2)
        E12 = {(a, b): sum((E1[a, x] @ E2[x, b] for x in range(N)), Z) for a in range(N) for b in range(N)}
        self._parts = (I, E1, E2, E12)

    def generator(self, g: Gen) -> TensorOp:
        if g in self._images:
            return self._images[g]
        I, E1, E2, E12 = self._parts
        N, c, m = self.N, self.c, g.m
        Z = TensorOp.zero(N, 2)

        def X(a, b):
            if m == 0:
                return I if a == b else Z
            out = E2[a, b].scale(c ** (m - 1))
            if m == 1:
                out = out + E1[a, b]
            if m >= 2:
                out = out + E12[a, b].scale(c ** (m - 2))
            return out

        img = Z
        for x in range(N):
            gv = self.G.entry(g.i, x)
            if gv:
                img = img + X(x, g.j).scale(gv)
        self._images[g] = img
        return img

    def evaluate(self, p: NCPoly) -> TensorOp:
        dim_op = TensorOp.zero(self.N, 2)
        for w, c in p.terms.items():
            M = TensorOp.identity(self.N, 2)
            for g in w:
                if not 0 <= g.i < self.N or not 0 <= g.j < self.N:
                    raise ValueError(f"generator {g} outside gl({self.N})")
                M = M @ self.generator(g)
            dim_op = dim_op + M.scale(c)
        return dim_op
