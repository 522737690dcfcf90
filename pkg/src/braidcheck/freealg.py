"""Truncated free algebra on the generators t_i^j[m], the graded relations of a
generalized Yangian, and certificate-producing ideal membership.

Generators are stored 0-based (``Gen(i, j, m)``) and printed 1-based.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple

from .braidings import BraidingPair
from .linalg import SpanSolver
from .scalars import as_scalar, evaluate, format_scalar, parse_scalar
from .tensor import PositionContext, TensorOp, embed_ov_single

__all__ = [
    "Gen",
    "NCPoly",
    "nc_multiply",
    "commutator",
    "Relation",
    "RelationSet",
    "MembershipResult",
    "defining_relations",
    "cleared_rmatrix",
    "generator_tensor",
    "ideal_membership",
    "replay_certificate",
    "certificate_to_json",
    "certificate_from_json",
]


class Gen(NamedTuple):
    i: int
    j: int
    m: int

    def __str__(self):
        return f"t{self.i + 1}^{self.j + 1}[{self.m}]"


def word_level(w):
    return sum(g.m for g in w)


def word_str(w):
    return "*".join(str(g) for g in w) if w else "1"


class NCPoly:
    """Finite sum of words in the generators with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in terms.items():
                c = as_scalar(c)
                if c:
                    self.terms[tuple(w)] = c

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def one(cls, c=1):
        return cls({(): c})

    @classmethod
    def gen(cls, g: Gen, c=1):
        return cls({(g,): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not other:
            return not self.terms
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out[w] + c if w in out else c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NCPoly._raw(out)

    def __neg__(self):
        return NCPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return NCPoly()
        out = {}
        for w, v in self.terms.items():
            x = v * c
            if x:
                out[w] = x
        return NCPoly._raw(out)

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return nc_multiply(self, other)
        return self.scale(as_scalar(other))

    def __rmul__(self, c):
        return self.scale(as_scalar(c))

    @property
    def degree(self):
        return max((len(w) for w in self.terms), default=-1)

    @property
    def min_degree(self):
        return min((len(w) for w in self.terms), default=-1)

    @property
    def level(self):
        return max((word_level(w) for w in self.terms), default=0)

    def is_homogeneous(self):
        return len({len(w) for w in self.terms}) <= 1

    def generators(self):
        return {g for w in self.terms for g in w}

    def map_coeffs(self, fn):
        out = {}
        for w, c in self.terms.items():
            x = fn(c)
            if x:
                out[w] = x
        return NCPoly._raw(out)

    def evaluate_q(self, q0):
        return self.map_coeffs(lambda c: evaluate(c, q0))

    def substitute_T0_identity(self):
        """Impose T[0] = I: drop words with an off-diagonal level-0 letter and
        delete diagonal level-0 letters."""
        out = {}
        for w, c in self.terms.items():
            nw = []
            for g in w:
                if g.m == 0:
                    if g.i != g.j:
                        break
                    continue
                nw.append(g)
            else:
                nw = tuple(nw)
                s = out[nw] + c if nw in out else c
                if s:
                    out[nw] = s
                else:
                    out.pop(nw, None)
        return NCPoly._raw(out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), word_level(t[0]), t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            parts.append(f"({format_scalar(c)})*{word_str(w)}")
        return " + ".join(parts)

    __repr__ = lambda self: f"NCPoly({self})"

    def to_json(self):
        return [[[list(g) for g in w], format_scalar(c)] for w, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data):
        return cls({tuple(Gen(*g) for g in w): parse_scalar(c) for w, c in data})


def nc_multiply(p: NCPoly, r: NCPoly) -> NCPoly:
    """Free-algebra product (concatenation of words, bilinear)."""
    out = {}
    for w1, c1 in p.terms.items():
        for w2, c2 in r.terms.items():
            w = w1 + w2
            x = c1 * c2
            s = out[w] + x if w in out else x
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return NCPoly._raw(out)


def commutator(a: NCPoly, b: NCPoly) -> NCPoly:
    return nc_multiply(a, b) - nc_multiply(b, a)


# --- generating matrices ----------------------------------------------------

def generator_tensor(ctx: PositionContext, slots, left=None, right=None):
    """Scalar coefficients of left * T_{ov s1} ... T_{ov sk} * right.

    Returns {((a1,b1),...,(ak,bk)): TensorOp}: the product equals
    sum over index tuples of t_{a1}^{b1} ... t_{ak}^{bk} times the operator.
    """
    N = ctx.N
    units = {}
    for a in range(N):
        for b in range(N):
            E = TensorOp.from_entries(N, 1, {(a, b): 1})
            for s in set(slots):
                units[(a, b, s)] = embed_ov_single(E, s, ctx)
    out = {}
    for alpha in product([(a, b) for a in range(N) for b in range(N)], repeat=len(slots)):
        M = left if left is not None else None
        for (a, b), s in zip(alpha, slots):
            M = units[(a, b, s)] if M is None else M @ units[(a, b, s)]
        if right is not None:
            M = M @ right
        if not M.is_zero():
            out[alpha] = M
    return out


def cleared_rmatrix(pair: BraidingPair, kind):
    """(u - v) R(u,v) as {(i, j): X_ij} meaning sum u^i v^j X_ij."""
    R = pair.R.op
    I = TensorOp.identity(pair.N, 2)
    if kind == "rational":
        return {(1, 0): R, (0, 1): -R, (0, 0): -I}
    q = pair.R.q
    w = q - Fraction(1) / q
    return {(1, 0): R - I.scale(w), (0, 1): -R}


@dataclass
class Relation:
    poly: NCPoly
    bidegree: tuple
    entry: tuple

    @property
    def level(self):
        return self.poly.level


@dataclass
class RelationSet:
    relations: list
    kind: str
    N: int
    K: int
    q: object = None
    T0_identity: bool = False
    label: str = ""

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)

    def __getitem__(self, i):
        return self.relations[i]


def defining_relations(pair: BraidingPair, kind, N=None, K=1, T0_identity=False) -> RelationSet:
    """Graded components of (u - v) [R(u,v) T_ov1(u) T_ov2(v) - T_ov1(v) T_ov2(u) R(u,v)].

    With (u - v) R(u,v) = sum u^i v^j X_ij, the coefficient of u^-a v^-b is
    sum_ij X_ij T_1[a+i] T_2[b+j] - T_1[b+j] T_2[a+i] X_ij, emitted for every
    (a, b) whose terms only use levels <= K.
    """
    if K < 0:
        raise ValueError("truncation order K must be >= 0")
    if not pair.compatible:
        raise ValueError("defining relations need a compatible pair")
    kind = "rational" if kind in ("rational", "rat") else "trigonometric" if kind in ("trig", "trigonometric") else kind
    if kind not in ("rational", "trigonometric"):
        raise ValueError(f"unknown kind {kind!r}")
    if N is not None and N != pair.N:
        raise ValueError(f"N={N} does not match the braidings (N={pair.N})")
    N = pair.N
    ctx = PositionContext(pair.F.op, 2)
    X = cleared_rmatrix(pair, kind)
    left = {ij: generator_tensor(ctx, (1, 2), left=M) for ij, M in X.items()}
    right = {ij: generator_tensor(ctx, (1, 2), right=M) for ij, M in X.items()}
    dim = N * N
    rels = []
    for a in range(-1, K):
        for b in range(-1, K):
            entries = defaultdict(dict)

            def acc(tensors, m1, m2, sign):
                if m1 < 0 or m2 < 0:
                    return
                for alpha, M in tensors.items():
                    w = (Gen(alpha[0][0], alpha[0][1], m1), Gen(alpha[1][0], alpha[1][1], m2))
                    for r, row in enumerate(M.rows):
                        for c, v in row.items():
                            d = entries[(r, c)]
                            s = d[w] + sign * v if w in d else sign * v
                            if s:
                                d[w] = s
                            else:
                                d.pop(w, None)

            for (i, j) in X:
                acc(left[(i, j)], a + i, b + j, 1)
                acc(right[(i, j)], b + j, a + i, -1)
            for r in range(dim):
                for c in range(dim):
                    p = NCPoly._raw(entries.get((r, c), {}))
                    if T0_identity:
                        p = p.substitute_T0_identity()
                    if p:
                        rels.append(Relation(p, (a, b), (r, c)))
    q = pair.R.q if kind == "trigonometric" else None
    return RelationSet(rels, kind, N, K, q, T0_identity, f"{pair.R.name}|{pair.F.name}")


# --- ideal membership -------------------------------------------------------

@dataclass
class MembershipResult:
    verified: bool
    certificate: list = field(default_factory=list)   # (left word, rel index, right word, coeff)
    columns: int = 0
    reason: str = ""

    @property
    def status(self):
        return "VERIFIED" if self.verified else "INCONCLUSIVE"


def _words(alphabet, length):
    return product(alphabet, repeat=length) if length else [()]


def ideal_membership(p: NCPoly, rels: RelationSet, level_bound=None, alphabet=None) -> MembershipResult:
    """Search for p = sum c * (w_l . rel . w_r) over the truncated relations.

    Only products whose words all have level <= level_bound are used.  A
    failure is INCONCLUSIVE: the relations available at this truncation did
    not suffice, which says nothing about membership in the full ideal.
    """
    if not p:
        return MembershipResult(True, [], 0, "zero polynomial")
    d = p.degree
    if d < 2 and all(r.poly.min_degree >= 2 for r in rels):
        return MembershipResult(False, [], 0, "degree below relation degree")
    if level_bound is None:
        level_bound = p.level
    if level_bound < p.level:
        raise ValueError(f"level_bound {level_bound} below level of p ({p.level})")
    if alphabet is None:
        alphabet = sorted({Gen(i, j, m) for i in range(rels.N) for j in range(rels.N) for m in range(rels.K + 1)},
                          key=lambda g: (g.m, g))
    homogeneous = all(r.poly.is_homogeneous() for r in rels) and p.is_homogeneous()
    # candidate products
    cols = {}
    for ri, rel in enumerate(rels):
        rd = rel.poly.min_degree if homogeneous else rel.poly.degree
        span = d - rd
        if span < 0:
            continue
        lengths = [span] if homogeneous else range(span + 1)
        rl = rel.poly.level
        for total in lengths:
            for ll in range(total + 1):
                for wl in _words(alphabet, ll):
                    lv = word_level(wl)
                    if lv + rl > level_bound:
                        continue
                    for wr in _words(alphabet, total - ll):
                        if lv + rl + word_level(wr) > level_bound:
                            continue
                        cols[(tuple(wl), ri, tuple(wr))] = None
    # restrict to the connected component of p's support
    by_word = defaultdict(list)
    vecs = {}
    for key in cols:
        wl, ri, wr = key
        vec = {}
        for w, c in rels[ri].poly.terms.items():
            vec[wl + w + wr] = c
        vecs[key] = vec
        for w in vec:
            by_word[w].append(key)
    seen_words = set(p.terms)
    queue = deque(p.terms)
    used = set()
    while queue:
        w = queue.popleft()
        for key in by_word.get(w, ()):
            if key in used:
                continue
            used.add(key)
            for w2 in vecs[key]:
                if w2 not in seen_words:
                    seen_words.add(w2)
                    queue.append(w2)
    order = sorted(used, key=lambda k: (word_level(k[0]) + word_level(k[2]) + rels[k[1]].level,
                                        len(vecs[k]), k[1], k[0], k[2]))
    solver = SpanSolver(key_order=lambda w: (len(w), word_level(w), w))
    for key in order:
        solver.add(key, vecs[key])
    sol = solver.express(p.terms)
    if sol is None:
        return MembershipResult(False, [], len(order), "not in the span of the truncated relations")
    cert = [(wl, ri, wr, c) for (wl, ri, wr), c in sorted(sol.items(), key=lambda t: (t[0][1], t[0][0], t[0][2]))]
    return MembershipResult(True, cert, len(order))


def replay_certificate(p: NCPoly, rels: RelationSet, certificate) -> bool:
    """True iff sum coeff * (w_l . rel . w_r) - p == 0 exactly."""
    total = NCPoly()
    for wl, ri, wr, c in certificate:
        total = total + NCPoly({wl: 1}) * rels[ri].poly * NCPoly({wr: 1}) * c
    return not (total - p)


def certificate_to_json(certificate):
    return [
        {"left": [list(g) for g in wl], "relation": ri, "right": [list(g) for g in wr], "coeff": format_scalar(c)}
        for wl, ri, wr, c in certificate
    ]


def certificate_from_json(data):
    return [
        (tuple(Gen(*g) for g in d["left"]), d["relation"], tuple(Gen(*g) for g in d["right"]), parse_scalar(d["coeff"]))
        for d in data
    ]
