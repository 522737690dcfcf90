"""Exact operators on V^{(x)n}: products, Kronecker placement, F-transported
("overlined") embeddings and partial traces.

Basis convention: the basis vector e_{i1} (x) ... (x) e_{in} has flat index
i1*N^(n-1) + ... + in, i.e. slot 1 is the most significant digit, matching
``numpy.kron``.  Slots are numbered from 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
import json

from .scalars import ScalarParseError, as_scalar, evaluate, derivative, format_scalar, parse_scalar

__all__ = [
    "TensorOp",
    "ShapeError",
    "SingularError",
    "PositionContext",
    "embed_plain",
    "embed_ov_single",
    "embed_ov_pair",
    "partial_trace",
    "commutator",
    "load_matrix",
    "dump_matrix",
]

DENSE_ARITY_LIMIT = 5


class ShapeError(ValueError):
    pass


class SingularError(ArithmeticError):
    pass


def _digits(idx, N, n):
    out = [0] * n
    for s in range(n - 1, -1, -1):
        idx, out[s] = divmod(idx, N)
    return out


def _index(digits, N):
    idx = 0
    for d in digits:
        idx = idx * N + d
    return idx


class TensorOp:
    """Square matrix over exact scalars acting on V^{(x)n}, dim V = N.

    Entries are held row-sparse (one dict per row) so that zero-skipping
    keeps products of braidings cheap.
    """

    __slots__ = ("N", "n", "rows")

    def __init__(self, N: int, n: int, rows):
        self.N = N
        self.n = n
        self.rows = rows

    # construction ---------------------------------------------------------
    @classmethod
    def from_dense(cls, N, n, entries):
        dim = N ** n
        if len(entries) != dim or any(len(r) != dim for r in entries):
            raise ShapeError(f"expected a {dim}x{dim} matrix for N={N}, n={n}")
        rows = []
        for r in entries:
            row = {}
            for j, x in enumerate(r):
                x = as_scalar(x)
                if x:
                    row[j] = x
            rows.append(row)
        return cls(N, n, tuple(rows))

    @classmethod
    def from_entries(cls, N, n, entries: dict):
        """Build from {(row, col): value}."""
        rows = [dict() for _ in range(N ** n)]
        for (i, j), x in entries.items():
            x = as_scalar(x)
            if x:
                rows[i][j] = x
        return cls(N, n, tuple(rows))

    @classmethod
    def identity(cls, N, n=1):
        return cls(N, n, tuple({i: Fraction(1)} for i in range(N ** n)))

    @classmethod
    def zero(cls, N, n=1):
        return cls(N, n, tuple({} for _ in range(N ** n)))

    @classmethod
    def flip(cls, N):
        rows = [dict() for _ in range(N * N)]
        for i in range(N):
            for j in range(N):
                rows[i * N + j][j * N + i] = Fraction(1)
        return cls(N, 2, tuple(rows))

    @property
    def dim(self):
        return len(self.rows)

    def to_dense(self):
        z = Fraction(0)
        return [[row.get(j, z) for j in range(self.dim)] for row in self.rows]

    def entry(self, i, j):
        return self.rows[i].get(j, Fraction(0))

    def nnz(self):
        return sum(len(r) for r in self.rows)

    # arithmetic -----------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, TensorOp):
            raise TypeError(f"expected TensorOp, got {type(other).__name__}")
        if (self.N, self.n) != (other.N, other.n):
            raise ShapeError(f"shape mismatch: (N={self.N}, n={self.n}) vs (N={other.N}, n={other.n})")

    def __matmul__(self, other):
        self._check(other)
        orows = other.rows
        out = []
        for row in self.rows:
            acc = {}
            for k, a in row.items():
                for j, b in orows[k].items():
                    acc[j] = acc[j] + a * b if j in acc else a * b
            out.append({j: v for j, v in acc.items() if v})
        return TensorOp(self.N, self.n, tuple(out))

    def __add__(self, other):
        self._check(other)
        out = []
        for ra, rb in zip(self.rows, other.rows):
            row = dict(ra)
            for j, v in rb.items():
                s = row[j] + v if j in row else v
                if s:
                    row[j] = s
                else:
                    row.pop(j, None)
            out.append(row)
        return TensorOp(self.N, self.n, tuple(out))

    def __neg__(self):
        return TensorOp(self.N, self.n, tuple({j: -v for j, v in r.items()} for r in self.rows))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_scalar(c)
        if not c:
            return TensorOp.zero(self.N, self.n)
        out = []
        for r in self.rows:
            row = {}
            for j, v in r.items():
                w = v * c
                if w:
                    row[j] = w
            out.append(row)
        return TensorOp(self.N, self.n, tuple(out))

    def __mul__(self, c):
        if isinstance(c, TensorOp):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(Fraction(1) / as_scalar(c))

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        return (self.N, self.n) == (other.N, other.n) and self.rows == other.rows

    __hash__ = None

    def is_zero(self):
        return not any(self.rows)

    def first_nonzero(self):
        """(row, col, value) of the first nonzero entry in row-major order."""
        for i, r in enumerate(self.rows):
            if r:
                j = min(r)
                return i, j, r[j]
        return None

    def map(self, fn):
        out = []
        for r in self.rows:
            row = {}
            for j, v in r.items():
                w = fn(v)
                if w:
                    row[j] = w
            out.append(row)
        return TensorOp(self.N, self.n, tuple(out))

    def evaluate(self, q0):
        """Substitute q = q0 in every entry."""
        q0 = Fraction(q0)
        return self.map(lambda x: evaluate(x, q0))

    def derivative(self):
        """Entrywise exact d/dq."""
        return self.map(derivative)

    def trace(self):
        total = Fraction(0)
        for i, r in enumerate(self.rows):
            if i in r:
                total = total + r[i]
        return total

    def transpose(self):
        rows = [dict() for _ in range(self.dim)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                rows[j][i] = v
        return TensorOp(self.N, self.n, tuple(rows))

    def kron(self, other):
        if self.N != other.N:
            raise ShapeError("kron of operators over different local dimensions")
        d = other.dim
        rows = []
        for ra in self.rows:
            for rb in other.rows:
                row = {}
                for j, a in ra.items():
                    for l, b in rb.items():
                        w = a * b
                        if w:
                            row[j * d + l] = w
                rows.append(row)
        return TensorOp(self.N, self.n + other.n, tuple(rows))

    def inverse(self):
        """Exact Gauss-Jordan inverse; raises SingularError."""
        dim = self.dim
        aug = [dict(r) for r in self.rows]
        inv = [{i: Fraction(1)} for i in range(dim)]
        for col in range(dim):
            piv = None
            for r in range(col, dim):
                if col in aug[r]:
                    if piv is None or _size(aug[r][col]) < _size(aug[piv][col]):
                        piv = r
            if piv is None:
                raise SingularError("operator is not invertible")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            p = aug[col][col]
            aug[col] = {j: v / p for j, v in aug[col].items()}
            inv[col] = {j: v / p for j, v in inv[col].items()}
            for r in range(dim):
                if r != col and col in aug[r]:
                    f = aug[r][col]
                    _axpy(aug[r], aug[col], f)
                    _axpy(inv[r], inv[col], f)
        return TensorOp(self.N, self.n, tuple(inv))

    def power(self, k):
        out = TensorOp.identity(self.N, self.n)
        for _ in range(k):
            out = out @ self
        return out

    def __repr__(self):
        return f"TensorOp(N={self.N}, n={self.n}, nnz={self.nnz()})"

    def pretty(self):
        cells = [[format_scalar(x) for x in r] for r in self.to_dense()]
        w = max(len(c) for r in cells for c in r)
        return "\n".join(" ".join(c.rjust(w) for c in r) for r in cells)


def _size(x):
    if isinstance(x, Fraction):
        return x.numerator.bit_length() + x.denominator.bit_length()
    return 1 << 20 if not hasattr(x, "coeffs") else 64 * len(x.coeffs)


def _axpy(target, src, f):
    """target -= f * src, in place on sparse dict rows."""
    for j, v in src.items():
        w = target[j] - f * v if j in target else -f * v
        if w:
            target[j] = w
        else:
            target.pop(j, None)


def commutator(a: TensorOp, b: TensorOp) -> TensorOp:
    return a @ b - b @ a


def place(A: TensorOp, slots, n: int) -> TensorOp:
    """Plain embedding: factor t of A acts on tensor slot ``slots[t]``."""
    N, m = A.N, A.n
    slots = tuple(slots)
    if len(slots) != m:
        raise ShapeError(f"operator of arity {m} needs {m} positions, got {len(slots)}")
    if len(set(slots)) != m:
        raise ValueError(f"positions must be distinct: {slots}")
    for s in slots:
        if not 1 <= s <= n:
            raise ValueError(f"position {s} out of range 1..{n}")
    if m == n and slots == tuple(range(1, n + 1)):
        return A
    rest = [s for s in range(1, n + 1) if s not in slots]
    weights = [N ** (n - s) for s in range(1, n + 1)]
    sw = [weights[s - 1] for s in slots]
    rw = [weights[s - 1] for s in rest]
    rest_offsets = [sum(d * w for d, w in zip(ds, rw)) for ds in product(range(N), repeat=len(rest))]
    local = []
    for i in range(N ** m):
        local.append(sum(d * w for d, w in zip(_digits(i, N, m), sw)))
    rows = [dict() for _ in range(N ** n)]
    for i, r in enumerate(A.rows):
        if not r:
            continue
        li = local[i]
        cols = [(local[j], v) for j, v in r.items()]
        for off in rest_offsets:
            row = rows[li + off]
            for lj, v in cols:
                row[lj + off] = v
    return TensorOp(N, n, tuple(rows))


@dataclass(frozen=True, eq=False)
class PositionContext:
    """Number of slots n and the braiding F used to transport matrices."""

    F: TensorOp
    n: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.F.n != 2:
            raise ShapeError("transporting braiding must act on V (x) V")
        if self.n < 1:
            raise ValueError("need at least one tensor slot")

    @property
    def N(self):
        return self.F.N

    def with_n(self, n):
        if n == self.n:
            return self
        ctx = PositionContext(self.F, n)
        for key in ("Finv", "involutive"):
            if key in self._cache:
                ctx._cache[key] = self._cache[key]
        return ctx

    @property
    def F_inv(self):
        if "Finv" not in self._cache:
            try:
                self._cache["Finv"] = self.F.inverse()
            except SingularError as exc:
                raise SingularError("transporting braiding F is singular") from exc
        return self._cache["Finv"]

    @property
    def involutive(self):
        if "involutive" not in self._cache:
            self._cache["involutive"] = (self.F @ self.F) == TensorOp.identity(self.N, 2)
        return self._cache["involutive"]

    def F_at(self, j):
        """F_{j,j+1} on V^{(x)n}."""
        key = ("F", j)
        if key not in self._cache:
            self._cache[key] = place(self.F, (j, j + 1), self.n)
        return self._cache[key]

    def F_inv_at(self, j):
        key = ("Finv", j)
        if key not in self._cache:
            self._cache[key] = place(self.F_inv, (j, j + 1), self.n)
        return self._cache[key]

    def conj(self, X, j):
        """F_{j,j+1} X F_{j,j+1}^{-1}."""
        return self.F_at(j) @ X @ self.F_inv_at(j)


def _check_positions(ctx, *pos):
    for p in pos:
        if not isinstance(p, int) or not 1 <= p <= ctx.n:
            raise ValueError(f"position {p} out of range 1..{ctx.n}")


def embed_plain(A: TensorOp, positions, ctx_or_n) -> TensorOp:
    """A_k (or A_{kl}) by ordinary flips: A_2 = P_12 A_1 P_12, etc."""
    n = ctx_or_n.n if isinstance(ctx_or_n, PositionContext) else int(ctx_or_n)
    if isinstance(positions, int):
        positions = (positions,)
    return place(A, positions, n)


def embed_ov_single(A: TensorOp, k: int, ctx: PositionContext) -> TensorOp:
    """A_{ov k} = F_{k-1,k} ... F_12 A_1 F_12^{-1} ... F_{k-1,k}^{-1}."""
    if A.n != 1:
        raise ShapeError("embed_ov_single expects an N x N matrix")
    if A.N != ctx.N:
        raise ShapeError("local dimension mismatch with F")
    _check_positions(ctx, k)
    key = ("ov1", id(A), k)
    hit = ctx._cache.get(key)
    if hit is not None and hit[0] is A:
        return hit[1]
    X = place(A, (1,), ctx.n)
    for j in range(1, k):
        X = ctx.conj(X, j)
    ctx._cache[key] = (A, X)
    return X


def embed_ov_pair(A: TensorOp, k: int, l: int, ctx: PositionContext) -> TensorOp:
    """A_{ov kl}; for k > l defined as (F A F)_{ov lk}, which needs F^2 = I."""
    if A.n != 2:
        raise ShapeError("embed_ov_pair expects an operator on V (x) V")
    if A.N != ctx.N:
        raise ShapeError("local dimension mismatch with F")
    _check_positions(ctx, k, l)
    if k == l:
        raise ValueError("positions of a two-slot embedding must differ")
    key = ("ov2", id(A), k, l)
    hit = ctx._cache.get(key)
    if hit is not None and hit[0] is A:
        return hit[1]
    if k > l:
        if not ctx.involutive:
            raise ValueError("A_{ov kl} with k > l is only defined for involutive F")
        X = embed_ov_pair(ctx.F @ A @ ctx.F, l, k, ctx)
    else:
        X = place(A, (1, 2), ctx.n)
        for j in range(2, l):
            X = ctx.conj(X, j)
        for j in range(1, k):
            X = ctx.conj(X, j)
    ctx._cache[key] = (A, X)
    return X


def partial_trace(X: TensorOp, slots) -> TensorOp:
    """Trace over the named slots; the result acts on the remaining slots in order.

    Tracing every slot returns a 1x1 operator with n = 0.
    """
    if X.dim == 0:
        raise ShapeError("empty operator")
    slots = sorted(set(slots))
    N, n = X.N, X.n
    for s in slots:
        if not 1 <= s <= n:
            raise ValueError(f"slot {s} out of range 1..{n}")
    keep = [s for s in range(1, n + 1) if s not in slots]
    rows = [dict() for _ in range(N ** len(keep))]
    tr_idx = [s - 1 for s in slots]
    kp_idx = [s - 1 for s in keep]
    for i, r in enumerate(X.rows):
        if not r:
            continue
        di = _digits(i, N, n)
        ti = [di[s] for s in tr_idx]
        ri = _index([di[s] for s in kp_idx], N)
        row = rows[ri]
        for j, v in r.items():
            dj = _digits(j, N, n)
            if [dj[s] for s in tr_idx] != ti:
                continue
            cj = _index([dj[s] for s in kp_idx], N)
            w = row[cj] + v if cj in row else v
            if w:
                row[cj] = w
            else:
                row.pop(cj, None)
    return TensorOp(N, len(keep), tuple(rows))


# --- matrix file format -----------------------------------------------------

def dump_matrix(op: TensorOp) -> str:
    """JSON {"N", "arity", "entries"} with every entry a scalar literal."""
    entries = [[format_scalar(x) for x in row] for row in op.to_dense()]
    return json.dumps({"N": op.N, "arity": op.n, "entries": entries})


def load_matrix(text_or_obj) -> TensorOp:
    obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    try:
        N, n, entries = obj["N"], obj["arity"], obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ShapeError("matrix file needs keys N, arity, entries") from exc
    extra = set(obj) - {"N", "arity", "entries"}
    if extra:
        raise ShapeError(f"unknown keys in matrix file: {sorted(extra)}")
    for r in entries:
        for x in r:
            if not isinstance(x, str):
                raise ShapeError("matrix entries must be scalar strings")
    rows = []
    cursor = 0
    for i, r in enumerate(entries):
        row = []
        for j, x in enumerate(r):
            if isinstance(text_or_obj, str):
                hit = text_or_obj.find(json.dumps(x), cursor)
                cursor = hit + 1 if hit >= 0 else cursor
            try:
                row.append(parse_scalar(x))
            except ScalarParseError as exc:
                where = f"entry [{i}][{j}]"
                if isinstance(text_or_obj, str) and hit >= 0:
                    where += f", file byte offset {hit + 1 + exc.offset}"
                raise ScalarParseError(x, exc.offset, f"{where}: {exc.msg}") from None
        rows.append(row)
    return TensorOp.from_dense(N, n, rows)
