"""Independent brute-force oracles used by the tests.

They work on dense nested lists and explicit index loops, sharing no code
with the sparse implementation under test.
"""

from fractions import Fraction
from itertools import product

import sympy

from braidcheck.scalars import format_scalar

_q = sympy.Symbol("q")


def dense(op):
    return [list(r) for r in op.to_dense()]


def matmul(a, b):
    n, m, k = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(m)), Fraction(0)) for j in range(k)] for i in range(n)]


def kron(a, b):
    return [[a[i // len(b)][j // len(b[0])] * b[i % len(b)][j % len(b[0])]
             for j in range(len(a[0]) * len(b[0]))] for i in range(len(a) * len(b))]


def digits(idx, N, n):
    out = []
    for _ in range(n):
        out.append(idx % N)
        idx //= N
    return out[::-1]


def index(ds, N):
    i = 0
    for d in ds:
        i = i * N + d
    return i


def place_dense(A, N, slots, n):
    """Operator A (acting on len(slots) factors) placed on ``slots`` of V^{(x)n}."""
    out = [[Fraction(0)] * N ** n for _ in range(N ** n)]
    for r in range(N ** n):
        dr = digits(r, N, n)
        for c in range(N ** n):
            dc = digits(c, N, n)
            if any(dr[s] != dc[s] for s in range(n) if s + 1 not in slots):
                continue
            ar = index([dr[s - 1] for s in slots], N)
            ac = index([dc[s - 1] for s in slots], N)
            out[r][c] = A[ar][ac]
    return out


def partial_trace_dense(X, N, n, traced):
    keep = [s for s in range(1, n + 1) if s not in traced]
    m = len(keep)
    out = [[Fraction(0)] * N ** m for _ in range(N ** m)]
    for r in range(N ** m):
        dr = digits(r, N, m)
        for c in range(N ** m):
            dc = digits(c, N, m)
            tot = Fraction(0)
            for t in product(range(N), repeat=len(traced)):
                full_r, full_c = [0] * n, [0] * n
                for s, d in zip(keep, dr):
                    full_r[s - 1] = d
                for s, d in zip(keep, dc):
                    full_c[s - 1] = d
                for s, d in zip(traced, t):
                    full_r[s - 1] = d
                    full_c[s - 1] = d
                tot += X[index(full_r, N)][index(full_c, N)]
            out[r][c] = tot
    return out


def f_trace_contraction(C, X, N, n, k):
    """sum over i_s, j_s of C[i1][j1] ... C[ik][jk] X[(j, rest)][(i, rest')]."""
    m = n - k
    out = [[Fraction(0)] * N ** m for _ in range(N ** m)]
    for r in range(N ** m):
        dr = digits(r, N, m)
        for c in range(N ** m):
            dc = digits(c, N, m)
            tot = Fraction(0)
            for i in product(range(N), repeat=k):
                for j in product(range(N), repeat=k):
                    w = Fraction(1)
                    for a, b in zip(i, j):
                        w *= C[a][b]
                    if w:
                        tot += w * X[index(list(j) + dr, N)][index(list(i) + dc, N)]
            out[r][c] = tot
    return out


def sympy_derivative_oracle(op):
    """d/dq at q = 1 entrywise, through sympy's parser and differentiator."""
    out = []
    for row in op.to_dense():
        r = []
        for v in row:
            e = sympy.sympify(format_scalar(v).replace("^", "**"), locals={"q": _q})
            d = sympy.diff(e, _q).subs(_q, 1)
            r.append(Fraction(int(sympy.numer(d)), int(sympy.denom(d))))
        out.append(r)
    return out
