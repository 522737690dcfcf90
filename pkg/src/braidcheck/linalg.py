"""Sparse exact elimination with replayable solutions.

Vectors are dicts {key: scalar}.  ``SpanSolver`` keeps a semi-echelon basis of
the columns fed to it; each pivot remembers how it was produced so that a
combination of *original* columns can be recovered for any vector found to
lie in the span.
"""

from __future__ import annotations

from fractions import Fraction
import heapq

__all__ = ["SpanSolver", "solve_columns", "entry_size"]


ZERO = Fraction(0)


def _exact(x):
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"inexact scalar {x!r}")
    return Fraction(x) if isinstance(x, int) else x


def entry_size(x):
    if isinstance(x, Fraction):
        return x.numerator.bit_length() + x.denominator.bit_length()
    if isinstance(x, int):
        return x.bit_length()
    return 10_000 + len(str(x))


class SpanSolver:
    """Incremental column span over an exact field."""

    def __init__(self, key_order=None):
        self._order = key_order or (lambda k: k)
        self.pivot_of = {}      # key -> pivot index
        self.pivots = []        # (key, vec normalised so vec[key] == 1)
        self.history = []       # (column id, scale, [(pivot index, factor), ...])

    def __len__(self):
        return len(self.pivots)

    def _reduce(self, vec):
        vec = {k: _exact(v) for k, v in vec.items() if v}
        steps = []
        heap = [(self.pivot_of[k], k) for k in vec if k in self.pivot_of]
        heapq.heapify(heap)
        while heap:
            idx, k = heapq.heappop(heap)
            f = vec.get(k)
            if not f:
                continue
            steps.append((idx, f))
            for kk, v in self.pivots[idx][1].items():
                w = vec[kk] - f * v if kk in vec else -f * v
                if w:
                    if kk not in vec and kk in self.pivot_of:
                        heapq.heappush(heap, (self.pivot_of[kk], kk))
                    vec[kk] = w
                else:
                    vec.pop(kk, None)
        return vec, steps

    def add(self, col_id, vec) -> bool:
        """Insert a column; returns True if it enlarged the span."""
        rem, steps = self._reduce(vec)
        if not rem:
            return False
        key = min(rem, key=lambda k: (entry_size(rem[k]), self._order(k)))
        s = rem[key]
        self.pivots.append((key, {k: v / s for k, v in rem.items()}))
        self.pivot_of[key] = len(self.pivots) - 1
        self.history.append((col_id, s, steps))
        return True

    def express(self, vec):
        """Coefficients {column id: c} with sum c * column == vec, or None."""
        rem, steps = self._reduce(vec)
        if rem:
            return None
        coef = {}
        for idx, f in steps:
            coef[idx] = coef.get(idx, ZERO) + f
        out = {}
        for idx in range(len(self.pivots) - 1, -1, -1):
            b = coef.get(idx)
            if not b:
                continue
            col_id, s, psteps = self.history[idx]
            # pivot_idx = (column - sum f_j pivot_j) / s
            c = b / s
            out[col_id] = out.get(col_id, ZERO) + c
            for j, f in psteps:
                coef[j] = coef.get(j, ZERO) - c * f
        return {k: v for k, v in out.items() if v}


def solve_columns(columns, target):
    """Solve sum_i x_i columns[i] == target exactly.

    Returns {i: x_i} (free variables set to zero) or None if inconsistent.
    """
    solver = SpanSolver()
    for i, col in enumerate(columns):
        solver.add(i, col)
    return solver.express(target)
