"""Seeded sampling of exact rational points."""

from __future__ import annotations

from fractions import Fraction
import random

DEFAULT_BOUND = 50


class RationalSampler:
    """Reproducible source of rationals with |numerator|, denominator <= bound."""

    def __init__(self, seed=0, bound=DEFAULT_BOUND):
        self.rng = random.Random(seed)
        self.bound = bound

    def rational(self, nonzero=False):
        while True:
            x = Fraction(self.rng.randint(-self.bound, self.bound), self.rng.randint(1, self.bound))
            if x or not nonzero:
                return x

    def point(self, dim, reject=None, distinct=True, tries=10_000):
        """A tuple of ``dim`` rationals; ``reject(point)`` returning True resamples."""
        for _ in range(tries):
            p = tuple(self.rational() for _ in range(dim))
            if distinct and len(set(p)) < dim:
                continue
            if reject is not None and reject(p):
                continue
            return p
        raise RuntimeError("could not sample an admissible point")

    def points(self, count, dim, reject=None, distinct=True):
        return [self.point(dim, reject, distinct) for _ in range(count)]

    def matrix(self, N):
        from .tensor import TensorOp
        return TensorOp.from_dense(N, 1, [[self.rational() for _ in range(N)] for _ in range(N)])
