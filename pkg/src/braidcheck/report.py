"""Check outcomes and their serialization."""

from __future__ import annotations

from dataclasses import dataclass, field
import json
import time

from .scalars import format_scalar

__all__ = ["CheckReport", "SuiteReport", "matrix_check", "combine", "timed", "SCHEMA_VERSION"]

SCHEMA_VERSION = "braidcheck.report.v1"

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, float):
        return x
    return format_scalar(x)


@dataclass
class CheckReport:
    """Outcome of one named check.

    ``witnesses`` locate failures (matrix entries, sample points, monomials);
    ``certificates`` carry replayable evidence for passes where one exists.
    """

    name: str
    status: str
    witnesses: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self):
        return self.passed

    def to_dict(self, include_timing=False):
        d = {
            "name": self.name,
            "status": self.status,
            "witnesses": _jsonable(self.witnesses),
            "certificates": _jsonable(self.certificates),
            "details": _jsonable(self.details),
        }
        if include_timing:
            d["elapsed_s"] = round(self.elapsed, 6)
        return d


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def status(self):
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    def to_dict(self, include_timing=False):
        d = {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "status": self.status,
            "config": _jsonable(self.config),
            "summary": {
                s: sum(c.status == s for c in self.checks) for s in (PASS, FAIL, INCONCLUSIVE)
            },
            "checks": [c.to_dict(include_timing) for c in self.checks],
        }
        if include_timing:
            d["elapsed_s"] = round(self.elapsed, 6)
        return d

    def emit(self, fmt="json", include_timing=False) -> bytes:
        if fmt == "json":
            text = json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2)
            return (text + "\n").encode()
        if fmt != "text":
            raise ValueError(f"unknown report format {fmt!r}")
        lines = [f"suite {self.suite}: {self.status.upper()} ({len(self.checks)} checks)"]
        for c in self.checks:
            line = f"  [{c.status.upper():>12}] {c.name}"
            if include_timing:
                line += f"  ({c.elapsed:.3f}s)"
            lines.append(line)
            for w in c.witnesses[:3]:
                lines.append(f"      witness: {json.dumps(_jsonable(w), sort_keys=True)}")
        return ("\n".join(lines) + "\n").encode()


def matrix_check(name, lhs, rhs, **context) -> CheckReport:
    """Pass iff lhs == rhs exactly; otherwise report the first differing entry."""
    diff = lhs - rhs
    hit = diff.first_nonzero()
    if hit is None:
        return CheckReport(name, PASS, details=dict(context))
    i, j, v = hit
    w = {"entry": [i, j], "difference": v}
    w.update(context)
    return CheckReport(name, FAIL, witnesses=[w], details=dict(context))


def combine(name, reports, **details) -> CheckReport:
    """Aggregate sub-reports: fail dominates inconclusive dominates pass."""
    reports = list(reports)
    states = {r.status for r in reports}
    status = FAIL if FAIL in states else INCONCLUSIVE if INCONCLUSIVE in states else PASS
    witnesses = []
    certs = []
    for r in reports:
        for w in r.witnesses:
            witnesses.append({"check": r.name, **w})
        certs.extend(r.certificates)
    details.setdefault("subchecks", len(reports))
    if status != PASS:
        details["failing"] = [r.name for r in reports if r.status != PASS]
    return CheckReport(name, status, witnesses, certs, details, sum(r.elapsed for r in reports))


class timed:
    """Context manager filling ``report.elapsed`` for whatever it returns."""

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False
