"""Check configurations and suite orchestration.

A config is a JSON object (or the equivalent CLI flags).  Scalars are strings
in the scalar grammar or plain integers; unknown keys are rejected.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .report import CheckReport, FAIL, PASS, SuiteReport, combine, matrix_check
from .scalars import ScalarParseError, parse_scalar
from .sampling import DEFAULT_BOUND, RationalSampler
from .tensor import ShapeError, TensorOp, load_matrix

__all__ = ["ConfigError", "CheckConfig", "SUITES", "parse_config", "run_suite", "WORKERS_ENV"]

WORKERS_ENV = "BRAIDCHECK_WORKERS"


class ConfigError(ValueError):
    def __init__(self, msg, location=None):
        self.location = location
        super().__init__(f"{location}: {msg}" if location else msg)


_COMMON = {"suite", "seed", "points", "sample_bound"}

SUITES = {
    "braiding": {"R", "q"},
    "compat": {"R", "F", "q", "ybe_n"},
    "baxter": {"R", "F", "kind", "q"},
    "rstructs": {"R", "F", "q"},
    "kz": {"kind", "n", "g", "kappa", "F", "R"},
    "qkz": {"R", "F", "kind", "n", "g", "p", "q", "kappa"},
    "bethe": {"R", "F", "kind", "k", "p", "K", "bound", "q", "T0_identity", "relations_K", "certificates"},
    "newton": {"R", "F", "kind", "k", "K", "q", "relations_K", "certificates"},
    "all": set(),
}

_DEFAULTS = {
    "seed": 0, "points": 10, "sample_bound": DEFAULT_BOUND,
    "R": "flip:2", "F": None, "kind": None, "q": None, "ybe_n": 4,
    "n": 3, "g": None, "kappa": "1", "p": None, "k": 1, "K": 2,
    "bound": None, "T0_identity": False, "relations_K": None, "certificates": True,
}


@dataclass
class CheckConfig:
    suite: str
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        if key in self.values:
            return self.values[key]
        return _DEFAULTS.get(key)

    def get(self, key, default=None):
        v = self[key]
        return default if v is None else v

    def to_dict(self):
        return {"suite": self.suite, **{k: self.values[k] for k in sorted(self.values)}}


def _scalar(v, key):
    if isinstance(v, bool):
        raise ConfigError("expected a scalar, got a boolean", key)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        raise ConfigError("floats are not exact; write the value as a string such as \"5/2\"", key)
    if not isinstance(v, str):
        raise ConfigError(f"expected a scalar string, got {type(v).__name__}", key)
    try:
        return parse_scalar(v)
    except ScalarParseError as exc:
        raise ConfigError(str(exc), key) from None


def _int(v, key):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ConfigError("expected an integer", key)
    try:
        return int(v)
    except ValueError:
        raise ConfigError(f"expected an integer, got {v!r}", key) from None


_INT_KEYS = {"seed", "points", "sample_bound", "ybe_n", "n", "k", "p_order", "K", "relations_K"}


def parse_config(obj, suite=None) -> CheckConfig:
    """Validate a config mapping; raises ConfigError naming the offending key."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    suite = suite or obj.get("suite")
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; known: {sorted(SUITES)}", "suite")
    allowed = _COMMON | SUITES[suite]
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown keys {unknown} for suite {suite!r}", unknown[0])
    vals = {}
    for k, v in obj.items():
        if k == "suite" or v is None:
            continue
        if k in _INT_KEYS or (k == "p" and suite == "bethe"):
            vals[k] = _int(v, k)
        elif k in ("q", "kappa") or (k == "p" and suite == "qkz"):
            vals[k] = _scalar(v, k)
        elif k in ("T0_identity", "certificates"):
            if not isinstance(v, bool):
                raise ConfigError("expected true or false", k)
            vals[k] = v
        elif k == "bound":
            if isinstance(v, str):
                v = v.split(",")
            if not isinstance(v, list) or len(v) != 2:
                raise ConfigError("bound must be \"a,b\" or [a, b]", k)
            vals[k] = [_int(x, k) for x in v]
        elif k == "kind":
            from .currents import canonical_kind
            try:
                vals[k] = canonical_kind(v)
            except ValueError as exc:
                raise ConfigError(str(exc), k) from None
        else:
            if not isinstance(v, str):
                raise ConfigError("expected a string", k)
            vals[k] = v
    for k in ("points", "n", "K"):
        if k in vals and vals[k] < 0:
            raise ConfigError("must be nonnegative", k)
    return CheckConfig(suite, vals)


# --- helpers ------------------------------------------------------------------

def _braiding(spec, q=None, key="R"):
    from .braidings import parse_braiding_spec
    try:
        return parse_braiding_spec(spec, q=q)
    except (KeyError, ValueError, ShapeError, OSError) as exc:
        raise ConfigError(str(exc).strip("'\""), key) from None


def _F_for(cfg, R, q=None):
    spec = cfg["F"]
    if spec is None:
        from .braidings import catalog
        return catalog("flip", R.N)
    if spec == "same":
        return R
    return _braiding(spec, q, "F")


def parse_g(spec, N, key="g"):
    """``I``, ``diag:a,b,...``, ``dense:a,b;c,d`` or a matrix JSON file."""
    if spec is None or spec in ("I", "identity"):
        return TensorOp.identity(N, 1)
    try:
        if spec.startswith("diag:"):
            vals = [parse_scalar(x) for x in spec[5:].split(",")]
            if len(vals) != N:
                raise ConfigError(f"diag needs {N} entries", key)
            return TensorOp.from_entries(N, 1, {(i, i): v for i, v in enumerate(vals)})
        if spec.startswith("dense:"):
            rows = [[parse_scalar(x) for x in r.split(",")] for r in spec[6:].split(";")]
            return TensorOp.from_dense(N, 1, rows)
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
        g = load_matrix(text)
    except ScalarParseError as exc:
        raise ConfigError(str(exc), key) from None
    except (OSError, ShapeError, ValueError) as exc:
        raise ConfigError(str(exc), key) from None
    if g.N != N or g.n != 1:
        raise ConfigError(f"g must be an {N}x{N} matrix", key)
    return g


def _sampler(cfg, salt=0):
    return RationalSampler(cfg["seed"] * 1_000_003 + salt, cfg["sample_bound"])


def _second_q(cfg, q0):
    """An independent seeded q1 not in {0, +-1, q0, -q0}."""
    s = _sampler(cfg, 77)
    while True:
        x = s.rational(nonzero=True)
        if x not in (1, -1, q0, -q0 if q0 is not None else None) and abs(x.numerator) > 1:
            return x


def _q_values(cfg, R):
    if R.kind == "involutive":
        return (None,)
    q0 = cfg["q"]
    if q0 is None:
        s = _sampler(cfg, 71)
        while True:
            q0 = s.rational(nonzero=True)
            if q0 not in (1, -1) and abs(q0.numerator) > 1:
                break
    return (q0, _second_q(cfg, q0))


def _kind_for(cfg, R):
    kind = cfg["kind"]
    if kind is None:
        kind = "rational" if R.kind == "involutive" else "trigonometric"
    return kind


# --- runners --------------------------------------------------------------------

def run_braiding(cfg):
    from .braidings import check_braid, classify_symmetry
    R = _braiding(cfg["R"], cfg["q"])
    rep = check_braid(R)
    sym = classify_symmetry(R)
    rep.details["symmetry"] = str(sym)
    cls = CheckReport("classify_symmetry", PASS if sym.kind != "neither" else FAIL,
                      details={"symmetry": str(sym), "braiding": R.name})
    return [rep, cls]


def run_compat(cfg):
    from .braidings import check_braided_ybe, check_compatible
    R = _braiding(cfg["R"], cfg["q"])
    F = _F_for(cfg, R, cfg["q"])
    comp = check_compatible(R, F)
    comp.name = f"compatible[{R.name},{F.name}]"
    out = [comp]
    if comp.passed:
        for n in range(3, cfg["ybe_n"] + 1):
            out.append(check_braided_ybe(R, F, n))
    return out


def run_baxter(cfg):
    from .braidings import make_pair
    from .currents import baxterize, check_param_ybe, check_unitarity, hqa_degeneration, normalized_R
    R = _braiding(cfg["R"], cfg["q"])
    kind = _kind_for(cfg, R)
    try:
        Rc = baxterize(R, kind)
    except ValueError as exc:
        raise ConfigError(str(exc), "kind") from None
    s = _sampler(cfg, 1)
    out = [check_param_ybe(Rc, s.points(cfg["points"], 3))]
    if R.kind == "hecke" and cfg["q"] is None:
        out.append(hqa_degeneration(R))
    if cfg["F"] is not None:
        F = _F_for(cfg, R, cfg["q"])
        pair = make_pair(R, F)
        if pair.F_involutive:
            RR = normalized_R(pair, kind)
            pts = s.points(cfg["points"], 2, reject=lambda p: not (RR.admissible(*p) and RR.admissible(p[1], p[0])))
            out.append(check_unitarity(RR, pts))
    return out


def run_rstructs(cfg):
    from .rstructs import (
        alternative_form_check, check_commutation, check_constant_r, check_r_properties,
        constant_r_from_expansion, jacobi_check, rational_r, schouten_AA_formula, schouten_defect,
        sklyanin_skew_check, trigonometric_r,
    )
    R = _braiding(cfg["R"])
    F = _F_for(cfg, R)
    s = _sampler(cfg, 2)
    npts = cfg["points"]
    pts = s.points(npts, 3)
    out = []
    currents = [rational_r(F)]
    if R.kind == "hecke":
        r = constant_r_from_expansion(R, F)
        out.append(check_constant_r(r, F))
        out[-1].details["r"] = [[x for x in row] for row in r.to_dense()]
        trig = trigonometric_r(F, r)
        currents.append(trig)
        out.append(matrix_check("schouten[[r,r]]=0", schouten_defect(r, r, F=F), TensorOp.zero(F.N, 3)))
        out.append(combine("schouten[[r(u,v),r(u,v)]]=0", [
            matrix_check("schouten_trig", schouten_defect(trig, trig, p), TensorOp.zero(F.N, 3), point=list(p))
            for p in pts]))
        out.append(alternative_form_check(trig, [p[:2] for p in pts]))
    out.append(combine("schouten_AA_formula", [schouten_AA_formula(F, p) for p in pts]))
    for cur in currents:
        out.append(check_r_properties(cur, pts))
    As = [s.matrix(F.N) for _ in range(min(npts, 5))]
    out.append(check_commutation(R if R.kind == "hecke" else F, F, As, [p[:2] for p in pts[:3]], currents[-1]))
    for cur in currents:
        subs = []
        for (u, v, w) in pts[:min(npts, 5)]:
            X, Y, Z = s.matrix(F.N), s.matrix(F.N), s.matrix(F.N)
            subs.append(sklyanin_skew_check(X, Y, u, v, cur))
            subs.append(jacobi_check(X, Y, Z, u, v, w, cur))
        out.append(combine(f"sklyanin[{cur.kind}]", subs))
    return out


def run_kz(cfg):
    from .kz import build_connection, check_flatness, validate_g
    kind = cfg["kind"] or "rational"
    F = _braiding(cfg["F"] or "flip:2", key="F")
    g = parse_g(cfg["g"], F.N)
    r = None
    if kind == "trigonometric":
        from .rstructs import constant_r_from_expansion
        if cfg["R"] is None:
            raise ConfigError("trigonometric KZ needs R (a Hecke deformation of F)", "R")
        r = constant_r_from_expansion(_braiding(cfg["R"]), F)
    gm = validate_g(g, F, r_const=r, strict=False)
    val = CheckReport("validate_g", PASS if gm.validated else FAIL, details={"conditions": list(gm.conditions)})
    conn = build_connection(kind, cfg["n"], cfg["kappa"], gm, r)
    s = _sampler(cfg, 3)
    return [val, check_flatness(conn, s.points(cfg["points"], cfg["n"]))]


def run_qkz(cfg):
    from .braidings import make_pair
    from .kz import build_qkz, check_holonomy, validate_g
    R = _braiding(cfg["R"], cfg["q"])
    if R.kind == "hecke" and not isinstance(R.q, (int, Fraction)):
        raise ConfigError("trigonometric qKZ needs a rational q", "q")
    F = _F_for(cfg, R)
    kind = _kind_for(cfg, R)
    pair = make_pair(R, F)
    g = parse_g(cfg["g"], R.N)
    gm = validate_g(g, F, R=R, strict=False)
    val = CheckReport("validate_g", PASS if gm.validated else FAIL, details={"conditions": list(gm.conditions)})
    p = cfg["p"] if cfg["p"] is not None else Fraction(2)
    sys = build_qkz(pair, kind, cfg["n"], gm, p, cfg["kappa"])
    s = _sampler(cfg, 4)
    pts = s.points(cfg["points"], cfg["n"], reject=lambda u: not sys.admissible(u))
    return [val, check_holonomy(sys, pts)]


def run_bethe(cfg):
    from .bethe import bethe_commutator_certify
    R = _braiding(cfg["R"])
    F = "same" if cfg["F"] == "same" else _F_for(cfg, R)
    kind = _kind_for(cfg, R)
    k, p, K = cfg["k"], cfg["p"] if cfg["p"] is not None else cfg["k"], cfg["K"]
    bound = tuple(cfg["bound"] or (K, K))
    rep = bethe_commutator_certify(k, p, kind, R, F, K, bound, q_values=_q_values(cfg, R),
                                   T0_identity=cfg["T0_identity"], relations_K=cfg["relations_K"])
    if not cfg["certificates"]:
        rep.certificates = []
    return [rep]


def run_newton(cfg):
    from .bethe import newton_certify
    R = _braiding(cfg["R"])
    F = "same" if cfg["F"] == "same" else _F_for(cfg, R)
    kind = _kind_for(cfg, R)
    rep = newton_certify(cfg["k"], kind, R, F, cfg["K"], q_values=_q_values(cfg, R),
                         relations_K=cfg["relations_K"])
    if not cfg["certificates"]:
        rep.certificates = []
    return [rep]


def _all_configs(seed, points):
    """The standard battery behind ``check all``."""
    base = {"seed": seed, "points": points}
    cfgs = []
    for R in ("flip:2", "superflip:1,1", "dj_hecke:2", "uq_sl11"):
        cfgs.append(("braiding", {**base, "R": R}))
        cfgs.append(("baxter", {**base, "R": R}))
    for R, F in (("flip:2", None), ("dj_hecke:2", None), ("dj_hecke:2", "same"),
                 ("uq_sl11", "superflip:1,1"), ("superflip:1,1", "same")):
        cfgs.append(("compat", {**base, "R": R, "F": F, "ybe_n": 3}))
    cfgs.append(("rstructs", {**base, "R": "uq_sl11", "F": "superflip:1,1", "points": min(points, 5)}))
    cfgs.append(("rstructs", {**base, "R": "dj_hecke:2", "F": "flip:2", "points": min(points, 5)}))
    for F in ("flip:2", "superflip:1,1"):
        cfgs.append(("kz", {**base, "kind": "rational", "F": F, "g": "diag:1,2", "kappa": "1/2"}))
    cfgs.append(("kz", {**base, "kind": "trigonometric", "F": "superflip:1,1", "R": "uq_sl11", "g": "diag:1,-1"}))
    cfgs.append(("qkz", {**base, "R": "flip:2", "g": "diag:1,3", "p": "1", "points": min(points, 5)}))
    cfgs.append(("qkz", {**base, "R": "dj_hecke:2", "F": "flip:2", "q": "5/2", "g": "diag:1,3", "p": "2",
                         "points": min(points, 5)}))
    cfgs.append(("bethe", {**base, "R": "flip:2", "k": 1, "p": 1, "K": 3, "bound": [3, 3]}))
    cfgs.append(("bethe", {**base, "R": "dj_hecke:2", "F": "same", "k": 1, "p": 2, "K": 2, "bound": [2, 2]}))
    cfgs.append(("newton", {**base, "R": "flip:2", "k": 2, "K": 3}))
    cfgs.append(("newton", {**base, "R": "dj_hecke:2", "F": "same", "k": 2, "K": 2}))
    return [parse_config(c, s) for s, c in cfgs]


_RUNNERS = {
    "braiding": run_braiding, "compat": run_compat, "baxter": run_baxter, "rstructs": run_rstructs,
    "kz": run_kz, "qkz": run_qkz, "bethe": run_bethe, "newton": run_newton,
}


def _run_one(cfg: CheckConfig):
    """Run one config, turning module errors into failing checks."""
    t0 = time.perf_counter()
    try:
        reports = _RUNNERS[cfg.suite](cfg)
    except ConfigError:
        raise
    except Exception as exc:  # captured per check
        reports = [CheckReport(f"{cfg.suite}:error", FAIL,
                               witnesses=[{"error": type(exc).__name__, "message": str(exc)}])]
    dt = time.perf_counter() - t0
    for r in reports:
        r.details.setdefault("suite", cfg.suite)
        if not r.elapsed:
            r.elapsed = dt / max(len(reports), 1)
    return reports


def workers_from_env():
    v = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(v))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {v!r}") from None


def run_suite(cfg: CheckConfig, workers=None) -> SuiteReport:
    """Execute the checks named by ``cfg``; deterministic given the seed.

    Independent configs may run in worker processes; reports are assembled
    in config order so the output does not depend on scheduling.
    """
    t0 = time.perf_counter()
    cfgs = _all_configs(cfg["seed"], cfg["points"]) if cfg.suite == "all" else [cfg]
    workers = workers or workers_from_env()
    if workers > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_one, cfgs))
    else:
        results = [_run_one(c) for c in cfgs]
    checks = [r for rs in results for r in rs]
    return SuiteReport(cfg.suite, checks, cfg.to_dict(), time.perf_counter() - t0)
