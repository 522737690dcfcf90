"""Acceptance suite: twelve criteria, exact equality throughout.

Each criterion is a test; its outcome is also recorded in RESULTS and printed
as one line per criterion at the end of the pytest run (or by running this
file directly).  Time limits are asserted along with the mathematics.
"""

import time
from fractions import Fraction
from itertools import product

import pytest

from braidcheck.bethe import (
    EvaluationOracle, bethe_commutator_certify, bethe_commutator_coefficients, elementary_symmetric,
    newton_certify, newton_defect, skew_symmetrizer,
)
from braidcheck.braidings import (
    catalog, check_braid, check_braided_ybe, check_compatible, classify_symmetry, f_trace, make_pair,
    skew_inverse,
)
from braidcheck.currents import CurrentRMatrix, baxterize, check_param_ybe, hqa_degeneration
from braidcheck.freealg import certificate_from_json, defining_relations, replay_certificate
from braidcheck.kz import build_connection, build_qkz, check_flatness, check_holonomy, holonomy_defect, validate_g
from braidcheck.rstructs import (
    check_constant_r, check_r_properties, constant_r_from_expansion, jacobi_check, rational_r,
    schouten_AA_formula, schouten_defect, sklyanin_skew_check, trigonometric_r,
)
from braidcheck.sampling import RationalSampler
from braidcheck.scalars import Q
from braidcheck.suite import parse_config, run_suite
from braidcheck.tensor import TensorOp

from oracles import dense, f_trace_contraction, sympy_derivative_oracle

RESULTS = {}

P = catalog("flip", 2)
S = catalog("superflip", 1, 1)
H = catalog("dj_hecke", 2)
U = catalog("uq_sl11")
CATALOG = [P, S, H, U]
Z2 = TensorOp.zero(2, 2)


def record(n, title, ok, note=""):
    RESULTS[n] = (title, ok, note)


def timed(limit):
    class _T:
        def __enter__(self):
            self.t0 = time.perf_counter()
            return self

        def __exit__(self, *exc):
            self.dt = time.perf_counter() - self.t0
            return False

        def ok(self):
            return self.dt < limit
    return _T()


def pts(seed, count, dim, reject=None):
    return RationalSampler(seed, 30).points(count, dim, reject=reject)


# 1 -----------------------------------------------------------------------------

def test_01_catalog_structure():
    with timed(1) as t:
        braids = all(check_braid(B).passed for B in CATALOG)
        kinds = [classify_symmetry(B).kind for B in CATALOG]
        limit = U.op.evaluate(1) == S.op
    ok = braids and kinds == ["involutive", "involutive", "hecke", "hecke"] and limit and t.ok()
    record(1, "catalog structure", ok, f"{t.dt:.2f}s")
    assert ok


# 2 -----------------------------------------------------------------------------

COMPAT_PAIRS = ([(B, P) for B in CATALOG] + [(B, B) for B in CATALOG] + [(U, S)])


def _ybe_pairs():
    return [(B, P) for B in CATALOG] + [(P, P), (S, S), (U, S)]


def test_02_compatibility_and_braided_ybe():
    with timed(5) as t:
        comp = [check_compatible(R, F).passed for R, F in COMPAT_PAIRS]
        ybe = [check_braided_ybe(R, F, n).passed for R, F in _ybe_pairs() for n in (3, 4)]
    ok = all(comp) and all(ybe) and t.ok()
    prev = RESULTS.get(2)
    if prev is None or prev[1]:
        record(2, "compatibility and braided YBE", ok, f"{t.dt:.2f}s")
    assert ok


@pytest.mark.xfail(strict=True, reason="braided YBE for RR = R F with F = R Hecke does not hold exactly")
def test_02b_braided_ybe_hecke_RR():
    # For F = R Hecke, RR = R^2 and the identity reduces to
    # T^2 S T^2 S = S^3 T^2 S^-1 T^2 in the Hecke algebra (T = R12, S = R23),
    # which holds only at q = +-1.  The witness below is exact.
    reps = [check_braided_ybe(B, B, n) for B in (H, U) for n in (3, 4)]
    failed = [r for r in reps if not r.passed]
    note = ""
    if failed:
        w = failed[0].witnesses[0]
        note = f"(R,R) braided YBE fails for Hecke R: entry {w['entry']}, difference {w['difference']}"
        record(2, "compatibility and braided YBE", False, note)
    assert not failed, note


# 3 -----------------------------------------------------------------------------

def test_03_baxterization():
    with timed(5) as t:
        good = []
        for i, B in enumerate(CATALOG):
            kind = "rational" if B.kind == "involutive" else "trig"
            Bq = B.at(Fraction(5, 2)) if B.kind == "hecke" else B
            good.append(check_param_ybe(baxterize(Bq, kind), pts(100 + i, 20, 3, lambda p: 0 in p)).passed)
        good.append(check_param_ybe(baxterize(U, "trig"), pts(110, 3, 3, lambda p: 0 in p)).passed)
        bad = check_param_ybe(CurrentRMatrix("trigonometric", H.at(Fraction(5, 2)), sign=1),
                              pts(120, 20, 3, lambda p: 0 in p))
    ok = all(good) and not bad.passed and bool(bad.witnesses) and t.ok()
    record(3, "Baxterization", ok, f"{t.dt:.2f}s")
    assert ok


# 4 -----------------------------------------------------------------------------

def test_04_f_trace():
    with timed(5) as t:
        skews = [skew_inverse(F) for F in (P, S, H.at(Fraction(2)))]
        idents = all(sk.report.passed for sk in skews)
        agree = []
        s = RationalSampler(4, 9)
        for trial in range(10):
            sk = skews[trial % 3]
            k = 1 + trial % 2
            X = TensorOp.from_dense(2, 2, [[s.rational() for _ in range(4)] for _ in range(4)])
            got = f_trace(X, k, sk)
            got = [[got]] if k == 2 else dense(got)
            agree.append(got == f_trace_contraction(dense(sk.c), dense(X), 2, 2, k))
    ok = idents and all(agree) and t.ok()
    record(4, "F-trace", ok, f"{t.dt:.2f}s")
    assert ok


# 5 -----------------------------------------------------------------------------

def test_05_symmetrizers():
    with timed(10) as t:
        I = TensorOp.identity(2, 2)
        closed = skew_symmetrizer(H, 2).op == (I.scale(Q) - H.op).scale(1 / (Q + 1 / Q))
        idem = all(skew_symmetrizer(B, k).is_idempotent() for B in CATALOG for k in range(1, 5))
        birank = skew_symmetrizer(H, 3).is_zero()
        hqa = hqa_degeneration(H).passed and hqa_degeneration(U).passed
    ok = closed and idem and birank and hqa and t.ok()
    record(5, "symmetrizers", ok, f"{t.dt:.2f}s")
    assert ok


# 6 -----------------------------------------------------------------------------

def _replay_all(rep, polys, rels):
    nonzero = [p for p in polys if p]
    if len(nonzero) != len(rep.certificates):
        return False
    return all(replay_certificate(p, rels, certificate_from_json(c)) for p, c in zip(nonzero, rep.certificates))


def test_06_bethe_commutativity():
    with timed(600) as t:
        pair = make_pair(P, P)
        rels = defining_relations(pair, "rational", K=4)
        e1 = elementary_symmetric("rational", 1, pair, 3)
        coeffs = [p for _, p in sorted(bethe_commutator_coefficients(e1, e1, (3, 3)).items())]
        rat = bethe_commutator_certify(1, 1, "rational", P, P, 3, (3, 3))
        rat_T0 = bethe_commutator_certify(1, 1, "rational", P, P, 3, (3, 3), T0_identity=True)
        replay = _replay_all(rat, coeffs, rels)
        ev = EvaluationOracle(2, G=TensorOp.from_dense(2, 1, [[2, -1], [1, 3]]))
        oracle = all(ev.evaluate(p) == Z2 for p in coeffs)
        trig = bethe_commutator_certify(1, 2, "trig", H, "same", 2, (2, 2),
                                        q_values=(Fraction(5, 2), Fraction(-7, 3)))
    reps = (rat, rat_T0, trig)
    ok = all(r.status == "pass" for r in reps) and replay and oracle and t.ok()
    record(6, "Bethe commutativity", ok, f"{t.dt:.2f}s")
    assert ok, [r.details for r in reps if r.status != "pass"]


# 7 -----------------------------------------------------------------------------

def test_07_newton_identities():
    with timed(300) as t:
        pP = make_pair(P, P)
        k1 = all(not any(newton_defect(kind, 1, pair, 3))
                 for kind, pair in (("rational", pP), ("trig", make_pair(H.at(Fraction(5, 2)), P))))
        reps = [
            newton_certify(2, "rational", P, P, 3),
            newton_certify(2, "trig", H, "same", 2, q_values=(Fraction(5, 2),)),
            newton_certify(2, "trig", H, P, 3, q_values=(Fraction(5, 2),)),
        ]
        ev = EvaluationOracle(2)
        oracle = all(ev.evaluate(c) == Z2 for c in newton_defect("rational", 2, pP, 3))
    ok = k1 and all(r.status == "pass" for r in reps) and oracle and t.ok()
    record(7, "Newton identities", ok, f"{t.dt:.2f}s")
    assert ok


# 8 -----------------------------------------------------------------------------

def test_08_braided_r_matrices():
    with timed(10) as t:
        r = constant_r_from_expansion(U, S)
        oracle = [list(x) for x in r.to_dense()] == sympy_derivative_oracle(U.op @ S.op)
        const = check_constant_r(r, S).passed
        p3 = pts(8, 10, 3, lambda p: 0 in p)
        cur = all(check_r_properties(c, p3).passed
                  for c in (rational_r(P), rational_r(S), trigonometric_r(S, r)))
        rr = schouten_defect(r, r, F=S).is_zero()
        trig = trigonometric_r(S, r)
        rr_cur = all(schouten_defect(trig, trig, p).is_zero() for p in p3[:3])
        aa = all(schouten_AA_formula(S, p).passed for p in p3[:5])
    ok = oracle and const and cur and rr and rr_cur and aa and t.ok()
    record(8, "braided r-matrices", ok, f"{t.dt:.2f}s")
    assert ok


# 9 -----------------------------------------------------------------------------

def test_09_sklyanin_bracket():
    with timed(10) as t:
        checks = []
        for F, R in ((P, H), (S, U)):
            for r in (rational_r(F), trigonometric_r(F, constant_r_from_expansion(R, F))):
                s = RationalSampler(9, 9)
                for _ in range(5):
                    X, Y, Z = s.matrix(2), s.matrix(2), s.matrix(2)
                    for (u, v, w) in pts(90, 5, 3, lambda p: 0 in p):
                        checks.append(sklyanin_skew_check(X, Y, u, v, r).passed)
                        checks.append(jacobi_check(X, Y, Z, u, v, w, r).passed)
    ok = all(checks) and len(checks) == 200 and t.ok()
    record(9, "Sklyanin bracket", ok, f"{t.dt:.2f}s")
    assert ok


# 10 ----------------------------------------------------------------------------

def test_10_classical_kz():
    G = TensorOp.from_dense(2, 1, [[1, 2], [3, 4]])
    D = TensorOp.from_dense(2, 1, [[1, 0], [0, -1]])
    with timed(30) as t:
        flat = []
        for F, g in ((P, G), (S, D)):
            for n, kappa in product((3, 4), (Fraction(1, 2), Fraction(3))):
                conn = build_connection("rational", n, kappa, validate_g(g, F))
                flat.append(check_flatness(conn, pts(10 + n, 20, n)).passed)
        r = constant_r_from_expansion(U, S)
        for n in (3, 4):
            conn = build_connection("trig", n, Fraction(1, 2), validate_g(D, S, r_const=r), r)
            flat.append(check_flatness(conn, pts(20 + n, 20, n, lambda p: 0 in p)).passed)
        bad = build_connection("rational", 3, 1, validate_g(G, S, strict=False))
        adversarial = not check_flatness(bad, pts(30, 3, 3)).passed
    ok = all(flat) and adversarial and t.ok()
    record(10, "classical KZ", ok, f"{t.dt:.2f}s")
    assert ok


# 11 ----------------------------------------------------------------------------

def test_11_quantum_kz():
    with timed(60) as t:
        hol = []
        for R, kind in ((P, "rational"), (H.at(Fraction(5, 2)), "trig")):
            pair = make_pair(R, P)
            for g in (TensorOp.identity(2, 1), TensorOp.from_dense(2, 1, [[1, 0], [0, 3]])):
                for p in (1, 2):
                    sys = build_qkz(pair, kind, 3, validate_g(g, P, R=R), p)
                    ps = pts(11, 10, 3, lambda u: not sys.admissible(u))
                    hol.append(check_holonomy(sys, ps).passed)
        pair = make_pair(H.at(Fraction(5, 2)), P)
        gm = validate_g(TensorOp.from_dense(2, 1, [[1, 2], [3, 4]]), P, R=pair.R, strict=False)
        sys = build_qkz(pair, "trig", 3, gm, 2)
        u = pts(12, 1, 3, lambda u: not sys.admissible(u))[0]
        negative = not gm.validated and not holonomy_defect(sys, 1, 2, u).is_zero()
    ok = all(hol) and len(hol) == 8 and negative and t.ok()
    record(11, "quantum KZ", ok, f"{t.dt:.2f}s")
    assert ok


# 12 ----------------------------------------------------------------------------

def test_12_determinism():
    cfg = parse_config({"suite": "all", "seed": 7})
    a = run_suite(cfg, workers=1).emit("json")
    b = run_suite(cfg, workers=1).emit("json")
    c = run_suite(cfg, workers=3).emit("json")
    ok = a == b == c
    record(12, "determinism", ok, f"{len(a)} bytes")
    assert ok


def summary_lines():
    out = []
    for n in range(1, 13):
        if n not in RESULTS:
            out.append(f"criterion {n:2d}: NOT RUN")
            continue
        title, ok, note = RESULTS[n]
        out.append(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{note}]" if note else ""))
    return out


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
