from fractions import Fraction

import pytest

from braidcheck.braidings import catalog
from braidcheck.rstructs import (
    alternative_form_check, check_commutation, check_constant_r, check_r_properties, constant_r_from_expansion,
    jacobi_check, jacobi_expression, rational_r, schouten_AA_formula, schouten_defect, sklyanin_bracket,
    sklyanin_skew_check, trigonometric_r,
)
from braidcheck.sampling import RationalSampler
from oracles import sympy_derivative_oracle
from braidcheck.tensor import PositionContext, TensorOp, embed_ov_pair, place

P = catalog("flip", 2)
S = catalog("superflip", 1, 1)


@pytest.mark.parametrize("R,F,want", [
    ("uq_sl11", S, [[1, 0, 0, 0], [0, 0, 2, 0], [0, 0, 0, 0], [0, 0, 0, -1]]),
    ("dj_hecke", P, [[1, 0, 0, 0], [0, 0, 2, 0], [0, 0, 0, 0], [0, 0, 0, 1]]),
])
def test_constant_r_matches_derivative_oracle(R, F, want):
    Rb = catalog(R, 2) if R == "dj_hecke" else catalog(R)
    r = constant_r_from_expansion(Rb, F)
    assert [list(x) for x in r.to_dense()] == sympy_derivative_oracle(Rb.op @ F.op)
    assert r == TensorOp.from_dense(2, 2, want)
    assert check_constant_r(r, F).passed


def test_constant_r_wrong_partner():
    with pytest.raises(ValueError):
        constant_r_from_expansion(catalog("uq_sl11"), P)


def pts(seed, n, dim=3):
    return RationalSampler(seed, 15).points(n, dim, reject=lambda p: 0 in p)


@pytest.mark.parametrize("F", [P, S])
def test_rational_current(F):
    assert check_r_properties(rational_r(F), pts(1, 10)).passed


@pytest.mark.parametrize("R,F", [("uq_sl11", S), ("dj_hecke", P)])
def test_trigonometric_current(R, F):
    Rb = catalog(R, 2) if R == "dj_hecke" else catalog(R)
    r = trigonometric_r(F, constant_r_from_expansion(Rb, F))
    assert check_r_properties(r, pts(2, 10)).passed
    assert alternative_form_check(r, [p[:2] for p in pts(3, 5)]).passed
    for p in pts(4, 3):
        assert schouten_defect(r, r, p).is_zero()


def test_trig_current_with_bad_constant_fails():
    bad = trigonometric_r(S, TensorOp.from_dense(2, 2, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]))
    assert not check_r_properties(bad, pts(5, 2)).passed


def test_schouten_constant():
    r = constant_r_from_expansion(catalog("uq_sl11"), S)
    assert schouten_defect(r, r, F=S).is_zero()
    with pytest.raises(ValueError):
        schouten_defect(r, r)


@pytest.mark.parametrize("F", [P, S])
def test_schouten_AA(F):
    for p in pts(6, 4):
        assert schouten_AA_formula(F, p).passed


def test_commutation_lemma():
    s = RationalSampler(7, 9)
    As = [s.matrix(2) for _ in range(3)]
    R = catalog("dj_hecke", 2, q=Fraction(5, 2))
    r = rational_r(P)
    assert check_commutation(R, P, As, [p[:2] for p in pts(8, 3)], r).passed
    U = catalog("uq_sl11", q=Fraction(3))
    assert check_commutation(U, S, As).passed
    # control: with a plain placement instead of A_ov2 the grading signs are lost
    ctx = PositionContext(S.op, 3)
    RR13 = embed_ov_pair(U.op @ S.op, 1, 3, ctx)
    A2 = place(As[0], (2,), 3)
    assert RR13 @ A2 != A2 @ RR13


def brute_sklyanin(X, Y, u, v, F):
    """[X (x) 1 + 1 (x) Y, P/(u - v)] with explicit Kronecker products."""
    I = TensorOp.identity(2, 1)
    XX = X.kron(I) + I.kron(Y)
    r = F.op.scale(Fraction(1) / (u - v))
    return XX @ r - r @ XX


def test_sklyanin_flip_is_ordinary():
    s = RationalSampler(9, 9)
    X, Y = s.matrix(2), s.matrix(2)
    assert sklyanin_bracket(X, Y, 3, 5, rational_r(P)) == brute_sklyanin(X, Y, 3, 5, P)


@pytest.mark.parametrize("F,R", [(P, "dj_hecke"), (S, "uq_sl11")])
def test_sklyanin_skew_and_jacobi(F, R):
    Rb = catalog(R, 2) if R == "dj_hecke" else catalog(R)
    rs = [rational_r(F), trigonometric_r(F, constant_r_from_expansion(Rb, F))]
    s = RationalSampler(10, 9)
    for r in rs:
        for _ in range(2):
            X, Y, Z = s.matrix(2), s.matrix(2), s.matrix(2)
            for (u, v, w) in pts(11, 2):
                assert sklyanin_skew_check(X, Y, u, v, r).passed
                assert jacobi_check(X, Y, Z, u, v, w, r).passed


def test_jacobi_single_term_is_not_zero():
    s = RationalSampler(12, 9)
    X, Y, Z = s.matrix(2), s.matrix(2), s.matrix(2)
    assert not jacobi_expression(X, Y, Z, 2, 5, -3, rational_r(P)).is_zero()


def test_non_involutive_F_refused():
    with pytest.raises(ValueError):
        rational_r(catalog("dj_hecke", 2, q=Fraction(2)))
