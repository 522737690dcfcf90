from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from braidcheck.braidings import (
    NotSkewInvertible, catalog, check_braid, check_braided_ybe, check_compatible, classify_symmetry,
    f_trace, make_pair, parse_braiding_spec, skew_inverse,
)
from braidcheck.sampling import RationalSampler
from braidcheck.scalars import Q
from braidcheck.tensor import TensorOp

from oracles import dense, f_trace_contraction

NAMES = [("flip", (2,)), ("superflip", (1, 1)), ("dj_hecke", (2,)), ("uq_sl11", ())]


@pytest.mark.parametrize("name,params", NAMES)
def test_catalog_braid_relation(name, params):
    assert check_braid(catalog(name, *params)).passed


def test_classification():
    kinds = [classify_symmetry(catalog(n, *p)).kind for n, p in NAMES]
    assert kinds == ["involutive", "involutive", "hecke", "hecke"]
    assert classify_symmetry(catalog("dj_hecke", 3)).q == Q
    assert classify_symmetry(catalog("dj_hecke", 2, q=Fraction(5, 2))).q == Fraction(5, 2)


def test_hecke_relation_by_hand():
    # (R - qI)(R + q^-1 I) = 0, computed directly
    R = catalog("uq_sl11").op
    I = TensorOp.identity(2, 2)
    assert (R - I.scale(Q)) @ (R + I.scale(1 / Q)) == TensorOp.zero(2, 2)


def test_uq_sl11_at_one_is_superflip():
    assert catalog("uq_sl11").op.evaluate(1) == catalog("superflip", 1, 1).op


def test_dj_hecke_at_one_is_flip():
    assert catalog("dj_hecke", 3).op.evaluate(1) == catalog("flip", 3).op


def test_not_a_braiding():
    X = TensorOp.from_dense(2, 2, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 1, 1]])
    assert classify_symmetry(X).kind == "neither"


def test_spec_parsing():
    assert parse_braiding_spec("superflip:1,1").name == "superflip:1,1"
    assert parse_braiding_spec("dj_hecke:2", q=Fraction(2)).q == 2
    with pytest.raises(KeyError):
        parse_braiding_spec("nope")


@pytest.mark.parametrize("R", ["flip:2", "dj_hecke:2", "uq_sl11", "superflip:1,1"])
def test_compatible_with_itself(R):
    B = parse_braiding_spec(R)
    assert check_compatible(B, B).passed


@pytest.mark.parametrize("R", ["flip:2", "dj_hecke:2", "superflip:1,1"])
def test_compatible_with_flip(R):
    assert check_compatible(parse_braiding_spec(R), catalog("flip", 2)).passed


def test_uq_sl11_superflip_compatible_and_incompatible_pairs():
    assert check_compatible(catalog("uq_sl11"), catalog("superflip", 1, 1)).passed
    # a Hecke F is not a valid partner for an involutive R
    rep = check_compatible(catalog("flip", 2), catalog("dj_hecke", 2))
    assert not rep.passed and rep.witnesses
    with pytest.raises(ValueError):
        make_pair(catalog("uq_sl11"), catalog("dj_hecke", 2))


@pytest.mark.parametrize("R,F", [("dj_hecke:2", "flip:2"), ("uq_sl11", "superflip:1,1"), ("flip:2", "flip:2")])
@pytest.mark.parametrize("n", [3, 4])
def test_braided_ybe_involutive_F(R, F, n):
    assert check_braided_ybe(parse_braiding_spec(R), parse_braiding_spec(F), n).passed


def test_braided_ybe_non_involutive_F_fails():
    # RR = R F with F = R Hecke: the ov-embedding of RR_23 needs F^2 = I
    R = catalog("dj_hecke", 2)
    rep = check_braided_ybe(R, R, 3)
    assert not rep.passed


@pytest.mark.parametrize("F", ["flip:2", "superflip:1,1", "dj_hecke:2", "uq_sl11"])
def test_skew_inverse_identities(F):
    B = parse_braiding_spec(F, q=Fraction(2))
    sk = skew_inverse(B)
    assert sk.report.passed


def test_skew_inverse_known_values():
    # C = I for the flip, C = diag(1, -1) for the super flip
    assert skew_inverse(catalog("flip", 2)).c == TensorOp.identity(2, 1)
    assert skew_inverse(catalog("superflip", 1, 1)).c == TensorOp.from_dense(2, 1, [[1, 0], [0, -1]])


def test_not_skew_invertible():
    with pytest.raises(NotSkewInvertible):
        skew_inverse(TensorOp.identity(2, 2))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["flip:2", "superflip:1,1", "dj_hecke:2"]), st.sampled_from([1, 2]))
def test_f_trace_matches_contraction(seed, F, k):
    B = parse_braiding_spec(F, q=Fraction(2))
    sk = skew_inverse(B)
    s = RationalSampler(seed, 7)
    n = 3
    X = TensorOp.from_dense(2, n, [[s.rational() for _ in range(8)] for _ in range(8)])
    got = f_trace(X, k, sk)
    want = f_trace_contraction(dense(sk.c), dense(X), 2, n, k)
    assert dense(got) == want


def test_f_trace_full_is_scalar():
    sk = skew_inverse(catalog("superflip", 1, 1))
    assert f_trace(TensorOp.identity(2, 1), 1, sk) == 0   # superdimension 1 - 1
    assert f_trace(TensorOp.identity(2, 2), 2, skew_inverse(catalog("flip", 2))) == 4
