from fractions import Fraction

import pytest
import sympy

from braidcheck.braidings import catalog, make_pair
from braidcheck.kz import (
    ValidationFailed, build_connection, build_qkz, check_flatness, check_holonomy, curvature_defect,
    derivative_symmetry_defect, holonomy_defect, validate_g,
)
from braidcheck.rstructs import constant_r_from_expansion
from braidcheck.sampling import RationalSampler
from braidcheck.tensor import TensorOp, place

P = catalog("flip", 2)
S = catalog("superflip", 1, 1)
G = TensorOp.from_dense(2, 1, [[1, 2], [3, 4]])
DIAG = TensorOp.from_dense(2, 1, [[1, 0], [0, 3]])


def pts(seed, count, n, reject=None):
    return RationalSampler(seed, 20).points(count, n, reject=reject)


def sympy_kz_matrices(n, kappa, g):
    """Ordinary rational KZ with F = P through sympy: returns (symbols, [M_i])."""
    u = sympy.symbols(f"u1:{n + 1}")

    def sp(op):
        return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in op.to_dense()])

    Ms = []
    for i in range(1, n + 1):
        M = sp(place(g, (i,), n))
        for k in range(1, n + 1):
            if k != i:
                M += sympy.Rational(kappa) * sp(place(P.op, (i, k), n)) / (u[i - 1] - u[k - 1])
        Ms.append(M)
    return u, Ms


def test_rational_matrices_and_derivatives_match_sympy():
    n, kappa = 3, Fraction(1, 2)
    conn = build_connection("rational", n, kappa, validate_g(G, P))
    u, Ms = sympy_kz_matrices(n, kappa, G)
    pt = (Fraction(2), Fraction(-1, 3), Fraction(5))
    sub = dict(zip(u, [sympy.Rational(x.numerator, x.denominator) for x in pt]))
    for i in range(1, n + 1):
        want = Ms[i - 1].subs(sub)
        got = conn.matrix(i, pt).to_dense()
        assert all(sympy.Rational(str(got[r][c])) == want[r, c] for r in range(8) for c in range(8))
        for j in range(1, n + 1):
            if j == i:
                continue
            dwant = sympy.diff(Ms[j - 1], u[i - 1]).subs(sub)
            dgot = conn.derivative(j, i, pt).to_dense()
            assert all(sympy.Rational(str(dgot[r][c])) == dwant[r, c] for r in range(8) for c in range(8))


@pytest.mark.parametrize("F", [P, S])
@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("kappa", [Fraction(1, 2), Fraction(3)])
def test_rational_flatness(F, n, kappa):
    g = G if F is P else DIAG
    conn = build_connection("rational", n, kappa, validate_g(g, F))
    assert check_flatness(conn, pts(n, 5, n)).passed


def test_trigonometric_flatness():
    r = constant_r_from_expansion(catalog("uq_sl11"), S)
    g = TensorOp.from_dense(2, 1, [[1, 0], [0, -1]])
    conn = build_connection("trig", 3, Fraction(2), validate_g(g, S, r_const=r), r)
    assert check_flatness(conn, pts(1, 5, 3, reject=lambda u: 0 in u)).passed


def test_trig_needs_g_commuting_with_r():
    r = constant_r_from_expansion(catalog("dj_hecke", 2), P)
    gm = validate_g(G, P, r_const=r, strict=False)
    assert not gm.validated
    conn = build_connection("trig", 3, 1, gm, r)
    assert not check_flatness(conn, pts(2, 2, 3, reject=lambda u: 0 in u)).passed


def test_invalid_g_superflip():
    with pytest.raises(ValidationFailed) as e:
        validate_g(G, S)
    assert e.value.witness is not None
    gm = validate_g(G, S, strict=False)
    conn = build_connection("rational", 3, 1, gm)
    assert any(not curvature_defect(conn, 1, 2, p).is_zero() for p in pts(3, 3, 3))


def test_derivative_symmetry():
    conn = build_connection("rational", 3, 1, validate_g(DIAG, S))
    for p in pts(4, 3, 3):
        assert derivative_symmetry_defect(conn, 1, 2, p).is_zero()


def test_bad_inputs():
    with pytest.raises(ValueError):
        validate_g(G, catalog("dj_hecke", 2, q=Fraction(2)))
    with pytest.raises(ValueError):
        build_connection("trig", 3, 1, validate_g(G, P))
    with pytest.raises(ZeroDivisionError):
        build_connection("rational", 3, 1, validate_g(G, P)).matrix(1, (1, 1, 2))


QKZ = [(("flip", 2), "rational"), (("dj_hecke", 2), "trig")]


@pytest.mark.parametrize("R,kind", QKZ)
@pytest.mark.parametrize("g", [TensorOp.identity(2, 1), DIAG])
@pytest.mark.parametrize("p", [1, 2])
def test_qkz_holonomy(R, kind, g, p):
    pair = make_pair(catalog(*R, q=Fraction(5, 2)), P)
    sys = build_qkz(pair, kind, 3, validate_g(g, P, R=pair.R), p)
    ps = pts(5, 4, 3, reject=lambda u: not sys.admissible(u))
    assert check_holonomy(sys, ps).passed


def test_qkz_generic_g_breaks_holonomy():
    pair = make_pair(catalog("dj_hecke", 2, q=Fraction(5, 2)), P)
    gm = validate_g(G, P, R=pair.R, strict=False)
    assert not gm.validated
    sys = build_qkz(pair, "trig", 3, gm, 2)
    u = pts(6, 1, 3, reject=lambda u: not sys.admissible(u))[0]
    assert not holonomy_defect(sys, 1, 2, u).is_zero()


def test_qkz_n2_by_hand():
    # n = 2, F = P = R, g = I: M_1(u) = RR(u1,u2), M_2(u) = RR(u2+p, u1)
    pair = make_pair(P, P)
    sys = build_qkz(pair, "rational", 2, validate_g(TensorOp.identity(2, 1), P), 3)
    u = (Fraction(1, 2), Fraction(7))
    assert sys.matrix(1, u) == sys.RR(*u)
    assert sys.matrix(2, u) == P.op @ sys.RR(u[1] + 3, u[0]) @ P.op


def test_qkz_bad_parameters():
    pair = make_pair(P, P)
    gm = validate_g(TensorOp.identity(2, 1), P)
    with pytest.raises(ValueError):
        build_qkz(pair, "rational", 3, gm, 0)
    with pytest.raises(ValueError):
        build_qkz(pair, "rational", 3, gm, 1, kappa=0)
