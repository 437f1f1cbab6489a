import math
import random

import pytest
from hypothesis import given, strategies as st

from hilbcount import BiPoly, UniPoly, alg_roots, disc_y, parse_poly, poly_height, resultant_bivar
from hilbcount.polyring import PolyParseError, uni_resultant


def test_height_examples(Q, Qs2):
    assert poly_height(parse_poly("Y^2 - T", Q))[0] == 1
    assert poly_height(parse_poly("3*Y + 5", Q))[0] == 5
    H, Hp = poly_height(parse_poly("Y^2 - (1+w)*T", Qs2))
    assert H == pytest.approx(1 + math.sqrt(2)) and Hp >= 1


def test_evaluate_examples(Q, Qs2):
    F = parse_poly("X2^2 - X1^3", Q)
    val, l = F.evaluate(Q(2), Q(3))
    assert val == Q(1) and l == 2
    assert parse_poly("Y^2 - T", Q)(Q(4), Q(2)) == Q(0)
    G = parse_poly("X2^2 - X1^3", Qs2)
    assert G(Qs2([1, 1]), Qs2(0)) == Qs2([-7, -5])


def test_disc_examples(Q):
    D, deg = disc_y(parse_poly("Y^2 - T", Q))
    assert D == UniPoly.from_ints(Q, [0, 4]) and deg == 1
    D, deg = disc_y(parse_poly("Y^3 + T*Y + T", Q))
    assert D == UniPoly.from_ints(Q, [0, 0, -27, -4]) and deg == 3
    D, deg = disc_y(parse_poly("Y^2 - 2", Q))
    assert D == UniPoly.from_ints(Q, [8]) and deg == 0


def test_resultant_examples(Q):
    F = parse_poly("Y^2 - T", Q)
    assert resultant_bivar(F, parse_poly("Y", Q), wrt=1) == UniPoly.from_ints(Q, [0, -1])
    assert not resultant_bivar(F, F, wrt=1)
    C = parse_poly("X2^2 - X1^3", Q)
    R = resultant_bivar(C, C.diff(0), wrt=0)
    assert R and R == UniPoly.from_ints(Q, [0, 0, 0, 0, -27])


def test_resultant_detects_planted_factor(Q):
    rng = random.Random(3)
    for _ in range(10):
        a, b = rng.randint(-5, 5), rng.randint(1, 5)
        common = parse_poly(f"Y - {a}*T - {b}", Q)
        F = common * parse_poly("Y^2 + T", Q)
        G = common * parse_poly(f"Y + {b}", Q)
        assert not resultant_bivar(F, G, wrt=1)
        assert resultant_bivar(F, parse_poly(f"Y + {b}", Q), wrt=1)


def test_alg_roots_examples(Q, Qs2):
    assert alg_roots(Q, UniPoly.from_ints(Q, [-9, 0, 1])) == {Q(3), Q(-3)}
    assert alg_roots(Qs2, UniPoly.from_ints(Qs2, [-2, 0, 1])) == {Qs2([0, 1]), Qs2([0, -1])}
    assert alg_roots(Q, UniPoly.from_ints(Q, [-2, 0, 1])) == set()


@pytest.mark.parametrize("fld", ["Q", "Qi", "Qs2"])
def test_alg_roots_completeness(request, fld):
    K = request.getfixturevalue(fld)
    rng = random.Random(11)
    irreducible = UniPoly.from_ints(K, [3, 0, 0, 1]) if K.degree == 1 else UniPoly.from_ints(K, [-3, 0, 0, 1])
    for _ in range(15):
        roots = {K([rng.randint(-20, 20) for _ in range(K.degree)]) for _ in range(rng.randint(1, 3))}
        Qp = irreducible
        for r in roots:
            Qp = Qp * UniPoly(K, [-r, K.one()])
        assert alg_roots(K, Qp) == roots


def test_disc_specializes(Q, Qs2):
    for K in (Q, Qs2):
        P = parse_poly("Y^3 + T*Y + T", K)
        D, _ = disc_y(P)
        for t in range(-5, 6):
            t0 = K([t] + [1] * (K.degree - 1))
            a = P.at_x1(t0)
            # disc of the monic cubic Y^3 + pY + q
            p, q = a.coeffs[1], a.coeffs[0]
            assert D(t0) == -4 * p**3 - 27 * q**2


@given(st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40))
def test_evaluation_height_bound(a, b, c, e):
    from hilbcount import NumberField

    K = NumberField([-2, 0, 1])
    F = parse_poly("X2^2 - 3*X1^3 + (1+w)*X1*X2 - 5", K)
    x1, x2 = K([a, b]), K([c, e])
    val, l = F.evaluate(x1, x2)
    _, Hp = poly_height(F)
    bound = l * Hp * max(1, x1.house()) ** F.m * max(1, x2.house()) ** F.n
    assert val.house() <= bound * (1 + 1e-9)


def test_parser(Q, Qs2):
    assert parse_poly("Y^2-T", Q) == parse_poly(" Y ^ 2 - T ", Q)
    assert parse_poly("X2^2 - X1^3", Q).names == ("X1", "X2")
    with pytest.raises(PolyParseError):
        parse_poly("X2^^2 - X1", Q)
    with pytest.raises(PolyParseError):
        parse_poly("2Y", Q)
    with pytest.raises(PolyParseError):
        parse_poly("Y*X1", Q)
    assert parse_poly("(1+w)*Y + 2*w", Qs2).terms[(0, 1)] == Qs2([1, 1])


def test_shift_substitution(Q):
    F = parse_poly("Y^2 - T", Q)
    G = F.substitute_x2(BiPoly(Q, {(6, 0): 1, (0, 1): 1}))
    assert G == parse_poly("(T^6 + Y)^2 - T", Q)


def test_uni_resultant(Q):
    a = UniPoly.from_ints(Q, [-2, 0, 1])
    b = UniPoly.from_ints(Q, [-3, 1])
    assert uni_resultant(a, b) == Q(7)
