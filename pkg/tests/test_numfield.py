import itertools
import math

import pytest
from hypothesis import given, strategies as st

from hilbcount import NumberField, abs_norm, enumerate_box, house
from hilbcount.errors import NotIrreducible, NotMonic
from hilbcount.numfield import nf_new


def test_construction_examples(Qs2, Qi):
    assert Qs2.degree == 2 and Qs2.disc_f == 8
    assert Qi.degree == 2 and Qi.ramified_primes == frozenset({2})
    roots = sorted(Qi.embeddings, key=lambda z: z.imag)
    assert roots[0] == pytest.approx(-1j) and roots[1] == pytest.approx(1j)
    with pytest.raises(NotIrreducible):
        nf_new([-4, 0, 1])
    with pytest.raises(NotMonic):
        nf_new([1, 0, 2])


def test_house_examples(Q, Qi, Qs2):
    assert house(Qs2, Qs2([1, 1])) == pytest.approx(1 + math.sqrt(2))
    assert house(Q, Q(-7)) == 7
    assert house(Qi, Qi([1, 1])) == pytest.approx(math.sqrt(2))


def test_norm_examples(Qi, Qs2):
    assert abs_norm(Qs2, Qs2([1, 1])) == 1
    assert abs_norm(Qs2, Qs2(3)) == 9
    assert abs_norm(Qi, Qi([1, 2])) == 5


def test_cubic_field_discriminant():
    K = NumberField([-2, 0, 0, 1])
    assert K.disc_f == -108
    assert K.ramified_primes == frozenset({2, 3})


def _brute_box(K, B):
    # independent oracle: wide coordinate box, exact comparison through the house
    R = int(math.ceil(B * K.degree * max(1.0, K.basis_height))) + 2
    out = set()
    for coords in itertools.product(range(-R, R + 1), repeat=K.degree):
        x = K(list(coords))
        if K.house(x) <= B + 1e-9:
            out.add(x.coords)
    return out


def test_box_examples(Q, Qi, Qs2):
    assert sorted(int(x.coords[0]) for x in enumerate_box(Q, 3)) == list(range(-3, 4))
    assert {x.coords for x in enumerate_box(Qi, 1)} == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}
    box = enumerate_box(Qs2, 3).to_list()
    assert len(box) == 15
    assert {x.coords for x in box} == _brute_box(Qs2, 3)


@pytest.mark.parametrize("B", [1, 2.5, 4, 7.3])
def test_box_matches_oracle(Qi, Qs2, B):
    for K in (Qi, Qs2):
        got = [x.coords for x in enumerate_box(K, B)]
        assert len(got) == len(set(got))
        assert set(got) == _brute_box(K, B)


def test_box_monotone_and_scaling(Qi):
    sizes = [len(enumerate_box(Qi, B).to_list()) for B in (2, 4, 8, 16)]
    assert sizes == sorted(sizes)
    ratios = [n / B**2 for n, B in zip(sizes, (2, 4, 8, 16))]
    assert 1 < min(ratios) and max(ratios) < 6


coords2 = st.lists(st.integers(-50, 50), min_size=2, max_size=2)


@given(coords2, coords2, coords2)
def test_ring_axioms(a, b, c):
    K = NumberField([-2, 0, 1])
    x, y, z = K(a), K(b), K(c)
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z


@given(st.lists(st.integers(-30, 30), min_size=3, max_size=3))
def test_norm_multiplicative_and_bounded(c):
    K = NumberField([-2, 0, 0, 1])
    x = K(c)
    y = K([1, 1, 0])
    assert K.abs_norm(x * y) == K.abs_norm(x) * K.abs_norm(y)
    assert K.abs_norm(x) <= K.house(x) ** 3 * (1 + 1e-9) + 1e-6


def test_galois_stability(Qs2):
    # swapping conjugates does not change the house
    x = Qs2([3, -2])
    xbar = Qs2([3, 2])
    assert house(Qs2, x) == pytest.approx(house(Qs2, xbar))


def test_inverse_and_division(Qs2):
    x = Qs2([1, 1])
    assert x * x.inverse() == Qs2.one()
    assert (Qs2([3, 3]) / Qs2(3)) == x
    assert Qs2(6).exquo(Qs2(3)) == Qs2(2)


def test_boundary_is_included(Qs2):
    # house(1 + sqrt 2) sits exactly on the bound and is kept
    box = enumerate_box(Qs2, 1 + math.sqrt(2))
    assert (1, 1) in {x.coords for x in box}


def test_pickle_roundtrip(Qs2):
    import pickle

    x = Qs2([2, 5])
    y = pickle.loads(pickle.dumps(x))
    assert y == x and y.field == Qs2
