import random

import pytest
import sympy
from hypothesis import given, strategies as st

from hilbcount import CycleType, UniPoly, c2_model, factor_pattern, s3_model, split_prime, totally_split_primes
from hilbcount.errors import NotSquarefree, RamifiedPrime
from hilbcount.modp import (
    ExtensionField, PrimeField, factor_squarefree, is_good_prime, p_mul, p_strip, roots_in_field,
)


def test_split_examples(Qs2):
    ids = split_prime(Qs2, 7)
    assert len(ids) == 2 and all(I.norm == 7 for I in ids)
    assert sorted(I.root for I in ids) == [3, 4]
    ids = split_prime(Qs2, 5)
    assert len(ids) == 1 and ids[0].norm == 25
    with pytest.raises(RamifiedPrime):
        split_prime(Qs2, 2)


def test_residue_degrees_sum():
    from hilbcount import NumberField

    K = NumberField([-2, 0, 0, 1])
    for p in sympy.primerange(5, 600):
        assert sum(I.residue_degree for I in split_prime(K, p)) == 3


def test_pattern_examples(Q):
    (I11,) = split_prime(Q, 11)
    (I5,) = split_prime(Q, 5)
    (I3,) = split_prime(Q, 3)
    assert factor_pattern(UniPoly.from_ints(Q, [-3, 0, 1]), I11) == CycleType.parse("[1 1]")
    assert factor_pattern(UniPoly.from_ints(Q, [-3, 0, 1]), I5) == CycleType.parse("[2]")
    assert factor_pattern(UniPoly.from_ints(Q, [1, 1, 0, 1]), I3) == CycleType.parse("[1 2]")
    with pytest.raises(NotSquarefree):
        factor_pattern(UniPoly.from_ints(Q, [1, 2, 1]), I5)


def test_totally_split_examples(Q, Qi, Qs2):
    assert [p for p, _ in totally_split_primes(Qs2, 3, 3)] == [7, 17, 23]
    assert [p for p, _ in totally_split_primes(Qi, 3, 2)] == [5, 13]
    assert [p for p, _ in totally_split_primes(Q, 100, 3)] == [101, 103, 107]


def test_split_density(Qs2):
    primes = list(sympy.primerange(3, 2000))[:200]
    frac = sum(len(split_prime(Qs2, p)) == 2 for p in primes) / len(primes)
    assert 0.3 <= frac <= 0.7


def test_good_prime_examples(Q):
    C2, S3 = c2_model(Q), s3_model(Q)
    assert not is_good_prime(C2, split_prime(Q, 2)[0])
    assert is_good_prime(C2, split_prime(Q, 5)[0])
    assert not is_good_prime(S3, split_prime(Q, 3)[0])


def _random_monic(F, deg, rng):
    return [F.random(rng) for _ in range(deg)] + [F.one]


@pytest.mark.parametrize("field", [PrimeField(2), PrimeField(3), PrimeField(101), ExtensionField(2, [1, 1, 1]), ExtensionField(3, [1, 0, 1])])
def test_factor_products(field):
    rng = random.Random(5)
    for _ in range(8):
        # product of distinct random monic irreducibles found by factoring random polys
        f = _random_monic(field, rng.randint(2, 6), rng)
        factors = factor_squarefree(field, f, seed=1) if _squarefree(field, f) else None
        if factors is None:
            continue
        prod = [field.one]
        for g in factors:
            prod = p_mul(field, prod, g)
        assert prod == p_strip(field, list(f))
        assert factors == factor_squarefree(field, f, seed=99) or sorted(map(len, factors)) == sorted(map(len, factor_squarefree(field, f, seed=99)))


def _squarefree(F, f):
    from hilbcount.modp import is_squarefree

    return is_squarefree(F, f)


@given(st.lists(st.integers(0, 12), min_size=1, max_size=5, unique=True))
def test_roots_in_field_exact(roots):
    F = PrimeField(13)
    f = [1]
    for r in roots:
        f = p_mul(F, f, [(-r) % 13, 1])
    assert sorted(roots_in_field(F, f)) == sorted(roots)


@given(st.integers(0, 2**32))
def test_edf_seed_independent(seed):
    F = PrimeField(31)
    # (Y - 3)(Y - 7)(Y^2 + 1)(Y^2 - 3): 31 = 3 mod 4 and 3 is not a QR mod 31
    f = [1]
    for g in ([-3 % 31, 1], [-7 % 31, 1], [1, 0, 1], [28, 0, 1]):
        f = p_mul(F, f, g)
    ref = sorted(map(tuple, factor_squarefree(F, f, seed=0)))
    assert sorted(map(tuple, factor_squarefree(F, f, seed=seed))) == ref
    assert sorted(len(g) - 1 for g in ref) == [1, 1, 2, 2]


def test_cycle_type_text():
    ct = CycleType.parse("[2 1]")
    assert str(ct) == "[1 2]" and ct.degree == 3
    assert ct.subsums() == frozenset({0, 1, 2, 3})
    assert CycleType.parse("[1 1 1]").is_identity()


def test_prime_ideal_reduce(Qs2):
    I = split_prime(Qs2, 7)[0]
    x = Qs2([2, 5])
    assert I.reduce(x) == (2 + 5 * I.root) % 7
    assert I.label().startswith("7@")
