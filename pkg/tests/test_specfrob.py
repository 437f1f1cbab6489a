import random

import pytest
import sympy

from hilbcount import Certificate, CycleType, certify_group, fingerprint, frobenius_pattern, specialize, split_prime
from hilbcount.errors import BranchPoint
from hilbcount.specfrob import FingerprintIndex, RegularModel, degree_sieve


def _ideal(K, p):
    return split_prime(K, p)[0]


def test_specialize_examples(Q, C2, S3):
    rec = specialize(C2, 3)
    assert rec.disc_value == Q(12) and rec.disc_norm == 12
    with pytest.raises(BranchPoint):
        specialize(C2, 0)
    rec = specialize(S3, 1)
    assert rec.disc_value == Q(-31) and rec.disc_norm == 31


def test_frobenius_examples(Q, C2, S3):
    assert frobenius_pattern(C2, 3, _ideal(Q, 11)) == CycleType.parse("[1 1]")
    assert frobenius_pattern(C2, 3, _ideal(Q, 5)) == CycleType.parse("[2]")
    assert frobenius_pattern(S3, 1, _ideal(Q, 2)) == CycleType.parse("[3]")


def test_certify_examples(C2, S3):
    assert certify_group(C2, 3, 50) == Certificate.CERTIFIED_G
    assert certify_group(C2, 4, 50) == Certificate.NOT_G
    assert certify_group(S3, 1, 10) == Certificate.CERTIFIED_G


def test_certify_monotone(C2, S3):
    for model in (C2, S3):
        for t in range(-30, 31):
            if not model.disc(model.field(t)):
                continue
            if certify_group(model, t, 30) == Certificate.CERTIFIED_G:
                assert certify_group(model, t, 120) == Certificate.CERTIFIED_G


def test_s3_never_certifies_non_s3(S3, Q):
    # t0 with square discriminant give cyclic cubics or reducible ones
    for t in range(-200, 201):
        dv = S3.disc(Q(t))
        if dv and sympy.sqrt(int(dv.coords[0])).is_integer:
            assert certify_group(S3, t, 200) != Certificate.CERTIFIED_G


def test_fingerprint_examples(Q, C2):
    a, b, c = fingerprint(C2, 3), fingerprint(C2, 12), fingerprint(C2, 5)
    assert a.agrees_with(b)
    assert not a.agrees_with(c)
    assert a.first_difference(c).p in {7, 11, 13, 17} and a.as_dict()[_ideal(Q, 13)] != c.as_dict()[_ideal(Q, 13)]
    assert fingerprint(C2, 3).digest == fingerprint(C2, 3).digest


def _kernel(t):
    s = -1 if t < 0 else 1
    for p, e in sympy.factorint(abs(t)).items():
        if e % 2:
            s *= p
    return s


def test_fingerprint_soundness(C2):
    rng = random.Random(2024)
    for _ in range(100):
        t = rng.choice([-1, 1]) * rng.randint(2, 400)
        s = rng.randint(2, 30)
        if _kernel(t) == 1:
            continue
        assert fingerprint(C2, t).agrees_with(fingerprint(C2, t * s * s))
    done = 0
    while done < 100:
        t, u = (rng.choice([-1, 1]) * rng.randint(2, 2000) for _ in range(2))
        if _kernel(t) in (1, _kernel(u)) or _kernel(u) == 1:
            continue
        assert not fingerprint(C2, t).agrees_with(fingerprint(C2, u))
        done += 1


def test_galois_patterns_have_equal_parts(C2):
    for t in range(2, 60):
        rec = specialize(C2, t)
        if rec.certificate == Certificate.CERTIFIED_G:
            assert all(len(set(ct.parts)) == 1 for ct in rec.patterns.values())


def test_disc_norm_bound(S3, Q):
    from hilbcount import poly_height

    _, Hp = poly_height(S3.disc)
    dP = S3.delta_P
    for B in (5, 20, 60):
        for t in range(-B, B + 1):
            dv = S3.disc(Q(t))
            if dv:
                assert specialize(S3, t).disc_norm <= (1 + dP) * Hp * B**dP


def test_degree_sieve():
    pats = [CycleType.parse("[3]")]
    assert degree_sieve(pats, 3)
    assert not degree_sieve([CycleType.parse("[1 2]")], 3)
    assert degree_sieve([CycleType.parse("[1 2]"), CycleType.parse("[3]")], 3)


def test_model_validation(Q):
    with pytest.raises(ValueError):
        RegularModel(Q, "Y^2 - T", 2, 2, [("1", "[1 1]", 1)], 2, 0)
    with pytest.raises(ValueError):
        RegularModel(Q, "Y^2 - T", 2, 2, [("s", "[2]", 2)], 2, 0)


def test_bad_primes(C2, S3):
    assert C2.bad_primes(50) == [2]
    assert S3.bad_primes(50) == [2, 3]


def test_fingerprint_index_merges_equal_fields(C2):
    idx = FingerprintIndex(C2.good_ideals_up_to(200))
    fps = [fingerprint(C2, t) for t in (3, 12, 75, 5, 20, -3, -27)]
    classes = [idx.insert(fp)[0] for fp in fps]
    assert classes[0] == classes[1] == classes[2]
    assert classes[3] == classes[4]
    assert classes[5] == classes[6]
    assert len(set(classes)) == 3
