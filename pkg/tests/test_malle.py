import math

import pytest
import sympy

from hilbcount import FrobeniusData, count_fields, delta_default, distinct_ratio, grunwald_search, height_budget
from hilbcount.errors import DeltaTooSmall, InfeasibleData, SearchExhausted
from hilbcount.malle import certified_records, dedup


def _kernel(t):
    s = -1 if t < 0 else 1
    for p, e in sympy.factorint(abs(t)).items():
        if e % 2:
            s *= p
    return s


def test_delta_default(C2, S3):
    assert delta_default(C2) == pytest.approx(96 * math.log(2))
    assert delta_default(S3) == pytest.approx(3 * 3 * 1296 * math.log(6))
    assert delta_default(C2, 2) == 2
    with pytest.raises(DeltaTooSmall):
        delta_default(C2, 1)
    with pytest.raises(DeltaTooSmall):
        delta_default(S3, 3)


def test_height_budget():
    assert height_budget(1e6, 1, 2, 1) == pytest.approx(1e4)
    assert height_budget(1e4, 1, 2, 1) == pytest.approx(10 ** (8 / 3))
    assert height_budget(1e4, 2, 2, 1) == pytest.approx(21.544, abs=1e-3)


def test_census_c2_against_kernel_oracle(C2):
    rep = count_fields(C2, 1e4, 2)
    B = int(rep.B)
    oracle = {_kernel(t) for t in range(-B, B + 1) if t and _kernel(t) != 1}
    assert rep.distinct == len(oracle)
    assert rep.distinct > 1e4**0.25
    assert rep.totals.distinct <= rep.totals.certified <= rep.totals.enumerated
    assert all(r.disc_norm <= 1e4 for r in rep.records.values())


def test_census_with_data(C2, Q):
    rep = count_fields(C2, 1e4, 2, FrobeniusData.parse(Q, "11, [1 1]"))
    qr = {x * x % 11 for x in range(1, 11)}
    assert all(int(r.t0.coords[0]) % 11 in qr for r in rep.records.values())
    assert rep.distinct >= 10


def test_census_monotone(C2):
    counts = [count_fields(C2, y, 2).distinct for y in (1e3, 3e3, 1e4)]
    assert counts == sorted(counts)


def test_distinct_ratio(C2):
    recs, _ = certified_records(C2, 100)
    res = distinct_ratio(C2, 100, recs)
    assert res.size == 190
    assert res.distinct == len({_kernel(int(r.t0.coords[0])) for r in recs}) == 121
    assert res.gamma == 0.0
    single = distinct_ratio(C2, 100, recs[:1])
    assert single.distinct == single.size == 1
    trio = [r for r in recs if int(r.t0.coords[0]) in (3, 12, 27)]
    assert distinct_ratio(C2, 100, trio).distinct == 1
    assert len(dedup(C2, trio)) == 1


def test_grunwald_examples(C2, Q):
    res = grunwald_search(C2, FrobeniusData.parse(Q, "5, [1 1]; 7, [2]"), 3, 500)
    ts = [int(r.t0.coords[0]) for r in res]
    assert len({_kernel(t) for t in ts}) == 3
    for t in ts:
        assert sympy.legendre_symbol(t % 5, 5) == 1
        assert sympy.legendre_symbol(t % 7, 7) == -1
    assert 19 % 5 == 4 and sympy.legendre_symbol(19 % 7, 7) == -1
    res = grunwald_search(C2, FrobeniusData.parse(Q, "5, [1 1]; 13, [1 1]; 17, [1 1]"), 3, 500)
    assert len(res) == 3 and res.height_reached <= 500
    with pytest.raises(InfeasibleData):
        grunwald_search(C2, FrobeniusData.parse(Q, "2, [1 1]"), 3, 500)


def test_grunwald_exhaustion(C2, Q):
    with pytest.raises(SearchExhausted) as info:
        grunwald_search(C2, FrobeniusData.parse(Q, "5, [1 1]; 7, [2]"), 50, 20)
    assert info.value.reached == 20


def test_s3_census_small(S3):
    rep = count_fields(S3, 1e4, 4)
    assert rep.distinct > 0 and rep.totals.norm_filtered >= 0
    assert all(r.disc_norm <= 1e4 for r in rep.records.values())
