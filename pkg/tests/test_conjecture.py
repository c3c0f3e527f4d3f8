from fractions import Fraction
from math import comb

import pytest

from chowsecant.conjecture import (
    clause_bounds,
    enumerate_cases,
    generic_chow_rank,
    generic_chow_rank_d2,
    least_filling_s,
    quadric_results,
    s1,
    s2,
    subabundant_bound,
    verify_conjecture,
)
from chowsecant.terracini import d2_dimension
from oracles import clause_cases_oracle, s1_oracle, s2_oracle


def test_threshold_examples():
    assert s1(6) == 4 and s2(6) == 5
    assert s1(3) == 1 and s2(3) == 2
    assert s1(4) == 2
    assert isinstance(s1(7), Fraction)


def test_threshold_domain():
    with pytest.raises(ValueError):
        s1(2)
    with pytest.raises(ValueError):
        s2(0)


@pytest.mark.parametrize("d", range(3, 101))
def test_threshold_properties(d):
    assert s1(d) == s1_oracle(d) and s2(d) == s2_oracle(d)
    assert 18 % s1(d).denominator == 0 and 18 % s2(d).denominator == 0
    assert s1(d) <= s2(d)
    assert s1(d) * (3 * d + 1) <= comb(d + 3, d)
    if d > 3:
        assert s1(d) >= s1(d - 1) and s2(d) >= s2(d - 1)


def test_subabundant_bound():
    assert subabundant_bound(3, 3) == 5
    assert subabundant_bound(1, 7) == 1
    for s in range(1, 15):
        for d in range(3, 8):
            n = subabundant_bound(s, d)
            assert s * (d * n + 1) <= comb(n + d, d)
            assert all(s * (d * m + 1) > comb(m + d, d) for m in range(1, n))


def test_enumerate_examples():
    assert len(enumerate_cases(1)) == 0
    cases = enumerate_cases(3)
    assert sorted(c.n for c in cases if c.clause == "i") == [5]
    with pytest.raises(ValueError):
        enumerate_cases(0)


@pytest.mark.parametrize("s", range(1, 11))
def test_enumerated_cases_satisfy_their_clause(s):
    def bound(d):
        n = 1
        while Fraction(comb(n + d, d), d * n + 1) < s:
            n += 1
        return n

    b = clause_bounds(s)
    cases = enumerate_cases(s)
    assert len(cases.pairs()) == len(cases)
    for c in cases:
        assert c.n <= bound(c.d)
        if c.clause == "i":
            assert c.d == 3 and s < s2_oracle(c.n)
        elif c.clause == "ii":
            assert 4 <= c.d and c.n >= 4 and s >= s2_oracle(c.d)
        else:
            assert c.clause == "iii" and c.n >= 3
            assert b["iii_d_lo"] <= c.d <= b["iii_d_hi"]
            assert any(s > s1_oracle(e) for e in range(c.d, 60))


@pytest.mark.parametrize("s", range(1, 21))
def test_enumeration_matches_box_oracle(s):
    assert enumerate_cases(s).pairs() == clause_cases_oracle(s)


def test_no_trust_is_a_superset():
    for s in (3, 7, 12):
        assert enumerate_cases(s).pairs() <= enumerate_cases(s, no_trust=True).pairs()


def test_generic_chow_rank():
    assert generic_chow_rank(3, 3) == 2
    assert generic_chow_rank(4, 4) == 5
    assert all(generic_chow_rank(n, 1) == 1 for n in range(1, 10))
    with pytest.raises(ValueError):
        generic_chow_rank(3, 2)


def test_generic_chow_rank_d2():
    assert generic_chow_rank_d2(1) == 1
    assert generic_chow_rank_d2(2) == 2
    assert generic_chow_rank_d2(4) == 3
    # the span l_i * R_1 misses C(n-2s+2, 2) > 0 dimensions until 2s > n
    for n in range(1, 30):
        assert generic_chow_rank_d2(n) == n // 2 + 1


@pytest.mark.parametrize("n,d", [(1, 3), (2, 3), (3, 3), (4, 3), (2, 4), (3, 4), (2, 5), (3, 5), (2, 6), (1, 7)])
def test_chow_rank_matches_filling_scan(n, d):
    assert generic_chow_rank(n, d) == least_filling_s(n, d)


def test_quadric_results_cover_known_defective_range():
    for s in range(1, 8):
        for r in quadric_results(s):
            assert r.dim == d2_dimension(r.n, s)
            assert r.certified == (not 2 <= s <= r.n / 2)


def test_verify_small():
    rep = verify_conjecture(2)
    assert rep.ok
    assert {(r.n, r.s) for r in rep.exceptions_confirmed} == {(4, 2), (5, 2)}
    assert all(r.d == 2 for r in rep.exceptions_confirmed)


def test_exceptions_exactly_the_quadric_range():
    rep = verify_conjecture(6)
    assert rep.ok
    got = {(r.n, r.d, r.s) for r in rep.exceptions_confirmed}
    want = {(n, 2, s) for s in range(1, 7) for n in range(1, 2 * s + 2) if 2 <= s <= n / 2}
    assert got == want


def test_parallel_matches_serial():
    a = verify_conjecture(5, jobs=1).as_dict()
    b = verify_conjecture(5, jobs=2).as_dict()
    assert a == b


def test_verify_rejects_bad_arguments():
    with pytest.raises(ValueError):
        verify_conjecture(0)
    with pytest.raises(ValueError):
        verify_conjecture(2, jobs=0)
