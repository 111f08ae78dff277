from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmtorsion.arith import primes_in
from cmtorsion.errors import DomainError
from cmtorsion.olson import (
    TWO, GeneratorEntry, OlsonVerdict, _scan_r1, count_olson, generators, is_olson,
    is_prime_power_olson, olson_density, olson_witnesses, prime_power_scan,
    prime_power_witnesses, sieve_olson,
)
from oracles import gens_from_forms, olson_brute


def _g(gs):
    return [e.g for e in gs.entries]


def test_generator_examples(table_1e5):
    assert _g(generators(10, primitive=False)) == [2, 3, 5, 9]
    full = generators(10, primitive=False)
    assert [(e.g, e.witness_prime, e.witness_h) for e in full.entries] == [
        (2, 0, 1), (3, 7, 1), (5, 11, 1), (9, 19, 1)]
    assert _g(generators(10)) == [2, 3, 5]
    assert _g(generators(1000, table=table_1e5))[:4] == [2, 3, 5, 913]
    assert generators(1000, table=table_1e5).entries[3] == GeneratorEntry(913, 167, 11)
    assert _g(generators(2)) == [2]
    with pytest.raises(DomainError):
        generators(1)


def test_generators_against_forms_oracle():
    assert _g(generators(400, primitive=False)) == gens_from_forms(400)


def test_primitive_set_has_no_divisibility(table_2e6):
    gs = _g(generators(10**6, table=table_2e6))
    for i, a in enumerate(gs):
        for b in gs[i + 1:]:
            assert b % a


def test_bounded_generators_match_table(table_2e6):
    for prim in (True, False):
        a = generators(10**6, prim, table=table_2e6)
        b = generators(10**6, prim, bounded=True)
        assert a.entries == b.entries


def test_generator_entry_invariants():
    with pytest.raises(DomainError):
        GeneratorEntry(4, 0, 1)
    with pytest.raises(DomainError):
        GeneratorEntry(6, 7, 2)  # wrong h
    with pytest.raises(DomainError):
        GeneratorEntry(3, 5, 1)  # 5 is not 3 mod 4
    with pytest.raises(DomainError):
        OlsonVerdict(9, True, TWO)
    with pytest.raises(DomainError):
        OlsonVerdict(9, False, TWO)


def test_sieve_small():
    s = sieve_olson(10)
    assert s.olson_degrees().tolist() == [1, 7]
    assert [d for d in range(1, 11) if s.is_non_olson(d)] == [2, 3, 4, 5, 6, 8, 9, 10]
    s = sieve_olson(30)
    assert s.olson_degrees().tolist() == [1, 7, 11, 13, 17, 19, 23, 29]
    assert s.count() == 8
    assert sieve_olson(1).olson_degrees().tolist() == [1]


def test_sieve_against_brute_force():
    N = 3000
    ref = olson_brute(N, gens_from_forms(N))
    assert sieve_olson(N).olson_degrees().tolist() == ref


@pytest.mark.parametrize("N,count", [(10**3, 265), (10**4, 2649), (10**5, 26474)])
def test_table_counts(N, count, table_2e6):
    gens = generators(N, table=table_2e6)
    assert count_olson(N, gens=gens) == count
    assert sieve_olson(N, gens=gens).count() == count


def test_counting_independent_of_segmentation(table_2e6):
    gens = generators(10**5, table=table_2e6)
    ref = count_olson(10**5, gens=gens)
    for seg in (1, 97, 4096):
        assert count_olson(10**5, gens=gens, segment=seg) == ref
    with ThreadPoolExecutor(3) as ex:
        assert count_olson(10**5, gens=gens, executor=ex, segment=1000) == ref
        a = sieve_olson(10**5, gens=gens, executor=ex, segment=1000)
    assert np.array_equal(a.odd_bits, sieve_olson(10**5, gens=gens).odd_bits)


def test_primitive_pruning_is_lossless(table_2e6):
    a = sieve_olson(10**5, gens=generators(10**5, True, table=table_2e6))
    b = sieve_olson(10**5, gens=generators(10**5, False, table=table_2e6))
    assert np.array_equal(a.odd_bits, b.odd_bits)


def test_density():
    assert olson_density(1) == 1
    assert olson_density(1000) == Fraction(265, 1000)


def test_is_olson_examples():
    assert is_olson(1).olson
    v = is_olson(23)
    assert v.olson and v.witness is None
    v = is_olson(9)
    assert not v.olson and v.witness.g == 3 and v.witness.witness_prime == 7
    assert GeneratorEntry(9, 19, 1) in olson_witnesses(9)
    assert is_olson(913).witness == GeneratorEntry(913, 167, 11)
    assert is_olson(10**12).witness == TWO
    with pytest.raises(DomainError):
        is_olson(0)


def test_witness_tie_break_prefers_smallest_generator():
    # both 3 and 5 divide 285; the smaller one wins
    d = 3 * 5 * 19
    ws = olson_witnesses(d)
    assert is_olson(d).witness == ws[0] == GeneratorEntry(3, 7, 1)
    assert ws == sorted(ws)


def test_is_olson_matches_sieve_below_2e4(table_1e5):
    s = sieve_olson(20000, gens=generators(20000, table=table_1e5))
    mask = s.non_olson_mask()
    for d in range(1, 20001):
        v = is_olson(d)
        assert v.olson == (not mask[d])
        assert v == is_olson(d, table=table_1e5)


def test_even_degrees_have_witness_two():
    for d in range(2, 10001, 2):
        assert is_olson(d).witness == TWO


def test_primes_above_five_are_olson_below_1e5():
    for p in primes_in(7, 10**5).tolist():
        assert is_olson(p).olson


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**4), st.integers(1, 10))
def test_multiples_of_non_olson_are_non_olson(d, k):
    if not is_olson(d).olson:
        assert not is_olson(k * d).olson


def test_large_single_queries():
    p = 10**12 + 39  # prime
    assert is_olson(p).olson
    assert not is_olson(3 * p).olson


def test_prime_power_examples():
    assert is_prime_power_olson(7, 1).olson
    v = is_prime_power_olson(5, 1)
    assert not v.olson and v.witness == GeneratorEntry(5, 11, 1)
    assert not is_prime_power_olson(2, 5).olson
    assert not is_prime_power_olson(3, 4).olson
    assert is_prime_power_olson(11, 2).olson
    with pytest.raises(DomainError):
        is_prime_power_olson(9, 1)
    with pytest.raises(DomainError):
        is_prime_power_olson(7, 30)


def test_prime_power_checker_agrees_with_divisor_test():
    for p in primes_in(7, 200).tolist():
        n = 1
        while p**n < 10**15:
            assert is_prime_power_olson(p, n).olson == is_olson(p**n).olson
            n += 1


def test_even_r_skip_is_equivalent():
    for p in primes_in(7, 2000).tolist():
        assert prime_power_witnesses(p, 4, True) == prime_power_witnesses(p, 4, False)


def test_prime_power_scan_small():
    assert prime_power_scan(50) == []
    assert prime_power_scan(10**6) == []
    assert prime_power_scan(10**6, skip_even=False) == []
    with pytest.raises(DomainError):
        prime_power_scan(48)


def test_scan_machinery_detects_planted_hits():
    # p = 3, 5 are excluded from the scan, but the batch kernel must flag them
    hits = _scan_r1(3, 5, 10**6)
    assert [(h.p, h.ell, h.h) for h in hits] == [(3, 7, 1), (5, 11, 1)]


def test_scan_deterministic_across_workers():
    with ThreadPoolExecutor(4) as ex:
        assert prime_power_scan(10**7, executor=ex, chunk=1 << 20) == prime_power_scan(10**7)
