import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmtorsion.arith import (
    FactoredInteger, big_omega, count_big_omega_ge, count_omega_eq, divisors, euler_phi,
    factorize, is_prime, iter_prime_segments, kronecker, mean_tau_prime, omega,
    omega_distribution, prime_count, primes_in, shifted_prime_divisor_density, spf_table,
    tau_prime, tau_prime_sum,
)
from cmtorsion.errors import DomainError
from oracles import (big_omega_by_division, legendre_euler, naive_sieve, tau_prime_table,
                     trial_factor, trial_is_prime)


# -- primality ---------------------------------------------------------------

def test_is_prime_small_cases():
    assert is_prime(2) and not is_prime(1) and not is_prime(0)
    assert [n for n in range(50) if is_prime(n)] == naive_sieve(49)


def test_is_prime_agrees_with_trial_division_below_1e5():
    assert [n for n in range(100_000) if is_prime(n)] == naive_sieve(99_999)


def test_is_prime_large_anchor():
    n = 2 * 10**9 + 11
    assert is_prime(n) == trial_is_prime(n)


@pytest.mark.parametrize("n", [561, 1105, 2047, 3215031751, 341550071728321,
                               3825123056546413051])
def test_is_prime_rejects_strong_pseudoprimes(n):
    assert not is_prime(n)


@pytest.mark.parametrize("n", [2**31 - 1, 2**61 - 1, 2**64 - 59, 10**18 + 9])
def test_is_prime_large_primes(n):
    assert is_prime(n)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=10**9, max_value=10**11))
def test_is_prime_random_against_trial_division(n):
    assert is_prime(n) == trial_is_prime(n)


# -- sieving -------------------------------------------------------------------

def test_primes_in_small():
    assert primes_in(1, 10).tolist() == [2, 3, 5, 7]
    assert primes_in(0, 1).tolist() == []
    assert primes_in(2, 2).tolist() == [2]


def test_prime_count_1e6():
    got = primes_in(1, 10**6)
    assert len(got) == 78498
    assert got.tolist() == naive_sieve(10**6)


def test_primes_in_reversed_interval():
    with pytest.raises(DomainError):
        primes_in(10, 5)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 20_000), st.integers(0, 3000), st.sampled_from([1, 7, 64, 1 << 12]))
def test_segmented_sieve_matches_naive(lo, width, seg):
    hi = lo + width
    ref = [p for p in naive_sieve(hi) if p >= lo]
    assert primes_in(lo, hi, segment_bits=seg).tolist() == ref
    assert prime_count(lo, hi, segment_bits=seg) == len(ref)


def test_segments_are_ascending_and_disjoint():
    parts = list(iter_prime_segments(1, 10**5, segment_bits=1000))
    flat = np.concatenate(parts)
    assert np.all(np.diff(flat) > 0)


# -- symbols ---------------------------------------------------------------------

def test_kronecker_examples():
    assert kronecker(-7, 2) == 1
    assert kronecker(-4, 3) == -1
    assert all(kronecker(D, 1) == 1 for D in range(-50, 50))
    with pytest.raises(DomainError):
        kronecker(0, 0)


def test_kronecker_matches_legendre_for_odd_primes():
    for p in naive_sieve(200)[1:]:
        for a in range(-60, 60):
            assert kronecker(a, p) == legendre_euler(a, p)


@settings(max_examples=300, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(1, 10**4), st.integers(1, 10**4))
def test_kronecker_multiplicative_in_n(D, m, n):
    assert kronecker(D, m * n) == kronecker(D, m) * kronecker(D, n)


def test_kronecker_two_rule_against_squares():
    # for D = 1 mod 8, x^2 = D mod 8 is solvable and (D|2) = 1; D = 5 mod 8 gives -1
    for D in range(-99, 100, 2):
        expect = 1 if D % 8 in (1, 7) else -1
        assert kronecker(D, 2) == expect


# -- factorization ---------------------------------------------------------------------

def test_factorize_examples():
    assert factorize(1).factors == ()
    assert factorize(913).factors == ((11, 1), (83, 1))
    assert factorize(2**60).factors == ((2, 60),)
    with pytest.raises(DomainError):
        factorize(0)
    with pytest.raises(DomainError):
        factorize(2**63)


def test_factorize_reconstructs_below_1e5():
    for n in range(1, 100_001):
        f = factorize(n)
        assert math.prod(p**e for p, e in f.factors) == n


def test_factorize_matches_trial_division_small():
    for n in range(1, 3000):
        assert list(factorize(n).factors) == trial_factor(n)


@settings(max_examples=40, deadline=None)
@given(st.integers(2**20, 2**31), st.integers(2**20, 2**31))
def test_factorize_semiprimes(a, b):
    n = a * b
    f = factorize(n)
    assert f.value == n
    assert all(is_prime(p) for p in f.primes)


def test_factorize_large_semiprime_above_trial_limit():
    p, q = 1000003, 3000000019
    assert factorize(p * q).factors == ((p, 1), (q, 1))
    p = 10**9 + 7
    assert factorize(p * p * 4).factors == ((2, 2), (p, 2))
    assert factorize(p * (2**31 - 1)).factors == ((p, 1), (2**31 - 1, 1))


def test_factored_integer_rejects_bad_lists():
    with pytest.raises(DomainError):
        FactoredInteger(12, ((3, 1), (2, 2)))
    with pytest.raises(DomainError):
        FactoredInteger(12, ((2, 1), (6, 1)))
    with pytest.raises(DomainError):
        FactoredInteger(13, ((2, 2), (3, 1)))


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]


# -- counting functions -----------------------------------------------------------------

def test_small_function_values():
    assert (omega(1), big_omega(1)) == (0, 0)
    assert (omega(12), big_omega(12)) == (2, 3)
    assert omega(97) == big_omega(97) == 1
    assert tau_prime(1) == 1 and tau_prime(13) == 1 and tau_prime(36) == 4
    assert euler_phi(1) == 1 and euler_phi(12) == 4 and euler_phi(101) == 100


def test_counting_functions_match_brute_force_below_2000():
    for n in range(1, 2000):
        fac = trial_factor(n)
        assert omega(n) == len(fac)
        assert big_omega(n) == sum(e for _, e in fac)
        assert tau_prime(n) == sum(1 for d in range(1, n + 1) if n % (d * d) == 0)
        assert euler_phi(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_counting_functions_against_sieves_below_1e5():
    n = 10**5
    tp = tau_prime_table(n)
    om = big_omega_by_division(n)
    for k in range(1, n + 1):
        f = factorize(k)
        assert f.tau_prime() == tp[k]
        assert f.big_omega() == om[k]
        assert f.big_omega() >= f.omega()


def test_tau_prime_multiplicative_on_coprime_pairs():
    tp = tau_prime_table(10**6)
    m = np.arange(1, 1001)
    for a in range(1, 1001):
        cop = m[np.gcd(a, m) == 1]
        assert np.array_equal(tp[a * cop], tp[a] * tp[cop])


def test_spf_table():
    spf = spf_table(100)
    for n in range(2, 101):
        assert spf[n] == trial_factor(n)[0][0]


def test_mean_tau_prime_small():
    assert mean_tau_prime(1) == 1
    tp = tau_prime_table(100)
    assert mean_tau_prime(100) == Fraction(int(tp[1:].sum()), 100)
    assert tau_prime_sum(10**5) == int(tau_prime_table(10**5)[1:].sum())


def test_mean_tau_prime_1e7_near_zeta2():
    assert abs(float(mean_tau_prime(10**7)) - math.pi**2 / 6) <= 2e-3


def test_omega_counts():
    assert count_omega_eq(10, 1) == 7
    assert all(count_omega_eq(x, 0) == 1 for x in (1, 10, 1000))
    for x in (100, 10**4):
        assert sum(count_omega_eq(x, k) for k in range(10)) == x
        assert sum(omega_distribution(x).values()) == x


def test_big_omega_counts():
    assert count_big_omega_ge(16, 4) == 1
    assert count_big_omega_ge(1000, 0) == 1000
    om = big_omega_by_division(10**6)
    assert count_big_omega_ge(10**6, 10) == int(np.count_nonzero(om[1:] >= 10))


def test_shifted_prime_density_brute_force():
    x = 100
    shifts = [p - 1 for p in naive_sieve(x + 1) if p > 2]
    hit = sum(1 for n in range(1, x + 1) if any(n % s == 0 for s in shifts))
    assert shifted_prime_divisor_density(100, 2) == Fraction(hit, x)


def test_shifted_prime_density_edges_and_monotone():
    assert shifted_prime_divisor_density(50, 60) == 0
    assert shifted_prime_divisor_density(10**5, 50) >= shifted_prime_divisor_density(10**5, 500)
    vals = [shifted_prime_divisor_density(2000, B) for B in (2, 5, 11, 50, 300, 2000)]
    assert vals == sorted(vals, reverse=True)
