"""Integer arithmetic substrate: primality, sieving, symbols, factorization
and the counting functions (omega, Omega, tau', totient) built on them."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import DomainError

SEGMENT_BITS = 1 << 22  # odd numbers per sieve segment
TRIAL_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = _MR_BASES


# --------------------------------------------------------------------------
# primality and sieving

def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin with the primes up to 37 as bases; exact for
    every n < 3.18e23, which covers all 64-bit inputs."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit (plain Eratosthenes, whole range in memory)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p::2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@lru_cache(maxsize=8)
def _base_primes(limit: int) -> np.ndarray:
    return simple_sieve(limit)


def _odd_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primality flags for the odd numbers lo, lo+2, ... < hi (lo odd).

    Entries for 1 are cleared; base must hold every prime <= sqrt(hi).
    """
    n = (hi - lo + 1) // 2
    flags = np.ones(n, dtype=bool)
    for p in base[1:]:  # skip 2
        p = int(p)
        pp = p * p
        if pp >= hi:
            break
        start = max(pp, -(-lo // p) * p)
        if start % 2 == 0:
            start += p
        if start < hi:
            flags[(start - lo) // 2::p] = False
    if lo == 1 and n:
        flags[0] = False
    return flags


def iter_prime_segments(lo: int, hi: int, segment_bits: int = SEGMENT_BITS) -> Iterator[np.ndarray]:
    """Yield ascending arrays of the primes in [lo, hi], one per segment."""
    if lo < 0 or hi < lo:
        raise DomainError(f"need 0 <= lo <= hi, got [{lo}, {hi}]")
    base = _base_primes(math.isqrt(hi) + 1)
    if lo <= 2 <= hi:
        yield np.array([2], dtype=np.int64)
    start = max(lo, 3) | 1
    span = 2 * segment_bits
    while start <= hi:
        stop = min(start + span, hi + 1)
        flags = _odd_segment(start, stop, base)
        yield start + 2 * np.flatnonzero(flags).astype(np.int64)
        start = stop | 1 if stop % 2 == 0 else stop
    return


def primes_in(lo: int, hi: int, segment_bits: int = SEGMENT_BITS) -> np.ndarray:
    """All primes in the closed interval [lo, hi], ascending (segmented sieve)."""
    parts = list(iter_prime_segments(lo, hi, segment_bits))
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts)


def prime_count(lo: int, hi: int, segment_bits: int = SEGMENT_BITS) -> int:
    return sum(len(s) for s in iter_prime_segments(lo, hi, segment_bits))


# --------------------------------------------------------------------------
# symbols

def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D|n)."""
    if D == 0 and n == 0:
        raise DomainError("(0|0) is undefined")
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -1
    v = (n & -n).bit_length() - 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 and D % 8 in (3, 5):
            result = -result
        n >>= v
    # n odd and positive: Jacobi symbol
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# --------------------------------------------------------------------------
# factorization

@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev = 1
        prod_ = 1
        for p, e in self.factors:
            if p <= prev or e < 1 or not is_prime(p):
                raise DomainError(f"invalid factor list {self.factors}")
            prev = p
            prod_ *= p**e
        if prod_ != self.value:
            raise DomainError(f"factors {self.factors} do not multiply to {self.value}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def omega(self) -> int:
        return len(self.factors)

    def big_omega(self) -> int:
        return sum(e for _, e in self.factors)

    def phi(self) -> int:
        r = 1
        for p, e in self.factors:
            r *= p ** (e - 1) * (p - 1)
        return r

    def tau_prime(self) -> int:
        r = 1
        for _, e in self.factors:
            r *= e // 2 + 1
        return r

    def divisors(self) -> list[int]:
        """All positive divisors, ascending."""
        out = [1]
        for p, e in self.factors:
            out = [d * p**k for d in out for k in range(e + 1)]
        return sorted(out)


def _rho(n: int, rng: random.Random) -> int:
    """A nontrivial factor of the odd composite n (Pollard-Brent)."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict, rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    f = _rho(n, rng)
    _split(f, out, rng)
    _split(n // f, out, rng)


def factorize(n: int) -> FactoredInteger:
    """Complete factorization of 1 <= n < 2**63.

    Trial division by primes below 10**6 (stopping early once the cofactor is
    certified prime), then Pollard-Brent rho on what remains.
    """
    if not 1 <= n < 2**63:
        raise DomainError(f"factorize needs 1 <= n < 2^63, got {n}")
    found: dict[int, int] = {}
    m = n
    for p in _trial_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
        if p == 997 and m > 1 and (m > 10**12 or is_prime(m)):
            break
    if m > 1:
        _split(m, found, random.Random(n))
    return FactoredInteger(n, tuple(sorted(found.items())))


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    return tuple(int(p) for p in simple_sieve(TRIAL_LIMIT))


def divisors(n: int) -> list[int]:
    return factorize(n).divisors()


def spf_table(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in simple_sieve(math.isqrt(limit)):
        p = int(p)
        block = spf[p * p::p]
        block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    return spf


# --------------------------------------------------------------------------
# counting functions

def _check_positive(n: int) -> None:
    if n < 1:
        raise DomainError(f"expected a positive integer, got {n}")


def omega(n: int) -> int:
    _check_positive(n)
    return factorize(n).omega()


def big_omega(n: int) -> int:
    _check_positive(n)
    return factorize(n).big_omega()


def euler_phi(n: int) -> int:
    _check_positive(n)
    return factorize(n).phi()


def tau_prime(n: int) -> int:
    """Number of positive d with d*d dividing n."""
    _check_positive(n)
    return factorize(n).tau_prime()


def tau_prime_sum(y: int) -> int:
    """sum_{n <= y} tau'(n), computed exactly as sum_{d*d <= y} floor(y / d^2)."""
    _check_positive(y)
    return sum(y // (d * d) for d in range(1, math.isqrt(y) + 1))


def mean_tau_prime(y: int) -> Fraction:
    return Fraction(tau_prime_sum(y), y)


def omega_sieve(x: int) -> np.ndarray:
    """omega(n) for 0 <= n <= x (entry 0 is meaningless)."""
    w = np.zeros(x + 1, dtype=np.uint8)
    for p in simple_sieve(x):
        w[p::p] += 1
    return w


def big_omega_sieve(x: int) -> np.ndarray:
    """Omega(n) for 0 <= n <= x, by sieving over prime powers."""
    w = np.zeros(x + 1, dtype=np.uint8)
    for p in simple_sieve(x):
        p = int(p)
        q = p
        while q <= x:
            w[q::q] += 1
            q *= p
    return w


def count_omega_eq(x: int, k: int) -> int:
    """#{d <= x : omega(d) = k}."""
    if x < 1 or k < 0:
        raise DomainError("need x >= 1 and k >= 0")
    return int(np.count_nonzero(omega_sieve(x)[1:] == k))


def omega_distribution(x: int) -> dict[int, int]:
    counts = np.bincount(omega_sieve(x)[1:])
    return {k: int(c) for k, c in enumerate(counts) if c}


def count_big_omega_ge(x: int, K: int) -> int:
    """#{d <= x : Omega(d) >= K}."""
    if x < 1 or K < 0:
        raise DomainError("need x >= 1 and K >= 0")
    return int(np.count_nonzero(big_omega_sieve(x)[1:] >= K))


def shifted_prime_divisor_density(x: int, B: int) -> Fraction:
    """Fraction of n <= x divisible by l - 1 for some prime l > B."""
    if x < 1 or B < 2:
        raise DomainError("need x >= 1 and B >= 2")
    hit = np.zeros(x + 1, dtype=bool)
    if B + 1 <= x + 1:
        for ell in primes_in(B + 1, x + 1):
            m = int(ell) - 1
            hit[m::m] = True
    return Fraction(int(np.count_nonzero(hit[1:])), x)


__all__ = [
    "FactoredInteger", "is_prime", "primes_in", "iter_prime_segments", "prime_count",
    "simple_sieve", "kronecker", "factorize", "divisors", "spf_table", "omega",
    "big_omega", "euler_phi", "tau_prime", "tau_prime_sum", "mean_tau_prime",
    "omega_sieve", "big_omega_sieve", "count_omega_eq", "omega_distribution",
    "count_big_omega_ge", "shifted_prime_divisor_density",
]
