"""Binary quadratic forms of negative discriminant and a baby-step/giant-step
class-number search.

The search locates the class number inside a window around a truncated
Euler-product estimate. Nothing proves the window contains h, so results
from here are conditional and are labelled ``bsgs`` wherever they surface.
"""

from __future__ import annotations

import math
import random
from functools import lru_cache

from ._kernels import euler_product
from .arith import factorize, is_prime, kronecker, simple_sieve

Form = tuple[int, int, int]


def discriminant(f: Form) -> int:
    a, b, c = f
    return b * b - 4 * a * c


def normalize(f: Form) -> Form:
    a, b, c = f
    if -a < b <= a:
        return f
    r = (a - b) // (2 * a)
    return a, b + 2 * r * a, a * r * r + b * r + c


def reduce(f: Form) -> Form:
    a, b, c = normalize(f)
    while a > c or (a == c and b < 0):
        a, b, c = normalize((c, -b, a))
    return a, b, c


def identity(D: int) -> Form:
    k = D % 2
    return 1, k, (k - D) // 4


def inverse(f: Form) -> Form:
    a, b, c = f
    return reduce((a, -b, c))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(u, v, g) with u*a + v*b = g = gcd(a, b)."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    return u0, v0, a


def compose(f1: Form, f2: Form) -> Form:
    """Gaussian composition followed by reduction."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        y1, _, d = _xgcd(a2, a1)
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        x2, v, d1 = _xgcd(s, d)
        y2 = -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce((a3, b3, c3))


def power(f: Form, n: int) -> Form:
    D = discriminant(f)
    if n < 0:
        f, n = inverse(f), -n
    result = identity(D)
    while n:
        if n & 1:
            result = compose(result, f)
        f = compose(f, f)
        n >>= 1
    return result


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a modulo the odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def prime_form(p: int, D: int) -> Form | None:
    """The reduced form (p, b, .) for an odd prime p split in disc D, else None."""
    if p == 2 or kronecker(D, p) != 1:
        return None
    b = sqrt_mod_prime(D, p)
    if (b - D) % 2:
        b = p - b
    return reduce((p, b, (b * b - D) // (4 * p)))


def all_reduced_forms(D: int) -> list[Form]:
    """Every reduced primitive form of discriminant D (small |D| only)."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a) == 0:
                c = (b * b - D) // (4 * a)
                if c >= a and not (c == a and b < 0) and math.gcd(math.gcd(a, b), c) == 1:
                    out.append((a, b, c))
        a += 1
    return out


@lru_cache(maxsize=4)
def _odd_primes(bound: int):
    return simple_sieve(bound)[1:]


def euler_estimate(D: int, prime_bound: int = 1 << 16) -> float:
    """h(D) estimated from the Euler product of L(1, chi_D) truncated at prime_bound."""
    L = euler_product(D, _odd_primes(prime_bound)) / (1.0 - kronecker(D, 2) / 2)
    w = {-3: 6, -4: 4}.get(D, 2)
    return w * math.sqrt(-D) * L / (2 * math.pi)


def order_in_window(f: Form, lo: int, hi: int) -> int | None:
    """Exact order of f, found via some multiple of it lying in [lo, hi]."""
    D = discriminant(f)
    one = identity(D)
    m = math.isqrt(hi - lo) + 1
    baby: dict[Form, int] = {}
    g = one
    for j in range(m):
        if j and g == one:
            return j
        baby.setdefault(g, j)
        g = compose(g, f)
    step = power(f, m)
    y = power(f, lo)
    k = lo
    while k <= hi + m:
        j = baby.get(inverse(y))
        if j is not None and k + j > 0:
            return _exact_order(f, k + j)
        y = compose(y, step)
        k += m
    return None


def _exact_order(f: Form, n: int) -> int:
    one = identity(discriminant(f))
    for p, _ in factorize(n).factors:
        while n % p == 0 and power(f, n // p) == one:
            n //= p
    return n


def class_number_bsgs(D: int, rng: random.Random | None = None, slack: float = 0.25,
                      max_forms: int = 40) -> int:
    """h(D) as the unique multiple of the lcm of element orders in the estimate window.

    Raises RuntimeError when the window does not pin down h.
    """
    rng = rng or random.Random(D)
    est = euler_estimate(D)
    lo = max(1, math.floor(est / (1 + slack)))
    hi = math.ceil(est * (1 + slack))
    exponent = 1
    candidates = [p for p in range(3, 2000, 2) if is_prime(p)]
    rng.shuffle(candidates)
    used = 0
    for p in candidates:
        f = prime_form(p, D)
        if f is None:
            continue
        o = order_in_window(f, lo, hi)
        if o is None:
            continue
        exponent = exponent * o // math.gcd(exponent, o)
        used += 1
        multiples = list(range(-(-lo // exponent) * exponent, hi + 1, exponent))
        if len(multiples) == 1 and used >= 3:
            return multiples[0]
        if used >= max_forms:
            break
    if hi < 64:
        return len(all_reduced_forms(D))
    raise RuntimeError(f"bsgs could not isolate h({D}) in [{lo}, {hi}]")
