"""Compiled inner loops for class-number computation.

Every kernel takes |D| as a positive int64 and requires |D| < 2**62 so that
b*b + |D| and 4*a*a stay inside int64.
"""

import numpy as np
from numba import njit

MAX_ABS_D = 1 << 62
MAX_HEAD = 1 << 25  # largest root-count block we are willing to allocate


@njit(cache=True, nogil=True)
def isqrt64(n):
    r = np.int64(np.sqrt(np.float64(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@njit(cache=True, nogil=True)
def jacobi(a, n):
    """Jacobi symbol (a|n) for odd n > 0."""
    a = a % n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a = a % n
    if n == 1:
        return result
    return 0


@njit(cache=True, nogil=True)
def gcd64(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# oracle: direct enumeration of reduced forms

@njit(cache=True, nogil=True)
def forms_count(absD):
    """Number of reduced primitive forms (a, b, c), b^2 - 4ac = -absD."""
    h = 0
    a = 1
    par = absD % 2
    while 3 * a * a <= absD:
        b = -a + 1
        if (b - par) % 2 != 0:
            b += 1
        while b <= a:
            num = b * b + absD
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a and not (c == a and b < 0):
                    if gcd64(gcd64(a, b), c) == 1:
                        h += 1
            b += 2
        a += 1
    return h


# ---------------------------------------------------------------------------
# character sum for D = -l, l prime, l = 3 mod 4

@njit(cache=True, nogil=True)
def charsum_class_number(ell):
    """h(-ell) = S / (2 - (2|ell)), S = sum_{0<a<ell/2} (a|ell).

    S = 2R - floor(ell/2) where R counts x in [1, (ell-1)/2] whose square
    mod ell lies below ell/2; squares are updated additively.
    """
    half = (ell - 1) // 2
    lim = ell // 2
    sq = 0
    R = 0
    for a in range(1, half + 1):
        sq += 2 * a - 1
        if sq >= ell:
            sq -= ell
        if sq <= lim:
            R += 1
    S = 2 * R - lim
    if ell % 8 == 7:
        return S
    if S % 3 != 0:
        return -1
    return S // 3


@njit(cache=True, nogil=True)
def charsum_batch(ells):
    out = np.empty(ells.size, dtype=np.int64)
    for i in range(ells.size):
        out[i] = charsum_class_number(ells[i])
    return out


# ---------------------------------------------------------------------------
# root-count engine
#
# For a with 4a^2 < |D| every b in (-a, a] with b^2 = D (mod 4a) yields a
# reduced form, so those a contribute r(a) = #{x mod 2a : x^2 = D mod 4a},
# a multiplicative count read off from Kronecker symbols. The remaining band
# sqrt|D|/2 <= a <= sqrt(|D|/3) is enumerated directly.

@njit(cache=True, nogil=True)
def root_counts(absD, A):
    """r(a) for 0 <= a <= A (r[0] unused), D = -absD fundamental."""
    r = np.ones(A + 1, dtype=np.int64)
    r[0] = 0
    if A < 2:
        return r
    comp = np.zeros(A + 1, dtype=np.bool_)
    # 2-adic part
    if absD % 2 == 1:
        if absD % 8 != 7:
            r[2::2] = 0
        else:
            r[2::2] *= 2
    else:
        r[4::4] = 0
    for p in range(3, A + 1, 2):
        if comp[p]:
            continue
        if p * p <= A:
            comp[p * p::2 * p] = True
        m = absD % p
        if m == 0:
            pp = p * p
            if pp <= A:
                r[pp::pp] = 0
        else:
            if jacobi(p - m, p) == 1:
                r[p::p] *= 2
            else:
                r[p::p] = 0
    return r


@njit(cache=True, nogil=True)
def rootcount_class_number(absD, limit):
    """Class number of D = -absD; with limit >= 0 returns -1 as soon as the
    count is proven to exceed limit."""
    a_head = isqrt64((absD - 1) // 4)  # largest a with 4a^2 < absD
    if limit >= 0:
        A = min(a_head, 32)
    else:
        A = a_head
    total = 0
    while True:
        if A > MAX_HEAD:
            return -2
        if A >= 1:
            r = root_counts(absD, A)
            total = 0
            for i in range(1, A + 1):
                total += r[i]
        if limit >= 0 and total > limit:
            return -1
        if A >= a_head:
            break
        A = min(a_head, 8 * A)
    a_max = isqrt64(absD // 3)
    par = absD % 2
    for a in range(a_head + 1, a_max + 1):
        lo2 = 4 * a * a - absD  # need b^2 >= lo2
        b = isqrt64(lo2) if lo2 > 0 else 0
        if b * b < lo2:
            b += 1
        if (b - par) % 2 != 0:
            b += 1
        four_a = 4 * a
        while b <= a:
            num = b * b + absD
            if num % four_a == 0:
                c = num // four_a
                if b == 0 or b == a or c == a:
                    total += 1
                else:
                    total += 2
            b += 2
        if limit >= 0 and total > limit:
            return -1
    return total


@njit(cache=True, nogil=True)
def rootcount_batch(absDs, limits):
    out = np.empty(absDs.size, dtype=np.int64)
    for i in range(absDs.size):
        out[i] = rootcount_class_number(absDs[i], limits[i])
    return out


@njit(cache=True, nogil=True)
def euler_product(D, odd_primes):
    """prod over the given odd primes p of (1 - (D|p)/p)^-1."""
    L = 1.0
    for i in range(odd_primes.size):
        p = odd_primes[i]
        L /= 1.0 - jacobi(D % p, p) / p
    return L
