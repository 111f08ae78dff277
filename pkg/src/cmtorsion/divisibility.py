"""Divisibility constraints on torsion of CM elliptic curves.

Per-prime constants lambda for an l-primary torsion part Z/l^a x Z/l^b,
their candidate sets Lambda(n), and the predicates built from them. Every
predicate here is a necessary condition only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .arith import big_omega, euler_phi, factorize, is_prime, kronecker
from .classnum import ImQuadField, fundamental_decomposition
from .errors import ContractError, DomainError


@dataclass(frozen=True)
class CMContext:
    """An imaginary quadratic order, given by its discriminant."""

    order_disc: int
    fundamental_disc: int
    conductor: int
    field: ImQuadField

    def __post_init__(self):
        if self.order_disc != self.conductor**2 * self.fundamental_disc:
            raise DomainError("order discriminant must equal f^2 * D_K")
        if self.field.disc != self.fundamental_disc:
            raise DomainError("field discriminant does not match D_K")

    @classmethod
    def from_disc(cls, disc: int, method: str = "auto") -> "CMContext":
        dk, f = fundamental_decomposition(disc)
        return cls(disc, dk, f, ImQuadField.from_disc(dk, method))


@dataclass(frozen=True)
class TorsionGroup:
    """Z/n1 x Z/n2 with n1 | n2."""

    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 1 or self.n2 % self.n1:
            raise DomainError(f"need n1 >= 1 dividing n2, got ({self.n1}, {self.n2})")

    @property
    def order(self) -> int:
        return self.n1 * self.n2


@dataclass(frozen=True)
class TorsionProfile:
    """l-primary parts Z/l^a x Z/l^b (a <= b) of a torsion group of order n."""

    n: int
    components: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        prod_ = 1
        prev = 1
        for ell, a, b in self.components:
            if ell <= prev or not is_prime(ell) or not 0 <= a <= b or b < 1:
                raise DomainError(f"bad component {(ell, a, b)}")
            prev = ell
            prod_ *= ell ** (a + b)
        if prod_ != self.n:
            raise DomainError(f"components multiply to {prod_}, not {self.n}")

    @classmethod
    def from_group(cls, g: TorsionGroup) -> "TorsionProfile":
        comps = []
        for ell, e2 in factorize(g.n2).factors:
            e1 = 0
            m = g.n1
            while m % ell == 0:
                m //= ell
                e1 += 1
            comps.append((ell, e1, e2))
        return cls(g.order, tuple(comps))


@dataclass(frozen=True)
class LambdaSet:
    n: int
    elements: tuple[int, ...]
    choices: tuple[tuple[int, int, tuple[int, ...]], ...] = field(default=(), repr=False)

    def __contains__(self, x):
        return x in self.elements

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def violations(self) -> list[str]:
        """Names of the structural bounds this set fails (empty when sound)."""
        out = []
        f = factorize(self.n)
        if len(self.elements) > 3 ** f.omega():
            out.append("size")
        phi = f.phi()
        if min(self.elements) * self.n < phi * phi:
            out.append("lower")
        floor = f.big_omega() - 2
        if any(big_omega(x) < floor for x in self.elements):
            out.append("Omega")
        return out


# --------------------------------------------------------------------------
# Lambda sets

def _check_prime(ell: int) -> None:
    if not is_prime(ell):
        raise DomainError(f"{ell} is not prime")


@lru_cache(maxsize=4096)
def lambda_set_prime_power(ell: int, alpha: int) -> tuple[int, ...]:
    """The candidate constants for an l-primary part of order l^alpha, sorted."""
    _check_prime(ell)
    if alpha < 1:
        raise DomainError(f"exponent must be >= 1, got {alpha}")
    if alpha == 1:
        vals = {ell * ell - 1, (ell - 1) ** 2, ell - 1}
    else:
        c = ell ** (alpha - 2)
        vals = {c * (ell - 1) * (ell + 1), c * (ell - 1) ** 2, c * ell * (ell - 1)}
    return tuple(sorted(vals))


def lambda_set(n: int) -> LambdaSet:
    if n < 2:
        raise DomainError(f"Lambda(n) needs n >= 2, got {n}")
    choices = tuple((ell, e, lambda_set_prime_power(ell, e)) for ell, e in factorize(n).factors)
    elems = {math.prod(c) for c in product(*(ch for _, _, ch in choices))}
    return LambdaSet(n, tuple(sorted(elems)), choices)


# --------------------------------------------------------------------------
# exact constants

def lambda_exact(ctx: CMContext, ell: int, a: int, b: int) -> int:
    """The constant attached to Z/l^a x Z/l^b torsion for the order ``ctx``."""
    _check_prime(ell)
    if not 0 <= a <= b or b < 1:
        raise DomainError(f"need 0 <= a <= b and b >= 1, got a={a}, b={b}")
    k = kronecker(ctx.order_disc, ell)
    if k == -1:
        if a != b:
            raise ContractError(f"{ell} is inert in the order, then a=b is forced; got a={a}, b={b}")
        return ell ** (2 * b - 2) * (ell * ell - 1)
    if k == 1:
        if a == 0:
            return ell ** (b - 1) * (ell - 1)
        return ell ** (a + b - 2) * (ell - 1) ** 2
    if ctx.fundamental_disc % ell == 0:
        return ell ** (a + b - 1) * (ell - 1)
    return ell ** max(a + b - 2, 0) * (ell - 1) * (ell - kronecker(ctx.fundamental_disc, ell))


def ideal_totient(ell: int, b: int, dk: int) -> int:
    """#(O_K / l^b O_K)^x."""
    _check_prime(ell)
    if b < 1:
        raise DomainError(f"b must be >= 1, got {b}")
    return ell ** (2 * b - 2) * (ell - 1) * (ell - kronecker(dk, ell))


def profile_lambda(profile: TorsionProfile, ctx: CMContext) -> int:
    return math.prod(lambda_exact(ctx, ell, a, b) for ell, a, b in profile.components)


def degree_admissible(profile: TorsionProfile, ctx: CMContext, d: int) -> bool:
    """h_K * prod(lambda) divides 6d."""
    if d < 1:
        raise DomainError(f"degree must be >= 1, got {d}")
    return (6 * d) % (ctx.field.class_number * profile_lambda(profile, ctx)) == 0


def spy_divides(field: ImQuadField, N: int, d: int) -> bool:
    """h_K * phi(N) divides (w_K / 2) * d, for the literal degree d."""
    if N < 1 or d < 1:
        raise DomainError("need N >= 1 and d >= 1")
    return (field.unit_count // 2 * d) % (field.class_number * euler_phi(N)) == 0


def feasible_orders(d: int, n_max: int) -> list[int]:
    """n in [2, n_max] such that some lambda in Lambda(n) divides 12d."""
    if d < 1 or n_max < 2:
        raise DomainError("need d >= 1 and n_max >= 2")
    target = 12 * d
    return [n for n in range(2, n_max + 1)
            if any(target % lam == 0 for lam in lambda_set(n).elements)]


def allowed_odd_degree_group(g: TorsionGroup) -> bool:
    """Whether g can be CM torsion over some odd-degree field."""
    if (g.n1, g.n2) in ((1, 1), (1, 2), (1, 4), (2, 2)):
        return True
    if g.n1 != 1:
        return False
    # Z/l^n needs l = 3 mod 8, Z/2l^n only l = 3 mod 4
    m, mod = (g.n2 // 2, 4) if g.n2 % 2 == 0 else (g.n2, 8)
    if m % 2 == 0:
        return False
    f = factorize(m)
    return f.omega() == 1 and f.factors[0][0] % mod == 3
