"""Curve models y^2 = x(x^2 + a x + b): validation, the 2-isogenous curve,
quadratic twists, bad-prime support, and the sign-case classification."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from math import isqrt

from .arith import factor, legendre
from .errors import (
    DomainError,
    FullTwoTorsionError,
    InvalidModelError,
    UnsupportedConfigurationError,
)


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


class SignCase(Enum):
    """The four mutually exclusive sign configurations of (b, disc, a)."""

    I = "I"  # b < 0 (forces disc > 0)
    II = "II"  # b > 0, disc < 0
    III = "III"  # b > 0, disc > 0, a < 0
    IV = "IV"  # b > 0, disc > 0, a > 0


@dataclass(frozen=True)
class IsogenyCurve:
    """y^2 = x(x^2 + a x + b) with its distinguished 2-isogeny at (0, 0).

    Construction only rejects singular models; use new_curve() for the public
    constructor that additionally rejects full rational 2-torsion.  Curves
    derived from a valid one (the isogenous curve when b is a perfect square)
    may legitimately carry full 2-torsion and still support the descent.
    """

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.b == 0 or self.a * self.a - 4 * self.b == 0:
            raise InvalidModelError(f"singular model a={self.a}, b={self.b}")

    @property
    def disc_core(self) -> int:
        """a^2 - 4b; the discriminant is 16 b^2 (a^2 - 4b)."""
        return self.a * self.a - 4 * self.b

    @property
    def disc_sign(self) -> int:
        return 1 if self.disc_core > 0 else -1

    @cached_property
    def bad_support(self) -> tuple[int, ...]:
        """{2} plus every odd prime dividing b (a^2 - 4b).

        A conservative superset of the true bad primes: sound for restricting
        the twisting sets, no minimal model needed.  b and a^2 - 4b are
        factored separately to keep twisted curves inside the factor bound.
        """
        odd = {
            p
            for n in (self.b, self.disc_core)
            for p, _ in factor(n).factors
            if p != 2
        }
        return tuple(sorted({2} | odd))

    @property
    def has_partial_two_torsion(self) -> bool:
        return not _is_square(self.disc_core)


def new_curve(a: int, b: int) -> IsogenyCurve:
    """Validated public constructor; requires E(Q)[2] of order exactly 2."""
    curve = IsogenyCurve(a, b)
    if not curve.has_partial_two_torsion:
        raise FullTwoTorsionError(
            f"a^2 - 4b = {curve.disc_core} is a perfect square: full 2-torsion"
        )
    return curve


def isogenous_curve(curve: IsogenyCurve) -> IsogenyCurve:
    """The 2-isogenous curve y^2 = x(x^2 - 2a x + (a^2 - 4b))."""
    return IsogenyCurve(-2 * curve.a, curve.disc_core)


def quadratic_twist(curve: IsogenyCurve, m: int) -> IsogenyCurve:
    """The quadratic twist by a squarefree m: (a, b) -> (a m, b m^2)."""
    if m == 0:
        raise DomainError("twist parameter must be nonzero")
    if any(e > 1 for _, e in factor(m).factors):
        raise DomainError(f"twist parameter must be squarefree: {m}")
    return IsogenyCurve(curve.a * m, curve.b * m * m)


def sign_case(curve: IsogenyCurve) -> SignCase:
    """Classify a curve with partial 2-torsion into cases I-IV."""
    if not curve.has_partial_two_torsion:
        raise FullTwoTorsionError("sign case is defined under partial 2-torsion only")
    if curve.b < 0:
        return SignCase.I
    if curve.disc_core < 0:
        return SignCase.II
    if curve.a == 0:
        # b > 0 with a = 0 forces disc = -4b < 0, so this cannot be reached.
        raise UnsupportedConfigurationError("a = 0 with b > 0 cannot have disc > 0")
    return SignCase.III if curve.a < 0 else SignCase.IV


def is_twisting_prime(curve: IsogenyCurve, q: int) -> bool:
    """Whether q qualifies for the Heegner twisting set of the curve.

    q = 7 mod 8 and -q a square mod every odd prime of bad reduction; such q
    is automatically a prime of good reduction.
    """
    if q % 8 != 7:
        return False
    return all(legendre(-q, p) == 1 for p in curve.bad_support if p != 2)


def twisting_prime_factors(curve: IsogenyCurve, d: int) -> tuple[int, ...]:
    """The prime factors of d, validating d as a Heegner twist parameter.

    d must be a product of an odd number of distinct qualifying primes.
    """
    if d <= 0:
        raise DomainError(f"twist parameter must be positive: {d}")
    fac = factor(d)
    if any(e > 1 for _, e in fac.factors):
        raise DomainError(f"twist parameter must be squarefree: {d}")
    qs = tuple(p for p, _ in fac.factors)
    if len(qs) % 2 == 0:
        raise DomainError(f"twist parameter needs an odd number of prime factors: {d}")
    for q in qs:
        if not is_twisting_prime(curve, q):
            raise DomainError(f"{q} is not a qualifying twisting prime for the curve")
    return qs
