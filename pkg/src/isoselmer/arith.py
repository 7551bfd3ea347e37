"""Exact integer arithmetic: factorization, quadratic symbols, square classes,
p-adic square roots, and canonical representatives of the local groups
Q_v^x / Q_v^x2.

Everything here is pure and deterministic; no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator, Optional, Union

from .errors import DomainError, ResourceLimitError

# Sentinel for the archimedean place.  Finite places are the primes themselves.
INF = float("inf")
Place = Union[int, float]

# Largest |n| accepted by factor(): the proven deterministic range of
# Miller-Rabin with the prime bases 2..41.
FACTOR_BOUND = 3_317_044_064_679_887_385_961_980

_TRIAL_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 0 <= n < 2**64 (and beyond)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Find a nontrivial factor of an odd composite n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        x = y = 2
        c = seed
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d


@dataclass(frozen=True)
class PrimeFactorization:
    """Sign and sorted (prime, exponent) pairs whose product rebuilds the input."""

    unit_sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = self.unit_sign
        for p, e in self.factors:
            out *= p**e
        return out


def factor(n: int) -> PrimeFactorization:
    """Factor a nonzero integer by trial division, then Pollard rho."""
    if n == 0:
        raise DomainError("cannot factor 0")
    if abs(n) > FACTOR_BOUND:
        raise ResourceLimitError(f"|n| exceeds the declared factorization bound: {n}")
    sign = 1 if n > 0 else -1
    m = abs(n)
    exps: dict[int, int] = {}
    for p in (2, 3, 5):
        while m % p == 0:
            exps[p] = exps.get(p, 0) + 1
            m //= p
    q = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while q * q <= m and q <= _TRIAL_LIMIT:
        while m % q == 0:
            exps[q] = exps.get(q, 0) + 1
            m //= q
        q += wheel[i]
        i = (i + 1) % 8
    # Whatever survives trial division is prime or a product of two+ large primes.
    stack = [m] if m > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            exps[m] = exps.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return PrimeFactorization(sign, tuple(sorted(exps.items())))


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound via a plain sieve."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(2, bound + 1) if sieve[p]]


# ---------------------------------------------------------------------------
# Square classes of Q^x / Q^x2


@dataclass(frozen=True)
class SquareClass:
    """A square class of Q^x, stored as a sign bit and the squarefree support."""

    negative: bool
    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.primes) != sorted(set(self.primes)):
            raise DomainError(f"support must be strictly increasing: {self.primes}")

    @property
    def value(self) -> int:
        """The canonical signed squarefree representative."""
        out = -1 if self.negative else 1
        for p in self.primes:
            out *= p
        return out

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        sym = set(self.primes) ^ set(other.primes)
        return SquareClass(self.negative ^ other.negative, tuple(sorted(sym)))

    def is_one(self) -> bool:
        return not self.negative and not self.primes


ONE = SquareClass(False, ())
MINUS_ONE = SquareClass(True, ())


def square_class(n: int) -> SquareClass:
    """The class of a nonzero integer in Q^x / Q^x2."""
    if n == 0:
        raise DomainError("0 has no square class")
    fac = factor(n)
    return SquareClass(fac.unit_sign < 0, tuple(p for p, e in fac.factors if e % 2))


# ---------------------------------------------------------------------------
# Quadratic symbols


@lru_cache(maxsize=None)
def _checked_odd_prime(p: int) -> bool:
    return p % 2 == 1 and is_prime(p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    if not _checked_odd_prime(p):
        raise DomainError(f"legendre requires an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    """The least positive quadratic nonresidue mod an odd prime p."""
    u = 2
    while legendre(u, p) != -1:
        u += 1
    return u


def _two_adic_unit_bits(u: int) -> tuple[int, int]:
    # eps = (u-1)/2 mod 2, omega = (u^2-1)/8 mod 2, for odd u (sign included).
    return ((u - 1) // 2) % 2, ((u * u - 1) // 8) % 2


def hilbert(alpha: SquareClass, beta: SquareClass, place: Place) -> int:
    """Quadratic Hilbert symbol (alpha, beta)_v in {+1, -1}."""
    a, b = alpha.value, beta.value
    if place == INF:
        return -1 if (a < 0 and b < 0) else 1
    p = int(place)
    if p == 2:
        i = 1 if 2 in alpha.primes else 0
        j = 1 if 2 in beta.primes else 0
        u, w = a // (2**i), b // (2**j)
        eu, ou = _two_adic_unit_bits(u)
        ew, ow = _two_adic_unit_bits(w)
        return -1 if (eu * ew + i * ow + j * ou) % 2 else 1
    if not _checked_odd_prime(p):
        raise DomainError(f"hilbert place must be a prime or INF, got {place}")
    i = 1 if p in alpha.primes else 0
    j = 1 if p in beta.primes else 0
    u, w = a // (p**i), b // (p**j)
    sign = 1
    if i and j and (p - 1) // 2 % 2:
        sign = -sign
    if j:
        sign *= legendre(u, p)
    if i:
        sign *= legendre(w, p)
    return sign


# ---------------------------------------------------------------------------
# p-adic square roots


def _sqrt_mod_prime(c: int, p: int) -> int:
    """Tonelli-Shanks square root of c mod an odd prime p; c must be a residue."""
    c %= p
    if p % 4 == 3:
        return pow(c, (p + 1) // 4, p)
    # Write p-1 = q * 2^s with q odd.
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = least_nonresidue(p)
    m, t, r = s, pow(c, q, p), pow(c, (q + 1) // 2, p)
    w = pow(z, q, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(w, 1 << (m - i - 1), p)
        m, w = i, b * b % p
        t = t * w % p
        r = r * b % p
    return r


def sqrt_hensel(c: int, p: int, k: int) -> Optional[int]:
    """Least r with r^2 = c mod p^k, or None when c is a nonresidue mod p.

    Requires p odd and c a p-adic unit; the quadratic Newton step doubles
    precision each round.
    """
    if not _checked_odd_prime(p):
        raise DomainError(f"sqrt_hensel requires an odd prime, got {p}")
    if k < 1:
        raise DomainError("precision k must be >= 1")
    if c % p == 0:
        raise DomainError(f"sqrt_hensel requires a unit, got {c} at {p}")
    if legendre(c, p) == -1:
        return None
    r = _sqrt_mod_prime(c, p)
    prec, mod = 1, p
    while prec < k:
        prec = min(2 * prec, k)
        mod = p**prec
        r = (r - (r * r - c) * pow(2 * r, -1, mod)) % mod
    return min(r, mod - r)


# ---------------------------------------------------------------------------
# Canonical local representatives of Q_v^x / Q_v^x2
#
# Odd p: {1, u, p, u*p} with u the least positive nonresidue; p = 2: the eight
# classes {+-1, +-2, +-5, +-10}; infinity: {+1, -1}.  Each class gets a small
# bit code so that multiplication in the local group is XOR of codes.

_TWO_ADIC_REPS = (1, -1, 2, -2, 5, -5, 10, -10)


@dataclass(frozen=True)
class LocalClassRep:
    """A canonical coset representative of Q_v^x / Q_v^x2."""

    place: Place
    rep: int


def local_reps(place: Place) -> tuple[int, ...]:
    """The fixed canonical representative list for a place."""
    if place == INF:
        return (1, -1)
    p = int(place)
    if p == 2:
        return _TWO_ADIC_REPS
    u = least_nonresidue(p)
    return (1, u, p, u * p)


def rep_to_code(place: Place, rep: int) -> int:
    """Bit code of a canonical representative (XOR of codes = product of classes)."""
    if place == INF:
        return 0 if rep > 0 else 1
    p = int(place)
    if p == 2:
        s = 1 if rep < 0 else 0
        f = 1 if abs(rep) % 5 == 0 else 0
        v = 1 if abs(rep) % 2 == 0 else 0
        return s | (f << 1) | (v << 2)
    u = least_nonresidue(p)
    if rep == 1:
        return 0
    if rep == u:
        return 1
    if rep == p:
        return 2
    if rep == u * p:
        return 3
    raise DomainError(f"{rep} is not a canonical representative at {p}")


def code_to_rep(place: Place, code: int) -> int:
    reps = local_reps(place)
    if place == INF:
        return reps[code]
    if int(place) == 2:
        s, f, v = code & 1, (code >> 1) & 1, (code >> 2) & 1
        return (-1 if s else 1) * (5 if f else 1) * (2 if v else 1)
    u = least_nonresidue(int(place))
    return (u if code & 1 else 1) * (int(place) if code & 2 else 1)


def local_class_code(c: SquareClass, place: Place) -> int:
    """Bit code of the image of a square class in Q_v^x / Q_v^x2."""
    if place == INF:
        return 1 if c.negative else 0
    p = int(place)
    val = c.value
    if p == 2:
        v = 1 if 2 in c.primes else 0
        u = val // (2**v)
        m = u % 8
        s = 1 if m in (3, 7) else 0
        f = 1 if m in (3, 5) else 0
        return s | (f << 1) | (v << 2)
    j = 1 if p in c.primes else 0
    u = val // (p**j)
    i = 1 if legendre(u, p) == -1 else 0
    return i | (j << 1)


def localize(c: SquareClass, place: Place) -> LocalClassRep:
    """Canonical local representative of a square class at a place."""
    return LocalClassRep(place, code_to_rep(place, local_class_code(c, place)))


def squarefree_classes(support: tuple[int, ...]) -> Iterator[SquareClass]:
    """All square classes supported on the given primes (both signs)."""
    n = len(support)
    for mask in range(1 << (n + 1)):
        neg = bool(mask & 1)
        primes = tuple(support[i] for i in range(n) if mask >> (i + 1) & 1)
        yield SquareClass(neg, primes)
