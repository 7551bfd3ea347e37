"""Local Kummer images L_v of the descent at (0, 0), computed two ways.

The oracle decides, for each canonical square class alpha, whether the
homogeneous space

    alpha w^2 = alpha^2 t^4 - 2 a alpha t^2 + (a^2 - 4b)

has a Q_v-point; the set of solvable classes is the local image.  Multiplying
through by alpha turns each affine patch into an integral quartic y^2 = g(t)
(the second patch is the coefficient reversal, covering t = infinity), so local
solvability reduces to the classical residue-refinement search with Hensel
certificates.  The fast paths transcribe the closed-form descriptions at good
odd places, at the real place, and at primes dividing the twist, and are tested
against the oracle rather than trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .arith import (
    INF,
    Place,
    SquareClass,
    code_to_rep,
    least_nonresidue,
    legendre,
    local_class_code,
    local_reps,
    rep_to_code,
    sqrt_hensel,
    square_class,
)
from .curves import IsogenyCurve, quadratic_twist
from .errors import DomainError, PrecisionError

_BIG = 1 << 30  # valuation sentinel for a vanishing derivative


@dataclass(frozen=True)
class TorsorProblem:
    """Does the descent torsor of alpha have a point over Q_place?"""

    alpha: SquareClass
    curve: IsogenyCurve
    place: Place


@dataclass(frozen=True)
class LocalSubgroup:
    """A subgroup of Q_v^x / Q_v^x2 as a set of canonical representatives."""

    place: Place
    members: frozenset[int]

    def __post_init__(self) -> None:
        codes = self.codes
        if 0 not in codes:
            raise DomainError("local subgroup must contain the identity class")
        for x in codes:
            for y in codes:
                if x ^ y not in codes:
                    raise DomainError("local subgroup not closed under products")

    @property
    def codes(self) -> frozenset[int]:
        return frozenset(rep_to_code(self.place, r) for r in self.members)

    @property
    def dim(self) -> int:
        return len(self.members).bit_length() - 1

    def contains(self, c: SquareClass) -> bool:
        return local_class_code(c, self.place) in self.codes


def _valuation(n: int, p: int) -> int:
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _eval_poly(coeffs: tuple[int, ...], x: int) -> int:
    out = 0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _shift_scale(coeffs: tuple[int, ...], x0: int, p: int) -> tuple[int, ...]:
    """Coefficients of g(x0 + p t) from those of g (low degree first)."""
    shifted = list(coeffs)
    # Taylor shift by x0 via repeated synthetic division.
    n = len(shifted)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            shifted[j] += x0 * shifted[j + 1]
    return tuple(c * p**j for j, c in enumerate(shifted))


def _zp_solvable_odd(
    coeffs: tuple[int, ...], p: int, want_odd: int, depth: int
) -> bool:
    """Whether p^want_odd * g(t) is a square (or zero) for some t in Z_p, p odd.

    One level scans the residues mod p in single-word arithmetic: a unit value
    is decided by its residue class alone (and by the parity flag), so only the
    roots of g mod p survive.  Each root is blown up by t -> x0 + p t, the
    content p^e is extracted, and the parity flag absorbs e.  The quartics fed
    in are squarefree, so the root clusters separate after finitely many
    blow-ups and every path terminates.
    """
    if depth < 0:
        raise PrecisionError(
            f"p-adic search at p={p} exceeded its depth bound; "
            "this indicates a bug in the precision bound"
        )
    squares = {i * i % p for i in range(1, p // 2 + 1)}
    reduced = [c % p for c in coeffs]
    roots = []
    for x0 in range(p):
        r = 0
        for c in reversed(reduced):
            r = (r * x0 + c) % p
        if r == 0:
            roots.append(x0)
        elif not want_odd and r in squares:
            return True
    # Unit residues are all settled; only now descend into the roots mod p
    # (descending first could chase a p-adic root past the depth bound even
    # though a sibling residue at this level already certifies solvability).
    for x0 in roots:
        value = _eval_poly(coeffs, x0)
        if value == 0:
            return True  # y = 0: the point is a 2-torsion image
        blown = _shift_scale(coeffs, x0, p)
        e = min(_valuation(c, p) for c in blown if c)
        scale = p**e
        if _zp_solvable_odd(
            tuple(c // scale for c in blown), p, (want_odd + e) % 2, depth - 1
        ):
            return True
    return False


def _zp_solvable_two(coeffs: tuple[int, ...], max_depth: int) -> bool:
    """Whether y^2 = g(t) has t in Z_2, y in Q_2.

    Depth-first refinement of residue classes t = x0 mod 2^nu.  A node is
    certified solvable when the value is an exact square pattern, or by the
    Hensel criterion (value valuation beating twice the derivative valuation);
    it is killed when the value's valuation and unit part mod 8 are frozen on
    the whole branch and are not a square pattern.
    """
    deriv = tuple(j * c for j, c in enumerate(coeffs))[1:]
    stack = [(0, 0)]
    while stack:
        x0, nu = stack.pop()
        gx = _eval_poly(coeffs, x0)
        if gx == 0:
            return True
        l = _valuation(gx, 2)
        if l % 2 == 0 and (gx >> l) % 8 == 1:
            return True
        gdx = _eval_poly(deriv, x0)
        m = _valuation(gdx, 2) if gdx else _BIG
        if l >= 2 * m + 4:
            return True
        if min(nu + m, 2 * nu) >= l + 3:
            continue
        if nu + 1 > max_depth:
            raise PrecisionError(
                "2-adic search exceeded its depth bound; "
                "this indicates a bug in the precision bound"
            )
        stack.append((x0, nu + 1))
        stack.append((x0 + (1 << nu), nu + 1))
    return False


def _zp_solvable(c4: int, c2: int, c0: int, p: int, max_depth: int) -> bool:
    """Whether y^2 = c4 t^4 + c2 t^2 + c0 has t in Z_p, y in Q_p."""
    coeffs = (c0, 0, c2, 0, c4)
    if p == 2:
        return _zp_solvable_two(coeffs, max_depth)
    return _zp_solvable_odd(coeffs, p, 0, max_depth)


def _search_depth(curve: IsogenyCurve, p: int) -> int:
    return (8 if p == 2 else 0) + 2 * _valuation(curve.b * curve.disc_core, p) + 5


def _real_solvable(alpha: SquareClass, curve: IsogenyCurve) -> bool:
    # alpha > 0: the quartic has positive leading coefficient, so large t works.
    # alpha < 0: need the quartic to reach a non-positive value on t^2 >= 0.
    if not alpha.negative:
        return True
    if curve.b > 0 and curve.a <= 0:
        return True
    return curve.disc_core < 0


def torsor_solvable(problem: TorsorProblem) -> bool:
    """Whether alpha lies in the local Kummer image at the given place."""
    alpha, curve, place = problem.alpha, problem.curve, problem.place
    if place == INF:
        return _real_solvable(alpha, curve)
    p = int(place)
    a_val = alpha.value
    c4, c2, c0 = a_val**3, -2 * curve.a * a_val * a_val, a_val * curve.disc_core
    depth = _search_depth(curve, p) + 2 * _valuation(a_val, p)
    if _zp_solvable(c4, c2, c0, p, depth):
        return True
    return _zp_solvable(c0, c2, c4, p, depth)


@lru_cache(maxsize=None)
def kummer_image_oracle(curve: IsogenyCurve, place: Place) -> LocalSubgroup:
    """The local image at a place, decided class by class by the torsor oracle."""
    members = frozenset(
        rep
        for rep in local_reps(place)
        if torsor_solvable(TorsorProblem(square_class(rep), curve, place))
    )
    return LocalSubgroup(place, members)  # closure is checked on construction


@dataclass(frozen=True)
class TwistContext:
    """Marks a curve as the twist of `base` by -d, enabling the q | d fast path."""

    base: IsogenyCurve
    d: int


def td_data(base: IsogenyCurve, d: int, q: int) -> tuple[int, int]:
    """(side, beta mod q) for a prime q | d when b > 0 and disc > 0.

    side is +1 when the twisted local image at q is generated by q, and -1
    when it is generated by -q.  beta is the chosen root of the split
    quadratic x^2 - 2a x + (a^2 - 4b) mod q; only its residue symbol matters,
    and the answer is independent of which root is taken.
    """
    if base.b <= 0 or base.disc_core <= 0:
        raise DomainError("the q-partition needs b > 0 and positive discriminant")
    if d % q != 0:
        raise DomainError(f"{q} does not divide {d}")
    s = sqrt_hensel(4 * base.b % q, q, 1)
    if s is None:
        raise DomainError(f"4b is a nonresidue mod {q}; {q} is not a qualifying prime")
    beta = (base.a + s) % q
    side = 1 if legendre(d // q, q) != legendre(beta, q) else -1
    return side, beta


def _unit_subgroup(p: int) -> LocalSubgroup:
    return LocalSubgroup(p, frozenset((1, least_nonresidue(p))))


def _full_group(place: Place) -> LocalSubgroup:
    return LocalSubgroup(place, frozenset(local_reps(place)))


def _trivial_group(place: Place) -> LocalSubgroup:
    return LocalSubgroup(place, frozenset((1,)))


def kummer_image_fast(
    curve: IsogenyCurve, place: Place, context: Optional[TwistContext] = None
) -> Optional[LocalSubgroup]:
    """Closed-form local image where a lemma covers the place; None otherwise.

    Covered: the real place (sign table), good odd primes (unramified
    subgroup), and primes dividing d when `curve` is the twist of context.base
    by -d.  The place 2 and odd bad primes have no closed form; callers fall
    back to the oracle there.
    """
    if place == INF:
        full = (curve.b > 0 and curve.disc_core < 0) or (
            curve.b > 0 and curve.disc_core > 0 and curve.a < 0
        )
        return _full_group(INF) if full else _trivial_group(INF)
    p = int(place)
    if context is not None and context.d % p == 0:
        base = context.base
        if quadratic_twist(base, -context.d) != curve:
            raise DomainError("context does not describe this curve as a twist")
        if base.b < 0:
            return _trivial_group(p)
        if base.disc_core < 0:
            return _full_group(p)
        side, _ = td_data(base, context.d, p)
        gen = SquareClass(side < 0, (p,))  # the class of q, or of -q
        return LocalSubgroup(p, frozenset((1, code_to_rep(p, local_class_code(gen, p)))))
    if p != 2 and p not in curve.bad_support:
        return _unit_subgroup(p)
    return None
