"""Selmer groups as F2 subspaces of square classes.

A Selmer structure fixes one local condition per place (the Kummer image by
default, everything at relaxed places, the trivial group at infinity when the
plus flag is set).  The group is computed by enumerating every square class
supported on the bad/relaxed primes and keeping those whose localizations land
in the conditions; the sign/valuation/residue functionals then carve the
twisted groups out of the relaxed one without touching any local data.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .arith import INF, Place, SquareClass, factor, legendre, local_class_code
from .curves import IsogenyCurve, quadratic_twist, sign_case, twisting_prime_factors, SignCase
from .errors import DomainError, ResourceLimitError
from .f2 import F2Matrix, echelon, nullspace
from .local import kummer_image_oracle, td_data

DEFAULT_SIGMA_CAP = 20
SIGMA_CAP_ENV = "ISOSELMER_SIGMA_CAP"


def _sigma_cap() -> int:
    return int(os.environ.get(SIGMA_CAP_ENV, DEFAULT_SIGMA_CAP))


# ---------------------------------------------------------------------------
# Functionals on square classes


def eval_epsilon(alpha: SquareClass) -> int:
    """Sign bit: 1 iff the representative is negative."""
    return 1 if alpha.negative else 0


def eval_lambda(alpha: SquareClass, p: int) -> int:
    """Valuation parity at p."""
    return 1 if p in alpha.primes else 0


def eval_gamma(alpha: SquareClass, p: int) -> int:
    """Residue bit of the prime-to-p part: 1 iff it is a nonresidue mod p."""
    if p == 2:
        raise DomainError("gamma is undefined at 2")
    u = alpha.value
    if p in alpha.primes:
        u //= p
    return 0 if legendre(u, p) == 1 else 1


@dataclass(frozen=True)
class Functional:
    """An F2-linear combination of the sign, valuation, and residue maps."""

    sign: bool = False
    lams: tuple[int, ...] = ()
    gams: tuple[int, ...] = ()

    def of(self, alpha: SquareClass) -> int:
        bit = eval_epsilon(alpha) if self.sign else 0
        for p in self.lams:
            bit ^= eval_lambda(alpha, p)
        for p in self.gams:
            bit ^= eval_gamma(alpha, p)
        return bit


def eps_functional() -> Functional:
    return Functional(sign=True)


def lambda_functional(p: int) -> Functional:
    return Functional(lams=(p,))


def gamma_functional(p: int) -> Functional:
    return Functional(gams=(p,))


def gamma_plus_lambda_functional(p: int) -> Functional:
    return Functional(lams=(p,), gams=(p,))


# ---------------------------------------------------------------------------
# Structures and subspaces


@dataclass(frozen=True)
class SelmerStructure:
    """A curve plus the set of relaxed places and the infinity override."""

    curve: IsogenyCurve
    relaxed: frozenset[Place] = frozenset()
    plus: bool = False


def exact_structure(curve: IsogenyCurve) -> SelmerStructure:
    return SelmerStructure(curve)


def plus_structure(curve: IsogenyCurve) -> SelmerStructure:
    return SelmerStructure(curve, plus=True)


def relaxed_structure(curve: IsogenyCurve, d: int) -> SelmerStructure:
    """Conditions dropped at the primes of d and at infinity.

    Accepts any positive squarefree d; whether d qualifies as a Heegner twist
    parameter is the caller's concern.
    """
    fac = factor(d) if d > 0 else None
    if fac is None or any(e > 1 for _, e in fac.factors):
        raise DomainError(f"relaxation set needs a positive squarefree d: {d}")
    return SelmerStructure(curve, frozenset(p for p, _ in fac.factors) | {INF})


@dataclass(frozen=True)
class SelmerSubspace:
    """An F2 subspace of square classes supported on sigma (plus the sign)."""

    sigma: tuple[int, ...]
    basis: tuple[SquareClass, ...]
    members: frozenset[SquareClass]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, alpha: SquareClass) -> bool:
        return alpha in self.members

    def same_space(self, other: "SelmerSubspace") -> bool:
        """Equality as subgroups of Q^x / Q^x2, ignoring the supporting set."""
        return self.members == other.members


def _iota_mask(alpha: SquareClass, sigma: tuple[int, ...]) -> int:
    mask = 1 if alpha.negative else 0
    for i, p in enumerate(sigma):
        if p in alpha.primes:
            mask |= 1 << (i + 1)
    return mask


def _class_of_mask(mask: int, sigma: tuple[int, ...]) -> SquareClass:
    primes = tuple(p for i, p in enumerate(sigma) if mask >> (i + 1) & 1)
    return SquareClass(bool(mask & 1), primes)


def _subspace_from_masks(masks: Iterable[int], sigma: tuple[int, ...]) -> SelmerSubspace:
    basis_masks = echelon(sorted(masks), len(sigma) + 1)
    members = frozenset(_class_of_mask(m, sigma) for m in masks)
    return SelmerSubspace(sigma, tuple(_class_of_mask(m, sigma) for m in basis_masks), members)


def span_subspace(
    generators: Iterable[SquareClass], sigma: tuple[int, ...]
) -> SelmerSubspace:
    """The subspace spanned by the given classes, all supported on sigma."""
    gen_masks = [_iota_mask(c, sigma) for c in generators]
    masks = set()
    for mask in range(1 << len(gen_masks)):
        acc = 0
        for i, g in enumerate(gen_masks):
            if mask >> i & 1:
                acc ^= g
        masks.add(acc)
    return _subspace_from_masks(masks, sigma)


@lru_cache(maxsize=None)
def compute_selmer(
    structure: SelmerStructure, extra_support: tuple[int, ...] = ()
) -> SelmerSubspace:
    """Enumerate the Selmer group of a structure over its supporting set.

    The support is {2}, the odd bad primes, the finite relaxed primes, and any
    padding in extra_support; conditions at good places outside the support
    hold automatically.  Good odd primes inside the support contribute the
    unramified condition, everything else queries the local oracle.
    """
    curve = structure.curve
    sigma = tuple(
        sorted(
            set(curve.bad_support)
            | {int(v) for v in structure.relaxed if v != INF}
            | set(extra_support)
        )
    )
    if len(sigma) + 1 > _sigma_cap():
        raise ResourceLimitError(
            f"supporting set has {len(sigma)} primes; cap is {_sigma_cap() - 1}"
        )
    conditions: list[tuple[tuple[int, ...], frozenset[int]]] = []
    places: list[Place] = [INF, *sigma]
    gens = [SquareClass(True, ())] + [SquareClass(False, (p,)) for p in sigma]
    for v in places:
        if v == INF:
            if structure.plus:
                allowed = frozenset((0,))
            elif INF in structure.relaxed:
                continue
            else:
                allowed = kummer_image_oracle(curve, INF).codes
        elif v in structure.relaxed:
            continue
        elif v == 2 or v in curve.bad_support:
            allowed = kummer_image_oracle(curve, v).codes
        else:
            allowed = frozenset((0, 1))  # unramified: unit classes only
        gen_codes = tuple(local_class_code(g, v) for g in gens)
        conditions.append((gen_codes, allowed))
    nbits = len(sigma) + 1
    member_masks = []
    for mask in range(1 << nbits):
        ok = True
        for gen_codes, allowed in conditions:
            code = 0
            m = mask
            while m:
                low = m & -m
                code ^= gen_codes[low.bit_length() - 1]
                m ^= low
            if code not in allowed:
                ok = False
                break
        if ok:
            member_masks.append(mask)
    return _subspace_from_masks(member_masks, sigma)


def intersect_with_functionals(
    space: SelmerSubspace, fns: Sequence[Functional]
) -> SelmerSubspace:
    """The subspace killed by every functional (membership-filtered)."""
    if not fns:
        return space
    masks = [
        _iota_mask(c, space.sigma)
        for c in space.members
        if all(f.of(c) == 0 for f in fns)
    ]
    return _subspace_from_masks(masks, space.sigma)


def matrix_kernel(space: SelmerSubspace, fns: Sequence[Functional]) -> SelmerSubspace:
    """Same kernel via the matrix of the functionals on the basis."""
    rows = []
    for f in fns:
        row = 0
        for j, c in enumerate(space.basis):
            if f.of(c):
                row |= 1 << j
        rows.append(row)
    coeff_vectors = nullspace(rows, len(space.basis))
    span_masks = set()
    for mask in range(1 << len(coeff_vectors)):
        acc = 0
        for i, cv in enumerate(coeff_vectors):
            if mask >> i & 1:
                m = cv
                while m:
                    low = m & -m
                    acc ^= _iota_mask(space.basis[low.bit_length() - 1], space.sigma)
                    m ^= low
        span_masks.add(acc)
    return _subspace_from_masks(span_masks, space.sigma)


def restricted_matrix(space: SelmerSubspace, kind: str, primes: tuple[int, ...] = ()) -> F2Matrix:
    """Matrix of sign / valuation / residue functionals on the basis.

    Rows are the functionals (one per prime, or the single sign row), column j
    is the value on the j-th basis class.
    """
    if kind == "sign":
        fns = [eps_functional()]
    elif kind == "lambda":
        fns = [lambda_functional(p) for p in primes]
    elif kind == "gamma":
        fns = [gamma_functional(p) for p in primes]
    else:
        raise DomainError(f"unknown matrix kind {kind!r}")
    rows = []
    for f in fns:
        row = 0
        for j, c in enumerate(space.basis):
            if f.of(c):
                row |= 1 << j
        rows.append(row)
    return F2Matrix(tuple(rows), len(space.basis))


# ---------------------------------------------------------------------------
# The structure theorem: both Selmer groups from the relaxed one


def _twist_functionals(curve: IsogenyCurve, d: int, qs: tuple[int, ...]) -> list[Functional]:
    fns = []
    for q in qs:
        side, _ = td_data(curve, d, q)
        fns.append(gamma_functional(q) if side > 0 else gamma_plus_lambda_functional(q))
    return fns


def selmer_via_master(
    curve: IsogenyCurve, d: int
) -> tuple[SelmerSubspace, SelmerSubspace]:
    """(Sel of the curve, Sel of its twist by -d), both cut from the relaxed group.

    No local computation happens at the primes of d or at infinity; the case
    table only ever intersects the relaxed group with functional kernels.
    """
    qs = twisting_prime_factors(curve, d)
    case = sign_case(curve)
    relaxed = compute_selmer(relaxed_structure(curve, d))
    eps = eps_functional()
    lams = [lambda_functional(q) for q in qs]
    if case is SignCase.I:
        both = intersect_with_functionals(relaxed, [eps, *lams])
        return both, both
    if case is SignCase.II:
        return intersect_with_functionals(relaxed, lams), relaxed
    twist_fns = _twist_functionals(curve, d, qs)
    if case is SignCase.III:
        return (
            intersect_with_functionals(relaxed, lams),
            intersect_with_functionals(relaxed, [eps, *twist_fns]),
        )
    return (
        intersect_with_functionals(relaxed, [eps, *lams]),
        intersect_with_functionals(relaxed, twist_fns),
    )


def master_intersection(curve: IsogenyCurve, d: int) -> SelmerSubspace:
    """The intersection Sel(E) with Sel(E^-d) by the case-wise closed form."""
    qs = twisting_prime_factors(curve, d)
    case = sign_case(curve)
    relaxed = compute_selmer(relaxed_structure(curve, d))
    eps = eps_functional()
    lams = [lambda_functional(q) for q in qs]
    if case is SignCase.I:
        return intersect_with_functionals(relaxed, [eps, *lams])
    if case is SignCase.II:
        return intersect_with_functionals(relaxed, lams)
    return intersect_with_functionals(relaxed, [eps, *lams])


def selmer_dimension(curve: IsogenyCurve) -> int:
    return compute_selmer(exact_structure(curve)).dim


def twisted_dimensions(curve: IsogenyCurve, d: int) -> tuple[int, int]:
    """(dim Sel of curve, dim Sel of the twist by -d), both computed directly."""
    base = compute_selmer(exact_structure(curve)).dim
    twist = compute_selmer(exact_structure(quadratic_twist(curve, -d))).dim
    return base, twist
