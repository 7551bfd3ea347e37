"""Heegner twisting sets, the T_d partition, the F2 block matrices, and the
closed-form rank-variation formulae with their Cassels transfer constants."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import prod
from typing import Optional

from .arith import MINUS_ONE, legendre, primes_up_to
from .curves import IsogenyCurve, is_twisting_prime, sign_case, twisting_prime_factors, SignCase
from .errors import DomainError
from .f2 import F2Matrix
from .f2 import f2_rank as _rank_rows
from .local import td_data
from .selmer import (
    Functional,
    SelmerSubspace,
    compute_selmer,
    relaxed_structure,
)


def f2_rank(matrix: F2Matrix) -> int:
    """Row-echelon rank over F2."""
    return _rank_rows(list(matrix.rows), matrix.ncols)


def enumerate_Q(curve: IsogenyCurve, bound: int) -> list[int]:
    """All qualifying twisting primes up to the bound, ascending."""
    return [q for q in primes_up_to(bound) if q % 8 == 7 and is_twisting_prime(curve, q)]


def generate_D(q_list: list[int], r_max: int, d_bound: int) -> list[int]:
    """Products of r distinct list members for odd r <= r_max, up to d_bound."""
    if r_max % 2 == 0:
        raise DomainError(f"r_max must be odd: {r_max}")
    out = []
    for r in range(1, r_max + 1, 2):
        for combo in combinations(q_list, r):
            d = prod(combo)
            if d <= d_bound:
                out.append(d)
    return sorted(out)


@dataclass(frozen=True)
class TdPartition:
    """Partition of the primes of d by the symbol comparison at each q.

    beta_digest records the chosen root mod q and its residue bit per prime;
    it is diagnostic only (the partition does not depend on the choice).
    """

    d: int
    plus: tuple[int, ...]
    minus: tuple[int, ...]
    beta_digest: tuple[tuple[int, int, int], ...]


def partition_Td(curve: IsogenyCurve, d: int) -> TdPartition:
    """Split the primes of d into T_d^+ and T_d^- (needs b > 0, disc > 0)."""
    if curve.b <= 0 or curve.disc_core <= 0:
        raise DomainError("the partition is defined only when b > 0 and disc > 0")
    qs = twisting_prime_factors(curve, d)
    plus, minus, digest = [], [], []
    for q in qs:
        side, beta = td_data(curve, d, q)
        (plus if side > 0 else minus).append(q)
        digest.append((q, beta, 0 if legendre(beta, q) == 1 else 1))
    return TdPartition(d, tuple(plus), tuple(minus), tuple(digest))


@dataclass(frozen=True)
class TwistMatrices:
    """The four block matrices of pairwise residue symbols among the primes of d."""

    order: tuple[int, ...]
    A: F2Matrix
    A_tilde: F2Matrix
    A_hat: F2Matrix
    A_bar: F2Matrix


def build_matrices(partition: TdPartition) -> TwistMatrices:
    """Assemble A, its augmentations, and its complement from the partition.

    Rows and columns are ordered plus-part then minus-part, ascending within
    each; the identity is added on the minus/minus diagonal block.
    """
    order = tuple(sorted(partition.plus)) + tuple(sorted(partition.minus))
    minus = set(partition.minus)
    r = len(order)
    rows = []
    for p in order:
        row = 0
        for j, q in enumerate(order):
            if p == q:
                bit = 1 if p in minus else 0  # diagonal is 0, plus I on the minus block
            else:
                bit = 0 if legendre(q, p) == 1 else 1
            row |= bit << j
        rows.append(row)
    full = (1 << r) - 1
    a = F2Matrix(tuple(rows), r)
    a_tilde = F2Matrix(tuple(1 | (row << 1) for row in rows), r + 1)
    bar_rows = tuple(row ^ full for row in rows)
    a_bar = F2Matrix(bar_rows, r)
    a_hat = F2Matrix((full, *bar_rows), r)
    return TwistMatrices(order, a, a_tilde, a_hat, a_bar)


def eta_phi(curve: IsogenyCurve, d: int, relaxed: SelmerSubspace) -> int:
    """1 iff the relaxed group has a class whose sign and d-support parity differ.

    Equivalently the functional eps + sum of lambda_q over q | d is nonzero on
    the group; -1 being a member settles it immediately.
    """
    qs = twisting_prime_factors(curve, d)
    if MINUS_ONE in relaxed.members:
        return 1
    functional = Functional(sign=True, lams=qs)
    return 1 if any(functional.of(c) for c in relaxed.basis) else 0


@dataclass(frozen=True)
class DeltaReport:
    """Predicted rank variation for one twist parameter."""

    d: int
    omega: int
    eta: Optional[int]
    delta_phi: int
    delta_phi_hat: int
    theta_q: int
    theta_inf: int
    rank_used: Optional[tuple[str, int]]
    partition: Optional[TdPartition]
    matrices: Optional[TwistMatrices]


_THETA = {
    SignCase.I: (1, 0),
    SignCase.II: (-1, 0),
    SignCase.III: (0, 1),
    SignCase.IV: (0, -1),
}


def delta_formulae(curve: IsogenyCurve, d: int) -> DeltaReport:
    """Evaluate the rank-variation table for (curve, d)."""
    qs = twisting_prime_factors(curve, d)
    omega = len(qs)
    case = sign_case(curve)
    theta_q, theta_inf = _THETA[case]
    eta = partition = matrices = rank_used = None
    if case is SignCase.I:
        dphi, dhat = 0, omega
    elif case is SignCase.II:
        dphi, dhat = omega, 0
    else:
        relaxed = compute_selmer(relaxed_structure(curve, d))
        eta = eta_phi(curve, d, relaxed)
        partition = partition_Td(curve, d)
        matrices = build_matrices(partition)
        if case is SignCase.III:
            if eta:
                r = f2_rank(matrices.A)
                dphi, dhat, rank_used = omega - 1 - r, omega - r, ("A", r)
            else:
                r = f2_rank(matrices.A_hat)
                dphi, dhat, rank_used = omega - r, omega + 1 - r, ("A_hat", r)
        else:
            if eta:
                r = f2_rank(matrices.A_tilde)
                dphi, dhat, rank_used = omega + 1 - r, omega - r, ("A_tilde", r)
            else:
                r = f2_rank(matrices.A_bar)
                dphi, dhat, rank_used = omega - r, omega - 1 - r, ("A_bar", r)
    if (dphi + dhat) % 2 != 1:
        raise AssertionError(f"parity violated for d={d}: {dphi}, {dhat}")
    if dhat - dphi != omega * theta_q + theta_inf:
        raise AssertionError(f"transfer constant violated for d={d}")
    return DeltaReport(
        d, omega, eta, dphi, dhat, theta_q, theta_inf, rank_used, partition, matrices
    )
