"""Verification suites: every structural theorem as an executable check.

Each suite walks the built-in curve battery (plus any user curves) and returns
one record per checked instance, so the CLI and the acceptance tests share a
single source of truth.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .arith import INF, primes_up_to
from .curves import IsogenyCurve, isogenous_curve, new_curve, quadratic_twist
from .local import TwistContext, kummer_image_fast, kummer_image_oracle
from .selmer import (
    compute_selmer,
    exact_structure,
    master_intersection,
    selmer_via_master,
)
from .twists import delta_formulae, enumerate_Q, generate_D

# Curves covering all four sign cases (I, II, III, IV and duplicates).
BATTERY: tuple[tuple[int, int], ...] = (
    (0, -2),
    (0, 2),
    (-3, 1),
    (3, 1),
    (0, 5),
    (0, -5),
    (-1, 3),
    (1, 3),
)

DEFAULT_Q_BOUND = 200
DEFAULT_R_MAX = 3
DEFAULT_D_BOUND = 10**6
LOCAL_ODD_BOUND = 60


@dataclass
class VerificationRecord:
    suite: str
    key: str
    expected: str
    observed: str
    passed: bool = field(default=False)
    seconds: float = 0.0

    def __post_init__(self) -> None:
        self.passed = self.expected == self.observed


def battery_curves(extra: Iterable[tuple[int, int]] = ()) -> list[IsogenyCurve]:
    pairs = list(BATTERY) + [p for p in extra if p not in BATTERY]
    return [new_curve(a, b) for a, b in pairs]


def instance_twists(
    curve: IsogenyCurve, q_bound: int, r_max: int, d_bound: int
) -> list[int]:
    return generate_D(enumerate_Q(curve, q_bound), r_max, d_bound)


def _label(curve: IsogenyCurve) -> str:
    return f"({curve.a},{curve.b})"


def run_local(
    curves: list[IsogenyCurve], q_bound: int = DEFAULT_Q_BOUND, r_max: int = DEFAULT_R_MAX, d_bound: int = DEFAULT_D_BOUND
) -> list[VerificationRecord]:
    """Oracle/fast-path agreement wherever a closed form applies."""
    records = []
    odd_places = [p for p in primes_up_to(LOCAL_ODD_BOUND) if p != 2]
    for curve in curves:
        start = time.perf_counter()
        for place in [INF, 2, *odd_places]:
            fast = kummer_image_fast(curve, place)
            if fast is None:
                continue
            oracle = kummer_image_oracle(curve, place)
            records.append(
                VerificationRecord(
                    "local",
                    f"{_label(curve)} v={place}",
                    str(sorted(oracle.members)),
                    str(sorted(fast.members)),
                    seconds=time.perf_counter() - start,
                )
            )
        for q in enumerate_Q(curve, q_bound):
            twist = quadratic_twist(curve, -q)
            context = TwistContext(curve, q)
            for place in [INF, q, *[p for p in odd_places if p not in twist.bad_support]]:
                fast = kummer_image_fast(twist, place, context)
                if fast is None:
                    continue
                oracle = kummer_image_oracle(twist, place)
                records.append(
                    VerificationRecord(
                        "local",
                        f"{_label(curve)} twist -{q} v={place}",
                        str(sorted(oracle.members)),
                        str(sorted(fast.members)),
                        seconds=time.perf_counter() - start,
                    )
                )
    return records


def _per_instance(
    suite: str,
    curves: list[IsogenyCurve],
    q_bound: int,
    r_max: int,
    d_bound: int,
    check: Callable[[IsogenyCurve, int], tuple[str, str]],
) -> list[VerificationRecord]:
    records = []
    for curve in curves:
        for d in instance_twists(curve, q_bound, r_max, d_bound):
            start = time.perf_counter()
            expected, observed = check(curve, d)
            records.append(
                VerificationRecord(
                    suite,
                    f"{_label(curve)} d={d}",
                    expected,
                    observed,
                    seconds=time.perf_counter() - start,
                )
            )
    return records


def _direct_groups(curve: IsogenyCurve, d: int):
    sel_e = compute_selmer(exact_structure(curve))
    sel_t = compute_selmer(exact_structure(quadratic_twist(curve, -d)))
    return sel_e, sel_t


def observed_deltas(curve: IsogenyCurve, d: int) -> tuple[int, int]:
    """(delta_phi, delta_phi_hat) from direct computation on both isogeny sides."""
    sel_e, sel_t = _direct_groups(curve, d)
    eprime = isogenous_curve(curve)
    sel_ep, sel_ept = _direct_groups(eprime, d)
    return sel_t.dim - sel_e.dim, sel_ept.dim - sel_ep.dim


def run_master(curves, q_bound=DEFAULT_Q_BOUND, r_max=DEFAULT_R_MAX, d_bound=DEFAULT_D_BOUND):
    """Structure theorem: functional cuts of the relaxed group vs direct groups."""

    def check(curve, d):
        via_e, via_t = selmer_via_master(curve, d)
        direct_e, direct_t = _direct_groups(curve, d)
        expected = "equal,equal"
        observed = ",".join(
            "equal" if got.same_space(want) else "differ"
            for got, want in ((via_e, direct_e), (via_t, direct_t))
        )
        return expected, observed

    return _per_instance("master", curves, q_bound, r_max, d_bound, check)


def run_master2(curves, q_bound=DEFAULT_Q_BOUND, r_max=DEFAULT_R_MAX, d_bound=DEFAULT_D_BOUND):
    """Rank-variation table vs observed dimension differences."""

    def check(curve, d):
        report = delta_formulae(curve, d)
        dphi, dhat = observed_deltas(curve, d)
        return f"({report.delta_phi},{report.delta_phi_hat})", f"({dphi},{dhat})"

    return _per_instance("master2", curves, q_bound, r_max, d_bound, check)


def run_parity(curves, q_bound=DEFAULT_Q_BOUND, r_max=DEFAULT_R_MAX, d_bound=DEFAULT_D_BOUND):
    """The sum of the two observed variations is odd for every instance."""

    def check(curve, d):
        dphi, dhat = observed_deltas(curve, d)
        return "odd", "odd" if (dphi + dhat) % 2 == 1 else "even"

    return _per_instance("parity", curves, q_bound, r_max, d_bound, check)


def cassels_local_sum(curve: IsogenyCurve) -> int:
    """Sum over infinity, 2, and odd bad primes of (dim L_v - 1)."""
    places = [INF, *curve.bad_support]
    return sum(kummer_image_oracle(curve, v).dim - 1 for v in places)


def run_cassels(curves, q_bound=DEFAULT_Q_BOUND, r_max=DEFAULT_R_MAX, d_bound=DEFAULT_D_BOUND):
    """Cassels' dimension identity per curve, and the transfer per instance."""
    records = []
    for curve in curves:
        start = time.perf_counter()
        lhs = compute_selmer(exact_structure(curve)).dim
        rhs = compute_selmer(exact_structure(isogenous_curve(curve))).dim
        records.append(
            VerificationRecord(
                "cassels",
                f"{_label(curve)} local-sum",
                str(lhs - rhs),
                str(cassels_local_sum(curve)),
                seconds=time.perf_counter() - start,
            )
        )

    def check(curve, d):
        report = delta_formulae(curve, d)
        dphi, dhat = observed_deltas(curve, d)
        return (
            str(report.omega * report.theta_q + report.theta_inf),
            str(dhat - dphi),
        )

    records.extend(_per_instance("cassels", curves, q_bound, r_max, d_bound, check))
    return records


def run_intersections(curves, q_bound=DEFAULT_Q_BOUND, r_max=DEFAULT_R_MAX, d_bound=DEFAULT_D_BOUND):
    """Closed-form intersection of the two Selmer groups vs the member-set one."""

    def check(curve, d):
        direct_e, direct_t = _direct_groups(curve, d)
        formula = master_intersection(curve, d)
        return (
            str(sorted(c.value for c in direct_e.members & direct_t.members)),
            str(sorted(c.value for c in formula.members)),
        )

    return _per_instance("intersections", curves, q_bound, r_max, d_bound, check)


SUITES: dict[str, Callable[..., list[VerificationRecord]]] = {
    "local": run_local,
    "master": run_master,
    "master2": run_master2,
    "parity": run_parity,
    "cassels": run_cassels,
    "intersections": run_intersections,
}
