"""Local Kummer images: torsor oracle, closed-form fast paths, twist invariance."""

import pytest

from isoselmer.arith import INF, primes_up_to, square_class
from isoselmer.curves import isogenous_curve, new_curve, quadratic_twist
from isoselmer.errors import DomainError
from isoselmer.local import (
    LocalSubgroup,
    TorsorProblem,
    TwistContext,
    kummer_image_fast,
    kummer_image_oracle,
    td_data,
    torsor_solvable,
)
from isoselmer.twists import enumerate_Q

BATTERY = [(0, -2), (0, 2), (-3, 1), (3, 1), (0, 5), (0, -5), (-1, 3), (1, 3)]
PLACES = [INF, 2] + [p for p in primes_up_to(60) if p != 2]


def test_trivial_class_always_solvable():
    for a, b in BATTERY:
        curve = new_curve(a, b)
        for place in (INF, 2, 3, 7, 31):
            assert torsor_solvable(TorsorProblem(square_class(1), curve, place))


def test_disc_class_always_solvable():
    # The image of (0, 0) is the discriminant class.
    for a, b in BATTERY:
        curve = new_curve(a, b)
        alpha = square_class(curve.disc_core)
        for place in (INF, 2, 3, 7, 31):
            assert torsor_solvable(TorsorProblem(alpha, curve, place))


def test_real_place_examples():
    # For b > 0 the negative class is reachable over R unless a > 0 with
    # positive discriminant; for b < 0 it never is.
    assert torsor_solvable(TorsorProblem(square_class(-1), new_curve(0, 2), INF))
    assert not torsor_solvable(TorsorProblem(square_class(-1), new_curve(0, -2), INF))
    assert torsor_solvable(TorsorProblem(square_class(-1), new_curve(-3, 1), INF))
    assert not torsor_solvable(TorsorProblem(square_class(-1), new_curve(3, 1), INF))


def test_oracle_subgroup_sizes():
    for a, b in BATTERY:
        curve = new_curve(a, b)
        for place in PLACES:
            group = kummer_image_oracle(curve, place)
            limit = {INF: 2, 2: 8}.get(place, 4)
            assert len(group.members) in {1, 2, 4, 8}
            assert len(group.members) <= limit
            assert 1 in group.members


def test_local_subgroup_closure_enforced():
    with pytest.raises(DomainError):
        LocalSubgroup(7, frozenset((3,)))
    with pytest.raises(DomainError):
        LocalSubgroup(7, frozenset((1, 3, 7)))


def test_good_odd_place_is_unramified():
    curve = new_curve(0, 2)
    for p in (3, 5, 7, 11, 13):
        group = kummer_image_oracle(curve, p)
        fast = kummer_image_fast(curve, p)
        assert fast is not None
        assert group.members == fast.members
        assert len(group.members) == 2  # the unit classes


def test_infinity_table():
    full = {1, -1}
    trivial = {1}
    expected = {
        (0, -2): trivial,
        (0, -5): trivial,
        (0, 2): full,
        (0, 5): full,
        (-1, 3): full,
        (1, 3): full,
        (-3, 1): full,
        (3, 1): trivial,
    }
    for (a, b), want in expected.items():
        assert set(kummer_image_oracle(new_curve(a, b), INF).members) == want
        assert set(kummer_image_fast(new_curve(a, b), INF).members) == want


def test_fast_path_not_applicable_at_two_and_bad_primes():
    curve = new_curve(0, 5)
    assert kummer_image_fast(curve, 2) is None
    assert kummer_image_fast(curve, 5) is None


def test_fast_vs_oracle_on_battery_and_twists():
    for a, b in BATTERY:
        curve = new_curve(a, b)
        for place in PLACES:
            fast = kummer_image_fast(curve, place)
            if fast is not None:
                assert fast.members == kummer_image_oracle(curve, place).members
        for q in enumerate_Q(curve, 60):
            twist = quadratic_twist(curve, -q)
            context = TwistContext(curve, q)
            for place in (INF, q):
                fast = kummer_image_fast(twist, place, context)
                assert fast is not None
                assert fast.members == kummer_image_oracle(twist, place).members, (
                    (a, b),
                    q,
                    place,
                )


def test_twisted_local_group_by_base_case():
    # b < 0: trivial at q; b > 0 with negative disc: everything at q.
    curve = new_curve(0, -2)
    q = enumerate_Q(curve, 60)[0]
    ctx = TwistContext(curve, q)
    assert kummer_image_fast(quadratic_twist(curve, -q), q, ctx).members == {1}
    curve = new_curve(0, 2)
    q = enumerate_Q(curve, 60)[0]
    ctx = TwistContext(curve, q)
    assert len(kummer_image_fast(quadratic_twist(curve, -q), q, ctx).members) == 4


def test_context_mismatch_rejected():
    curve = new_curve(0, 2)
    with pytest.raises(DomainError):
        kummer_image_fast(new_curve(0, 5), 7, TwistContext(curve, 7))


def test_td_data_preconditions():
    with pytest.raises(DomainError):
        td_data(new_curve(0, 2), 7, 7)  # disc < 0
    with pytest.raises(DomainError):
        td_data(new_curve(-3, 1), 31, 7)  # 7 does not divide 31


def test_twist_invariance_at_split_places():
    # Away from d and infinity, twisting does not move the local image.
    for a, b in BATTERY:
        curve = new_curve(a, b)
        qs = enumerate_Q(curve, 60)
        if not qs:
            continue
        d = qs[0]
        twist = quadratic_twist(curve, -d)
        check_places = [2] + [p for p in curve.bad_support if p != 2] + [3, 13]
        for v in check_places:
            if d % v == 0:
                continue
            assert (
                kummer_image_oracle(curve, v).members
                == kummer_image_oracle(twist, v).members
            ), ((a, b), d, v)


def test_oracle_handles_full_two_torsion_curves():
    # The isogenous curve of (-3, 1) has full rational 2-torsion; its local
    # images are still well-defined subgroups.
    eprime = isogenous_curve(new_curve(-3, 1))
    for place in (INF, 2, 5):
        group = kummer_image_oracle(eprime, place)
        assert 1 in group.members
