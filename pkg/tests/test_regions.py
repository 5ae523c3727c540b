"""Region equivalence classes: round-trips, censuses, selection coherence."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsrsat.regions import (
    BdBoundedClass,
    PartitionJ,
    RegionRangeError,
    apply_rho_sigma,
    bounded_subclass,
    class_of_bd,
    class_of_slr,
    enumerate_bd_bounded,
    enumerate_bd_unbounded,
    enumerate_slr_classes,
    ordered_set_partitions,
    representative,
    representative_bd,
    representative_slr,
    rho_sigma,
    select_class,
    select_slr,
)

P01 = PartitionJ.make([0, 1])
P0 = PartitionJ.make([0])


# --- ordered set partitions -------------------------------------------------


def test_ordered_set_partitions_counts_are_fubini():
    # ordered Bell numbers
    for n, want in [(0, 1), (1, 1), (2, 3), (3, 13), (4, 75)]:
        assert len(list(ordered_set_partitions(range(n)))) == want


def test_ordered_set_partitions_cover_exactly():
    items = ("a", "b", "c")
    seen = set()
    for part in ordered_set_partitions(items):
        flat = [x for block in part for x in block]
        assert sorted(flat) == sorted(items)
        assert part not in seen
        seen.add(part)


# --- interval partitions ----------------------------------------------------


def test_partition_make_dedups_and_sorts():
    assert PartitionJ.make([1, 0, 1]).points == (Fraction(0), Fraction(1))
    assert P01.interval_count == 5


def test_interval_of_examples():
    cases = [("-1/2", 0), (0, 1), ("1/2", 2), (1, 3), ("3/2", 4)]
    for v, idx in cases:
        assert P01.interval_of(Fraction(v) if isinstance(v, str) else Fraction(v)) == idx
    assert P01.is_point_interval(1) and P01.is_point_interval(3)
    assert not P01.is_point_interval(2)
    assert P01.point_value(1) == 0
    assert P01.point_interval_index(Fraction(1)) == 3


# --- SLR classes ------------------------------------------------------------


def all_slr(arity, partition):
    return list(enumerate_slr_classes(arity, partition))


def test_slr_census_frozen():
    assert len(all_slr(1, PartitionJ.make([]))) == 1
    assert len(all_slr(1, P0)) == 3
    assert len(all_slr(2, P01)) == 31


@pytest.mark.parametrize("arity", [0, 1, 2, 3])
def test_slr_round_trip_exhaustive(arity):
    for cls in all_slr(arity, P01):
        rep = representative_slr(cls, P01)
        assert class_of_slr(rep, P01) == cls


def test_slr_grid_census_matches_enumeration():
    grid = [Fraction(n, 8) for n in range(-8, 17)]
    hit = {class_of_slr(t, P01) for t in itertools.product(grid, repeat=2)}
    assert hit == set(all_slr(2, P01))


def test_slr_value_cmp_tracks_representative():
    for cls in all_slr(3, P0):
        rep = representative_slr(cls, P0)
        for i, j in itertools.product(range(3), repeat=2):
            assert cls.value_cmp(i, j) == (rep[i] > rep[j]) - (rep[i] < rep[j])


rational3 = st.fractions(min_value=-3, max_value=3, max_denominator=8)


@settings(max_examples=200)
@given(st.lists(rational3, min_size=1, max_size=4), st.data())
def test_slr_selection_commutes_with_classification(vals, data):
    idx = data.draw(
        st.lists(st.integers(0, len(vals) - 1), min_size=0, max_size=4)
    )
    cls = class_of_slr(vals, P01)
    picked = [vals[i] for i in idx]
    assert select_slr(cls, idx) == class_of_slr(picked, P01)


# --- BD classes -------------------------------------------------------------


def test_bd_bounded_census_frozen():
    assert len(list(enumerate_bd_bounded(1, 1))) == 7
    assert len(list(enumerate_bd_bounded(2, 1))) == 81
    assert len(list(enumerate_bd_bounded(3, 2))) == 5003


def test_bd_unbounded_census_frozen():
    assert len(list(enumerate_bd_unbounded(1, 1))) == 7
    assert len(list(enumerate_bd_unbounded(2, 1))) == 61
    assert len(list(enumerate_bd_unbounded(3, 2))) == 2915


def test_bd_box_census_frozen():
    # clock-region count for two clocks confined to [0, 3)
    boxed = enumerate_bd_bounded(2, 2, floor_lo=[0, 0], floor_hi=[2, 2])
    assert len(list(boxed)) == 54


@pytest.mark.parametrize("arity,kappa", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_bd_bounded_round_trip_exhaustive(arity, kappa):
    for cls in enumerate_bd_bounded(arity, kappa):
        rep = representative_bd(cls)
        assert all(-kappa - 1 < v < kappa + 1 for v in rep)
        assert class_of_bd(rep, kappa, bounded=True) == cls


@pytest.mark.parametrize("arity,kappa", [(1, 1), (2, 1), (3, 1)])
def test_bd_unbounded_round_trip_exhaustive(arity, kappa):
    for cls in enumerate_bd_unbounded(arity, kappa):
        rep = representative_bd(cls)
        assert class_of_bd(rep, kappa, bounded=False) == cls


def test_bd_grid_census_matches_enumeration():
    grid = [Fraction(n, 8) for n in range(-15, 16)]
    hit = {
        class_of_bd(t, 1, bounded=True) for t in itertools.product(grid, repeat=2)
    }
    assert hit == set(enumerate_bd_bounded(2, 1))


def test_bd_bounded_classifier_rejects_out_of_range():
    with pytest.raises(RegionRangeError):
        class_of_bd([Fraction(2)], 1, bounded=True)
    with pytest.raises(RegionRangeError):
        class_of_bd([Fraction(-5, 2)], 1, bounded=True)


def test_bd_value_cmp_tracks_representative():
    for cls in enumerate_bd_unbounded(3, 1):
        rep = representative_bd(cls)
        for i, j in itertools.product(range(3), repeat=2):
            assert cls.value_cmp(i, j) == (rep[i] > rep[j]) - (rep[i] < rep[j])


@settings(max_examples=200)
@given(st.lists(rational3, min_size=1, max_size=4), st.data())
def test_bd_selection_commutes_with_classification(vals, data):
    idx = data.draw(
        st.lists(st.integers(0, len(vals) - 1), min_size=0, max_size=4)
    )
    for bounded in (False,) if any(abs(v) >= 2 for v in vals) else (True, False):
        cls = class_of_bd(vals, 1, bounded=bounded)
        picked = [vals[i] for i in idx]
        assert select_class(cls, idx) == class_of_bd(picked, 1, bounded=bounded)


# --- rho/sigma encoding -----------------------------------------------------


def test_rho_sigma_round_trip_all_classes():
    for cls in enumerate_bd_bounded(2, 1):
        rho, sigma = rho_sigma(cls)
        m = len(cls.fr_blocks)
        ladder = [Fraction(j, m + 1) for j in range(m + 1)]
        vals = apply_rho_sigma(rho, sigma, ladder)
        assert class_of_bd(vals, 1, bounded=True) == cls


def test_rho_sigma_example():
    cls = class_of_bd([Fraction(1, 2), Fraction(-1), Fraction(1, 4)], 1, True)
    rho, sigma = rho_sigma(cls)
    assert sigma == (0, -1, 0)
    assert rho == (2, 0, 1)  # 1/4 ranks below 1/2; -1 has zero fr


def test_apply_rho_sigma_validates_ladder():
    with pytest.raises(RegionRangeError):
        apply_rho_sigma([0], [0], [Fraction(1, 2)])  # must start at 0
    with pytest.raises(RegionRangeError):
        apply_rho_sigma([0], [0], [Fraction(0), Fraction(0)])  # strict ascent
    with pytest.raises(RegionRangeError):
        apply_rho_sigma([1], [0], [Fraction(0), Fraction(1)])  # below 1


def test_apply_rho_sigma_decodes():
    vals = apply_rho_sigma(
        [1, 0, 2], [0, 1, -1], [Fraction(0), Fraction(1, 3), Fraction(1, 2)]
    )
    assert vals == (Fraction(1, 3), Fraction(1), Fraction(-1, 2))


# --- unbounded/bounded bridge -----------------------------------------------


def test_bounded_subclass_members_stay_in_class():
    for cls in enumerate_bd_unbounded(2, 1):
        sub = bounded_subclass(cls)
        assert isinstance(sub, BdBoundedClass)
        rep = representative_bd(sub)
        assert all(-2 < v < 2 for v in rep)
        assert class_of_bd(rep, 1, bounded=False) == cls


def test_bounded_subclass_is_identity_inside_window():
    vals = [Fraction(1, 2), Fraction(-1)]
    unb = class_of_bd(vals, 1, bounded=False)
    assert bounded_subclass(unb) == class_of_bd(vals, 1, bounded=True)


# --- generic wrappers -------------------------------------------------------


def test_generic_representative_dispatch():
    slr = class_of_slr([Fraction(1, 2)], P01)
    assert representative(slr, P01) == (Fraction(1, 2),)
    bd = class_of_bd([Fraction(1, 2)], 1, True)
    assert representative(bd) == representative_bd(bd)
