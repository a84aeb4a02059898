from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holarb import generate_random_system
from holarb.category import enumerate_based_loops
from holarb.errors import IncompleteDeclarationError
from holarb.holonomy import classify_loop, holonomy
from holarb.measure import RandomVariable, make_space
from holarb.strategy import (
    AdmissibilityDeclaration,
    ab_position,
    ab_wealth,
    check_admissibility,
    leg_factors,
    self_financing_wealth_trace,
    wab_position,
    wab_wealth,
    with_admissibility,
)

HALF = make_space("X0", ["0", "1"], ["1/2", "1/2"])
QUARTER = make_space("Y0", ["0", "1"], ["1/4", "3/4"])
ALL_TRUE = {"i1": True, "i2": True, "i3": True}


def rv(space, values):
    return RandomVariable.of(space, values)


def test_ab_position():
    assert ab_position(rv(HALF, [0, 4])).values.values == (0, 1)
    assert ab_position(rv(HALF, [1, 1])).values.values == (0, 0)
    assert ab_position(rv(QUARTER, [1, 2])).values.values == (0, 1)


def test_wab_position():
    assert wab_position(rv(HALF, [Q(1, 2), 2]), Q(1, 4)).values.values == (-1, 1)
    assert wab_position(rv(HALF, [1, 1]), 3).values.values == (0, 0)
    assert wab_position(rv(HALF, [0, 4]), 0).values.values == (-1, 1)


def test_ab_wealth_examples():
    r = ab_wealth(rv(HALF, [0, 4]), HALF)
    assert r.wealth.values == (1, 4)
    assert (r.expected_wealth, r.p_strict_gain, r.min_wealth) == (Q(5, 2), Q(1, 2), 1)
    r = ab_wealth(rv(HALF, [1, 1]), HALF)
    assert r.wealth.values == (1, 1) and r.p_strict_gain == 0
    r = ab_wealth(rv(QUARTER, [1, 2]), QUARTER)
    assert r.wealth.values == (1, 2)
    assert (r.expected_wealth, r.p_strict_gain) == (Q(7, 4), Q(3, 4))


def test_wab_wealth_examples():
    r = wab_wealth(rv(HALF, [Q(1, 2), 2]), HALF, 0)
    assert r.wealth.values == (2, 2) and r.p_strict_gain == 1 and r.idealized
    r = wab_wealth(rv(HALF, [1, 1]), HALF, 0)
    assert r.wealth.values == (1, 1)
    r = wab_wealth(rv(HALF, [0, 4]), HALF, 0)
    assert r.flagged == (0,) and r.wealth.values[1] == 4
    # the guarantee holds off the flagged point
    assert r.min_wealth == 4 and r.p_strict_gain == Q(1, 2)


def test_wab_with_large_epsilon_is_flat():
    r = wab_wealth(rv(HALF, [0, 4]), HALF, 10)
    assert r.wealth.values == (1, 1)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.fractions(min_value=0, max_value=10, max_denominator=9), min_size=2, max_size=2))
def test_ab_wealth_never_loses(hol_values):
    hol = rv(HALF, hol_values)
    r = ab_wealth(hol, HALF)
    assert all(v >= 1 for v in r.wealth.values)
    assert [v > 1 for v in r.wealth.values] == [h > 1 for h in hol_values]


@settings(max_examples=300, deadline=None)
@given(st.lists(st.fractions(min_value=0, max_value=10, max_denominator=9), min_size=2, max_size=2),
       st.fractions(min_value=0, max_value=2, max_denominator=5))
def test_wab_wealth_never_loses_off_flagged(hol_values, eps):
    r = wab_wealth(rv(HALF, hol_values), HALF, eps)
    for k, v in enumerate(r.wealth.values):
        if k not in r.flagged:
            assert v >= 1
            assert (v > 1) == (abs(hol_values[k] - 1) > eps)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(min_value=1, max_value=10, max_denominator=9), min_size=2, max_size=2))
def test_ab_position_is_positive_part_of_wab(hol_values):
    hol = rv(HALF, hol_values)
    assert ab_position(hol).values == wab_position(hol, 0).values


def test_admissibility_on_stronger(stronger):
    hr = classify_loop(stronger, ["i1", "i2", "i3"])
    decl = AdmissibilityDeclaration(ALL_TRUE, self_financing=True, reverse_executable=True)
    verdict = check_admissibility(hr.loop, decl, stronger)
    assert verdict.admissible
    rep = with_admissibility(ab_wealth(hr.hol, stronger.space("t0")), verdict, hr.p_gt_1)
    assert rep.admissible and rep.admissible_ab_arbitrage


def test_non_executable_arrow(stronger):
    hr = classify_loop(stronger, ["i1", "i2", "i3"])
    decl = AdmissibilityDeclaration({**ALL_TRUE, "i2": False}, self_financing=True)
    verdict = check_admissibility(hr.loop, decl)
    assert not verdict.admissible and verdict.non_executable == ("i2",)


def test_reverse_rule(simple):
    hr = classify_loop(simple, ["i1", "i2", "i3"])
    decl = AdmissibilityDeclaration(ALL_TRUE, self_financing=True, reverse_executable=False)
    verdict = check_admissibility(hr.loop, decl)
    base = simple.space("t0")
    ab = with_admissibility(ab_wealth(hr.hol, base), verdict, hr.p_gt_1)
    wab = with_admissibility(wab_wealth(hr.hol, base, 0), verdict, hr.p_gt_1)
    assert ab.admissible and ab.admissible_ab_arbitrage
    assert not wab.admissible


def test_incomplete_declaration(simple):
    hr = classify_loop(simple, ["i1", "i2", "i3"])
    with pytest.raises(IncompleteDeclarationError):
        check_admissibility(hr.loop, AdmissibilityDeclaration({"i1": True}, True))


def test_self_financing_trace_fixtures(simple, stronger):
    trace = self_financing_wealth_trace(simple, ["i1", "i2", "i3"])
    assert len(trace) == 4
    assert trace[0].values == (1, 1)
    assert trace[-1].values == (0, 4)
    assert self_financing_wealth_trace(stronger, ["i1", "i2", "i3"])[-1].values == (1, 2)


def test_trace_telescopes(stronger):
    trace = self_financing_wealth_trace(stronger, ["i1", "i2", "i3"])
    acc = trace[0]
    for factor, v in zip(leg_factors(trace), trace[1:]):
        acc = acc * factor
        assert acc == v


@pytest.mark.parametrize("seed", range(20))
def test_measure_preserving_trace_is_flat(seed):
    filt = generate_random_system(seed, objects=3, max_points=4, arrows=4, measure_preserving=True).filtration()
    for lp in enumerate_based_loops(filt.category, "t0", 4):
        for v in self_financing_wealth_trace(filt, lp):
            assert set(v.values) == {1}


@pytest.mark.parametrize("seed", range(40))
def test_trace_ends_at_holonomy(seed):
    filt = generate_random_system(seed, objects=3, max_points=4, arrows=5, null_points=seed % 2 == 0).filtration()
    for base in filt.category.objects:
        for lp in enumerate_based_loops(filt.category, base, 4):
            trace = self_financing_wealth_trace(filt, lp)
            assert trace[-1] == holonomy(filt, lp)
