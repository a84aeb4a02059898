from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holarb.errors import (
    AbsoluteContinuityError,
    DuplicatePointError,
    NullPreservationError,
    SpaceMismatchError,
    WeightSumError,
)
from holarb.measure import (
    BackwardMap,
    RandomVariable,
    as_rational,
    cond_exp,
    cond_exp_operator,
    integrate,
    make_space,
    pushforward,
    radon_nikodym,
)
from oracles import identity_holds

mu0_simple = make_space("X0", ["0", "1"], [Q(1, 2), Q(1, 2)])
star = make_space("X1", ["*"], [1])
mu2_simple = make_space("X2", ["0", "1"], ["1/4", "3/4"])

mu0 = make_space("Y0", ["0", "1"], ["1/4", "3/4"])
mu1 = make_space("Y1", ["a", "b", "c"], ["1/4", "1/4", "1/2"])
mu2 = make_space("Y2", ["u", "v", "w"], ["1/4", "1/4", "1/2"])
F_i2 = BackwardMap.from_labels(mu2, mu1, {"u": "a", "v": "c", "w": "b"})
F_i3 = BackwardMap.from_labels(mu0, mu2, {"0": "u", "1": "w"})


def test_make_space_examples():
    s = make_space("t0", [0, 1], [Q(1, 2), Q(1, 2)])
    assert s.points == ("0", "1") and s.weights == (Q(1, 2), Q(1, 2))
    assert make_space("t1", ["*"], [1]).weights == (1,)
    with pytest.raises(WeightSumError, match="bad"):
        make_space("bad", [0, 1], [Q(1, 2), Q(1, 3)])


def test_make_space_rejects_duplicates_and_floats():
    with pytest.raises(DuplicatePointError):
        make_space("d", ["x", "x"], ["1/2", "1/2"])
    with pytest.raises(TypeError):
        make_space("f", ["x", "y"], [0.5, 0.5])
    with pytest.raises(ValueError):
        as_rational("0.5")


def test_zero_weights_allowed():
    s = make_space("z", ["x", "y"], [0, 1])
    assert s.support == (1,)


def test_pushforward_examples():
    assert pushforward(F_i2, mu2) == (Q(1, 4), Q(1, 2), Q(1, 4))
    assert pushforward(F_i3, mu0) == (Q(1, 4), 0, Q(3, 4))
    assert pushforward(BackwardMap.identity(mu1), mu1) == mu1.weights
    with pytest.raises(SpaceMismatchError):
        pushforward(F_i2, mu1)


def test_radon_nikodym_examples():
    assert radon_nikodym([Q(1, 4), 0, Q(3, 4)], mu2).values == (1, 0, Q(3, 2))
    assert radon_nikodym(mu1.weights, mu1) == RandomVariable.constant(mu1)
    assert radon_nikodym([0, 1], mu0_simple).values == (0, 2)


def test_radon_nikodym_needs_absolute_continuity():
    z = make_space("z", ["x", "y"], [0, 1])
    assert radon_nikodym([0, 1], z).values == (0, 1)
    with pytest.raises(AbsoluteContinuityError):
        radon_nikodym([Q(1, 2), Q(1, 2)], z)


def test_cond_exp_examples():
    h3 = RandomVariable.of(mu2, [1, 0, Q(3, 2)])
    assert cond_exp(F_i2, h3).values == (1, 3, 0)
    zero = RandomVariable.constant(mu2, 0)
    assert cond_exp(F_i2, zero) == RandomVariable.constant(mu1, 0)

    f_i2 = BackwardMap.from_labels(mu2_simple, star, {"0": "*", "1": "*"})
    d3 = RandomVariable.of(mu2_simple, [2, Q(2, 3)])
    got = cond_exp(f_i2, d3)
    assert got.values == (1,)
    assert identity_holds(mu2_simple.weights, star.weights, f_i2.mapping, d3.values, got.values)


def test_cond_exp_rejects_non_null_preserving():
    z = make_space("z", ["x", "y"], [0, 1])
    bad = BackwardMap.from_labels(mu0, z, {"0": "x", "1": "y"})
    assert not bad.is_null_preserving()
    with pytest.raises(NullPreservationError):
        cond_exp(bad, RandomVariable.constant(mu0))
    with pytest.raises(NullPreservationError):
        cond_exp_operator(bad)


def test_operator_examples():
    f_i2 = BackwardMap.from_labels(mu2_simple, star, {"0": "*", "1": "*"})
    assert cond_exp_operator(f_i2).matrix == ((Q(1, 4), Q(3, 4)),)
    f_i1 = BackwardMap.from_labels(star, mu0_simple, {"*": "1"})
    op = cond_exp_operator(f_i1)
    assert op.matrix == ((0,), (2,))
    assert op.apply(RandomVariable.constant(star)).values == (0, 2)
    ident = cond_exp_operator(BackwardMap.identity(mu1)).matrix
    assert ident == tuple(tuple(Q(int(r == c)) for c in range(3)) for r in range(3))


def test_operator_matches_cond_exp_on_basis():
    for phi in (F_i2, F_i3):
        op = cond_exp_operator(phi)
        for k in range(len(phi.domain)):
            e = RandomVariable.indicator(phi.domain, [k])
            assert op.apply(e) == cond_exp(phi, e)


def test_operator_null_rows_are_zero():
    z = make_space("z", ["x", "y", "n"], ["1/3", "2/3", 0])
    phi = BackwardMap.from_labels(mu0, z, {"0": "x", "1": "y"})
    assert cond_exp_operator(phi).matrix[2] == (0, 0)


def test_integrate_examples():
    assert integrate(mu1, RandomVariable.constant(mu1)) == 1
    assert integrate(mu0_simple, RandomVariable.of(mu0_simple, [0, 4])) == 2
    assert integrate(mu0, RandomVariable.of(mu0, [1, 2])) == Q(7, 4)
    with pytest.raises(SpaceMismatchError):
        integrate(mu1, RandomVariable.constant(mu0))


def test_ae_equality():
    z = make_space("z", ["x", "y"], [0, 1])
    a, b = RandomVariable.of(z, [5, 1]), RandomVariable.of(z, [0, 1])
    assert a.ae_equal(b, z)
    assert not a.ae_equal(b, z, strict=True)


# ---- properties on random maps ----

@st.composite
def maps_with_variable(draw):
    n = draw(st.integers(1, 5))
    m = draw(st.integers(1, 4))
    mapping = draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n))
    raw_mu = draw(st.lists(st.integers(0, 6), min_size=n, max_size=n).filter(any))
    mu = make_space("mu", range(n), [Q(w, sum(raw_mu)) for w in raw_mu])
    hit = {y for x, y in enumerate(mapping) if raw_mu[x] > 0}
    # null codomain points only where nothing with mass lands
    raw_nu = [draw(st.integers(1, 6)) if y in hit else draw(st.integers(0, 6)) for y in range(m)]
    nu = make_space("nu", range(m), [Q(w, sum(raw_nu)) for w in raw_nu])
    vals = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=n, max_size=n))
    return BackwardMap(mu, nu, tuple(mapping)), RandomVariable.of(mu, vals)


@settings(max_examples=200, deadline=None)
@given(maps_with_variable())
def test_expectation_is_preserved(case):
    phi, f = case
    assert integrate(phi.codomain, cond_exp(phi, f)) == integrate(phi.domain, f)


@settings(max_examples=200, deadline=None)
@given(maps_with_variable())
def test_defining_identity_over_all_subsets(case):
    phi, f = case
    g = cond_exp(phi, f)
    assert identity_holds(phi.domain.weights, phi.codomain.weights, phi.mapping, f.values, g.values)


@settings(max_examples=200, deadline=None)
@given(maps_with_variable())
def test_positivity(case):
    phi, f = case
    f = RandomVariable(f.space_id, tuple(abs(v) for v in f.values))
    assert all(v >= 0 for v in cond_exp(phi, f).values)


@settings(max_examples=200, deadline=None)
@given(maps_with_variable())
def test_pushforward_total_mass(case):
    phi, _ = case
    assert sum(pushforward(phi, phi.domain)) == 1


@settings(max_examples=100, deadline=None)
@given(maps_with_variable(), st.data())
def test_functoriality_of_operators(case, data):
    phi, f = case
    k = data.draw(st.integers(1, 4))
    nu = phi.codomain
    mapping = data.draw(st.lists(st.integers(0, k - 1), min_size=len(nu), max_size=len(nu)))
    hit = {z for y, z in enumerate(mapping) if nu.weights[y] > 0}
    raw = [data.draw(st.integers(1, 5)) if z in hit else data.draw(st.integers(0, 5)) for z in range(k)]
    rho = make_space("rho", range(k), [Q(w, sum(raw)) for w in raw])
    psi = BackwardMap(nu, rho, tuple(mapping))
    composite = cond_exp_operator(phi.then(psi))
    assert composite == cond_exp_operator(psi) @ cond_exp_operator(phi)
    assert composite.apply(f) == cond_exp(psi, cond_exp(phi, f))
