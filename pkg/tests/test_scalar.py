import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superforms import sampling as S
from superforms.scalar import (
    DomainError,
    DomainSpec,
    NotDifferentiable,
    PiecewisePoly,
    SuperFunction,
    UnsupportedIntegrand,
    bump,
    derive,
    hat,
    mul,
    total_integral_even,
)

DOM = DomainSpec(2, 2, 0, 1)
seeds = st.integers(0, 10 ** 6)
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def test_domain_labels():
    d = DomainSpec(2, 1, 1, 2)
    assert d.names == ("x1", "x2", "th1", "s1", "lam1", "lam2")
    assert d.even_names == ("x1", "x2", "s1")
    assert d.odd_names == ("th1", "lam1", "lam2")
    assert d.fiber_even == ("x1", "x2") and d.fiber_odd == ("th1",)
    assert d.base() == DomainSpec(0, 0, 1, 2, ["s1", "lam1", "lam2"])
    with pytest.raises(DomainError):
        DomainSpec(1, 1, names=["a", "a"])


def test_piecewise_hat():
    h = PiecewisePoly.hat()
    assert h.integral() == 1
    assert h(0) == 1 and h(Fraction(1, 2)) == Fraction(1, 2) and h(2) == 0
    assert h.compactly_supported
    assert h.continuity_order() == 0
    with pytest.raises(NotDifferentiable):
        h.derive().derive()


@given(st.integers(1, 4), fracs, st.fractions(min_value=1, max_value=3, max_denominator=3))
def test_bspline_unit_mass(deg, c, s):
    b = PiecewisePoly.bspline(deg, center=c, scale=s)
    assert b.integral() == 1
    assert b.continuity_order() == deg - 1
    assert b.derive().integral() == 0


@given(st.lists(st.tuples(st.integers(0, 3), fracs, fracs), min_size=1, max_size=3), fracs)
def test_antiderivative_inverts_derive(parts, t):
    p = PiecewisePoly()
    for deg, c, w in parts:
        p = p + PiecewisePoly.bspline(deg, center=c) * PiecewisePoly.polynomial([w])
    assert p.antiderivative().derive() == p
    assert p.shift(t)(t) == p(0)
    assert PiecewisePoly().antiderivative() == PiecewisePoly()


def test_odd_product_signs():
    th1, th2 = SuperFunction.coord(DOM, "th1"), SuperFunction.coord(DOM, "th2")
    assert th1 * th2 == -(th2 * th1)
    assert (th1 * th1).is_zero()
    assert SuperFunction.monomial(DOM, odd=["th2", "th1"]) == -SuperFunction.monomial(DOM, odd=["th1", "th2"])


def test_left_odd_derivative():
    th1, th2 = SuperFunction.coord(DOM, "th1"), SuperFunction.coord(DOM, "th2")
    f = th1 * th2
    assert f.derive("th1") == th2
    assert f.derive("th2") == -th1


def test_base_coordinates_are_inert():
    lam = SuperFunction.coord(DOM, "lam1")
    with pytest.raises(DomainError):
        lam.derive("lam1")


@given(seeds)
def test_mul_associative(seed):
    rng = random.Random(seed)
    f, g, h = (S.function(DOM, rng, compact=rng.random() < 0.3) for _ in range(3))
    assert mul(mul(f, g), h) == mul(f, mul(g, h))


@given(seeds)
def test_graded_commutative(seed):
    rng = random.Random(seed)
    f = S.function(DOM, rng, parity=rng.randint(0, 1))
    g = S.function(DOM, rng, parity=rng.randint(0, 1))
    sign = -1 if f.parity() * g.parity() else 1
    assert f * g == (g * f).scale(sign)


@given(seeds, st.sampled_from(["x1", "x2", "th1", "th2"]))
def test_leibniz(seed, coord):
    rng = random.Random(seed)
    f = S.function(DOM, rng, parity=rng.randint(0, 1), compact=rng.random() < 0.5)
    g = S.function(DOM, rng, parity=rng.randint(0, 1))
    a = DOM.locate(coord)[0]
    lhs = derive(f * g, coord)
    rhs = derive(f, coord) * g + (f * derive(g, coord)).scale((-1) ** (a * f.parity()))
    assert lhs == rhs


@given(seeds, st.sampled_from(["x1", "x2", "th1", "th2"]), st.sampled_from(["x1", "x2", "th1", "th2"]))
def test_mixed_partials(seed, a, b):
    rng = random.Random(seed)
    f = S.function(DOM, rng, nterms=4, compact=True)
    pa, pb = DOM.locate(a)[0], DOM.locate(b)[0]
    assert derive(derive(f, a), b) == derive(derive(f, b), a).scale((-1) ** (pa * pb))


@given(seeds, st.sampled_from(["x1", "x2"]))
def test_integral_of_derivative_vanishes(seed, x):
    rng = random.Random(seed)
    f = S.function(DOM, rng, compact=True)
    assert total_integral_even(derive(f, x), x).is_zero()


def test_integral_needs_compact_support():
    f = SuperFunction.coord(DOM, "x1")
    with pytest.raises(UnsupportedIntegrand):
        total_integral_even(f, "x1")


def test_hat_and_bump_have_unit_mass():
    d = DomainSpec(1, 0)
    one = SuperFunction.const(d.drop("x1"), 1)
    assert total_integral_even(hat(d, "x1"), "x1") == one
    assert total_integral_even(bump(d, "x1", degree=3), "x1") == one


def test_discontinuous_derive_rejected():
    d = DomainSpec(1, 0)
    step = PiecewisePoly([0], [(0,), (1,)])
    f = SuperFunction.from_piecewise(d, "x1", step)
    assert not f.continuous_in("x1")
    with pytest.raises(NotDifferentiable):
        f.derive("x1")
    g = SuperFunction.from_piecewise(d, "x1", PiecewisePoly.hat())
    assert g.derive("x1") is not None
    with pytest.raises(NotDifferentiable):
        g.derive("x1").derive("x1")


def test_canonical_text_is_deterministic():
    rng1, rng2 = random.Random(5), random.Random(5)
    f1 = S.function(DOM, rng1, compact=True)
    f2 = S.function(DOM, rng2, compact=True)
    assert str(f1) == str(f2)
    assert str(SuperFunction.monomial(DOM, odd=["th1"], powers={"x2": 2}, coeff=Fraction(2, 3))) == "(2/3)·x2^2·th1"
    assert str(SuperFunction.zero(DOM)) == "0"


def test_evaluate_and_set_odd_zero():
    f = SuperFunction.monomial(DOM, powers={"x1": 2}) + SuperFunction.monomial(DOM, odd=["th1"], coeff=3)
    assert f.set_odd_zero("th1") == SuperFunction.monomial(DOM, powers={"x1": 2})
    assert f.evaluate_even("x1", 2).set_odd_zero("th1") == SuperFunction.const(DOM, 4).transfer(
        f.evaluate_even("x1", 2).domain)
