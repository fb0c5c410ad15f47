import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superforms import sampling as S
from superforms.berezin import (
    canonical_Y,
    even_embedding,
    even_pullback_integral,
    fiber_berezin,
    poincare_pair,
    underlying_domain,
)
from superforms.forms import Form
from superforms.scalar import DomainSpec, SuperFunction, UnsupportedIntegrand, hat
from superforms.spencer import IntegralForm
from superforms.suites import closed_compact_top, embedding_family

DOM = DomainSpec(3, 2, 0, 2)
seeds = st.integers(0, 10 ** 6)


def test_orientation_is_positive():
    for m, n in [(0, 1), (0, 3), (1, 1), (2, 2)]:
        d = DomainSpec(m, n)
        f = SuperFunction.monomial(d, odd=d.fiber_odd)
        for x in d.fiber_even:
            f = f * hat(d, x)
        assert fiber_berezin(IntegralForm.ber(d, f)) == SuperFunction.const(d.base(), 1)


def test_berezin_ignores_lower_theta_terms():
    d = DomainSpec(1, 2)
    f = hat(d, "x1") * (SuperFunction.coord(d, "th1") + SuperFunction.const(d, 5))
    assert fiber_berezin(IntegralForm.ber(d, f)).is_zero()


def test_only_order_zero_part_integrates():
    d = DomainSpec(1, 1)
    s = IntegralForm.monomial(d, dx=["x1"], coeff=hat(d, "x1"))
    assert fiber_berezin(s).is_zero()


def test_non_compact_integrand_rejected():
    d = DomainSpec(1, 1)
    s = IntegralForm.ber(d, SuperFunction.coord(d, "th1"))
    with pytest.raises(UnsupportedIntegrand):
        fiber_berezin(s)


def test_base_odd_parameters_survive():
    f = SuperFunction.monomial(DOM, odd=["lam1", "th1", "th2"])
    for x in DOM.fiber_even:
        f = f * hat(DOM, x)
    out = fiber_berezin(IntegralForm.ber(DOM, f))
    assert out == SuperFunction.coord(DOM.base(), "lam1")


def test_canonical_Y_is_closed_and_normalized():
    Y = canonical_Y(DOM)
    assert Y.delta().is_zero()
    assert Y.degree() == 0
    B = S.bump_product(DOM, random.Random(0))
    top = Form.monomial(DOM, dx=DOM.fiber_even, coeff=B)
    assert poincare_pair(top, Y) == SuperFunction.const(DOM.base(), 1)


@settings(max_examples=10)
@given(seeds)
def test_stokes(seed):
    rng = random.Random(seed)
    w = S.form(DOM, rng, degree=rng.randint(0, 2))
    s = S.integral_form(DOM, rng, degree=DOM.m - w.degree() - 1, compact=True)
    assert fiber_berezin(s.delta()).is_zero()
    assert poincare_pair(w.d(), s) + poincare_pair(w, s.delta()).scale((-1) ** w.degree()) == 0


def test_embedding_family_is_distinct():
    embs = embedding_family(DOM)
    th = Form.function(SuperFunction.coord(DOM, "th2"))
    images = {str(e.pull(th)) for e in embs}
    assert len(images) == 3


@settings(max_examples=4)
@given(seeds)
def test_canonical_pairing_matches_even_integrals(seed):
    rng = random.Random(seed)
    w = closed_compact_top(DOM, rng, nterms=1)
    assert w.d().is_zero()
    p = poincare_pair(w, canonical_Y(DOM))
    for iota in embedding_family(DOM):
        v = even_pullback_integral(iota, w)
        assert v == p.transfer(v.domain)


def test_odd_shift_detects_non_closed_forms():
    # theta1 theta2 bump dx^3 is not closed; shifting theta by lambda changes its even integral
    B = S.bump_product(DOM, random.Random(1))
    w = Form.monomial(DOM, dx=DOM.fiber_even, coeff=SuperFunction.monomial(DOM, odd=["th1", "th2"]) * B)
    assert not w.d().is_zero()
    T = underlying_domain(DOM)
    l1, l2 = SuperFunction.coord(T, "lam1"), SuperFunction.coord(T, "lam2")
    shifted = even_pullback_integral(even_embedding(DOM, {"th1": l1, "th2": l2}, target=T), w)
    plain = even_pullback_integral(even_embedding(DOM, target=T), w)
    assert plain.is_zero() and shifted == SuperFunction.monomial(T.base(), odd=["lam1", "lam2"])
