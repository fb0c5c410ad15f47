import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superforms import sampling as S
from superforms.forms import Form, Substitution, d, mono_mul, pullback, wedge
from superforms.scalar import DomainError, DomainSpec, SuperFunction

DOM = DomainSpec(3, 2, 0, 2)
SMALL = DomainSpec(2, 2, 0, 1)
seeds = st.integers(0, 10 ** 6)


def dx(*names, dom=DOM):
    return Form.monomial(dom, dx=names)


def dth(*names, dom=DOM):
    return Form.monomial(dom, dth=names)


def test_normal_order_hand_cases():
    # dx2 dx1 = -dx1 dx2; dtheta's commute with each other; dx past dtheta costs -1
    assert dx("x2").wedge(dx("x1")) == -dx("x1", "x2")
    assert dth("th2").wedge(dth("th1")) == dth("th1", "th2")
    assert dth("th1").wedge(dx("x1")) == -dx("x1").wedge(dth("th1"))
    # three factors: dth1 dx2 dx1 = (-1)(-1)... computed letter by letter
    lhs = dth("th1").wedge(dx("x2")).wedge(dx("x1"))
    assert lhs == dx("x1", "x2").wedge(dth("th1")).scale(-1)
    lhs = dx("x3").wedge(dth("th1")).wedge(dx("x1"))
    assert lhs == dx("x1", "x3").wedge(dth("th1"))
    assert dx("x1").wedge(dx("x1")).is_zero()
    assert not dth("th1").wedge(dth("th1")).is_zero()


def test_mono_mul_table():
    assert mono_mul((0b01, (0, 0)), (0b10, (0, 0))) == (1, (0b11, (0, 0)))
    assert mono_mul((0b10, (0, 0)), (0b01, (0, 0))) == (-1, (0b11, (0, 0)))
    assert mono_mul((0, (1, 0)), (0b1, (0, 0))) == (-1, (0b1, (1, 0)))
    assert mono_mul((0b1, (0, 0)), (0b1, (0, 0))) == (0, None)


def test_coefficient_passes_forms_with_parity_sign():
    th = SuperFunction.coord(DOM, "th1")
    # dtheta has parity 1, so moving theta past it costs a sign
    assert dth("th2").wedge(Form.function(th)) == Form.monomial(DOM, dth=["th2"], coeff=th).scale(-1)
    assert dx("x1").wedge(Form.function(th)) == Form.monomial(DOM, dx=["x1"], coeff=th)


def test_exterior_derivative_of_coordinates():
    for name in DOM.fiber_even + DOM.fiber_odd:
        assert Form.function(SuperFunction.coord(DOM, name)).d() == Form.differential(DOM, name)
    lam = SuperFunction.coord(DOM, "lam1")
    assert Form.function(lam).d().is_zero()


def test_rendering():
    f = Form.monomial(DOM, dx=["x1"], dth={"th2": 2}, coeff=Fraction(2, 3))
    assert str(f) == "[(2/3)] · dx1^dth2^2"
    assert str(Form.zero(DOM)) == "0"


@given(seeds)
def test_d_squared(seed):
    w = S.form(DOM, random.Random(seed), compact=seed % 3 == 0)
    assert d(d(w)).is_zero()


@given(seeds)
def test_d_leibniz(seed):
    rng = random.Random(seed)
    a, b = S.form(DOM, rng), S.form(DOM, rng)
    assert d(wedge(a, b)) == d(a).wedge(b) + a.wedge(d(b)).scale((-1) ** a.degree())


@given(seeds)
def test_wedge_graded_commutative(seed):
    rng = random.Random(seed)
    a, b = S.form(DOM, rng), S.form(DOM, rng)
    (p, m), (q, n) = a.bidegree(), b.bidegree()
    assert a.wedge(b) == b.wedge(a).scale((-1) ** (p * q + m * n))


@given(seeds)
def test_wedge_associative_and_bidegree(seed):
    rng = random.Random(seed)
    a, b, c = S.form(DOM, rng), S.form(DOM, rng), S.form(DOM, rng)
    abc = a.wedge(b).wedge(c)
    assert abc == a.wedge(b.wedge(c))
    if abc:
        (p, m), (q, n), (r, k) = a.bidegree(), b.bidegree(), c.bidegree()
        assert abc.bidegree() == (p + q + r, (m + n + k) % 2)


@given(seeds)
def test_contraction_is_derivation(seed):
    rng = random.Random(seed)
    a, b = S.form(SMALL, rng), S.form(SMALL, rng)
    v = {"x1": S.function(SMALL, rng, parity=0), "th2": S.function(SMALL, rng, parity=1)}
    lhs = wedge(a, b).contract(v)
    rhs = a.contract(v).wedge(b) + a.wedge(b.contract(v)).scale((-1) ** a.degree())
    assert lhs == rhs


def _random_substitution(rng):
    src, tgt = SMALL, DomainSpec(2, 1, 0, 1, ["y1", "y2", "eta", "lam1"])
    y1, y2, eta, lam = (SuperFunction.coord(tgt, n) for n in tgt.names)
    c = S.rational(rng)
    images = {"x1": y1 + (eta * lam).scale(c), "x2": y2, "th1": eta.scale(S.rational(rng)) + lam * y1,
              "th2": lam.scale(S.rational(rng)), "lam1": lam}
    return Substitution(src, tgt, images)


@given(seeds)
def test_pullback_respects_wedge_and_d(seed):
    rng = random.Random(seed)
    phi = _random_substitution(rng)
    a, b = S.form(SMALL, rng), S.form(SMALL, rng)
    assert pullback(phi, a.wedge(b)) == pullback(phi, a).wedge(pullback(phi, b))
    assert pullback(phi, a.d()) == pullback(phi, a).d()


def test_substitution_rejects_bad_even_images():
    tgt = DomainSpec(2, 0)
    y1, y2 = SuperFunction.coord(tgt, "y1") if False else SuperFunction.coord(tgt, "x1"), SuperFunction.coord(tgt, "x2")
    with pytest.raises(DomainError):
        Substitution(DomainSpec(2, 0), tgt, {"x1": y1 * y2, "x2": y2})
