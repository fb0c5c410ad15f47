import random

import pytest
from hypothesis import given, settings, strategies as st

from superforms import sampling as S
from superforms.forms import Form
from superforms.homotopy import (
    K_even,
    K_odd,
    e_star_even,
    e_star_odd,
    even_identity_sides,
    find_primitive,
    odd_euler_primitive,
    odd_identity_sides,
    pi_star_even,
    pi_star_odd,
    spencer_even_identity_sides,
    unit_bump,
)
from superforms.scalar import DomainSpec, SuperFunction
from superforms.spencer import IntegralForm

EVEN = DomainSpec(2, 1, names=["x1", "t", "th1"])
ODD = DomainSpec(1, 2, names=["x1", "th1", "psi"])
seeds = st.integers(0, 10 ** 6)


def _homogeneous_form(rng, dom):
    while True:
        w = S.form(dom, rng, compact=True)
        if w.degree() is not None:
            return w


@given(seeds)
def test_even_identity(seed):
    w = _homogeneous_form(random.Random(seed), EVEN)
    left, right = even_identity_sides(w, "t")
    assert left == right


@given(seeds)
def test_odd_identity(seed):
    s = S.integral_form(ODD, random.Random(seed), compact=True)
    left, right = odd_identity_sides(s, "psi")
    assert left == right


@settings(max_examples=10)
@given(seeds)
def test_spencer_even_identity(seed):
    s = S.integral_form(EVEN, random.Random(seed), compact=True)
    left, right = spencer_even_identity_sides(s, "t")
    assert left == right


@given(seeds)
def test_pushforwards_are_chain_maps(seed):
    rng = random.Random(seed)
    w = _homogeneous_form(rng, EVEN)
    small = EVEN.drop("t")
    assert pi_star_even(w.d(), "t") == pi_star_even(w, "t").d()
    v = S.form(small, rng, compact=True)
    assert e_star_even(v.d(), EVEN, "t") == e_star_even(v, EVEN, "t").d()
    s = S.integral_form(ODD, rng, compact=True)
    assert pi_star_odd(s.delta(), "psi") == pi_star_odd(s, "psi").delta()
    tau = S.integral_form(ODD.drop("psi"), rng, compact=True)
    assert e_star_odd(tau.delta(), ODD, "psi") == e_star_odd(tau, ODD, "psi").delta()


def test_unit_bump_mass():
    b = unit_bump(EVEN, "t")
    assert b.total_integral_even("t") == SuperFunction.const(EVEN.drop("t"), 1)


def test_homotopies_need_the_direction():
    with pytest.raises(Exception):
        K_even(Form.const(EVEN, 1), "th1")
    with pytest.raises(Exception):
        K_odd(IntegralForm.ber(ODD), "x1")


@given(seeds)
def test_odd_euler_split(seed):
    rng = random.Random(seed)
    dom = DomainSpec(2, 2, 0, 1)
    w = S.form(dom, rng, compact=True).d()
    body, eta = odd_euler_primitive(w)
    assert body + eta.d() == w
    for (mask, exps), f in body.terms.items():
        assert not any(exps)
        assert all(not (m & 0b11) for m in f.odd_components())


def _top_bump(dom, rng):
    return Form.monomial(dom, dx=dom.fiber_even, coeff=S.bump_product(dom, rng))


@pytest.mark.parametrize("m,n,q", [(1, 1, 0), (2, 1, 0), (2, 2, 1)])
def test_bump_classes_have_no_primitive(m, n, q):
    dom = DomainSpec(m, n, 0, q)
    rng = random.Random(m * 10 + n)
    B = S.bump_product(dom, rng)
    assert find_primitive(Form.monomial(dom, dx=dom.fiber_even, coeff=B)) is None
    top = IntegralForm.ber(dom, SuperFunction.monomial(dom, odd=dom.fiber_odd) * B)
    assert find_primitive(top) is None


@settings(max_examples=8)
@given(seeds)
def test_primitives_of_exact_and_massless_inputs(seed):
    rng = random.Random(seed)
    dom = DomainSpec(2, 1, 0, 1)
    B1, B2 = S.bump_product(dom, rng), S.bump_product(dom, rng)
    massless = Form.monomial(dom, dx=dom.fiber_even, coeff=B1 - B2)
    p = find_primitive(massless)
    assert p is not None and p.d() == massless
    for deg in range(0, 3):
        w = S.form(dom, rng, degree=deg, compact=True).d()
        p = find_primitive(w)
        assert p is not None and p.d() == w
    s = S.integral_form(dom, rng, degree=1, compact=True).delta()
    p = find_primitive(s)
    assert p is not None and p.delta() == s


def test_find_primitive_rejects_non_closed():
    dom = DomainSpec(1, 1)
    w = Form.function(SuperFunction.coord(dom, "x1") * unit_bump(dom, "x1"))
    with pytest.raises(ValueError):
        find_primitive(w)
