"""Berezin integration along the fiber and the pairings built on it.

Orientation: the integral of ber (x) theta_1 ... theta_n is +1. A base odd
monomial lambda^L standing to the right of the top theta monomial is moved to
the left first, so the integral of ber (x) c(lambda) theta_1...theta_n is c(lambda).
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .forms import Form, Substitution
from .scalar import DomainError, DomainSpec, SuperFunction, popcount
from .spencer import IntegralForm, act


def fiber_berezin(sigma: IntegralForm) -> SuperFunction:
    """Top odd coefficient of the order-zero part, integrated over the fiber even variables.

    Parts of nonzero polyvector order integrate to zero.
    """
    dom = sigma.domain
    base = dom.base()
    g = sigma.terms.get((0, (0,) * dom.n))
    if g is None:
        return SuperFunction.zero(base)
    top = (1 << dom.n) - 1
    terms = {}
    for (mask, cells, pw), c in g.terms.items():
        if mask & top != top:
            continue
        rest = mask >> dom.n
        if popcount(rest) * dom.n & 1:
            c = -c
        terms[(rest << dom.n, cells, pw)] = c
    h = SuperFunction(dom, terms, g.bps)
    for name in dom.fiber_even:
        h = h.total_integral_even(name)
    return h.transfer(base)


def poincare_pair(omega: Form, sigma: IntegralForm) -> SuperFunction:
    return fiber_berezin(act(omega, sigma))


def canonical_Y(dom: DomainSpec) -> IntegralForm:
    """ber (x) theta_1..theta_n d/dx_1..d/dx_m, signed so that pairing with a unit top bump gives +1."""
    m = dom.m
    sign = -1 if (m * (m - 1) // 2) & 1 else 1
    theta = SuperFunction.monomial(dom, odd=dom.fiber_odd, coeff=sign)
    return IntegralForm.monomial(dom, dx=dom.fiber_even, coeff=theta)


def underlying_domain(dom: DomainSpec, names: Optional[Sequence[str]] = None) -> DomainSpec:
    """R^{m|0} over the same base, fiber coordinates y1..ym by default."""
    names = list(names) if names is not None else [f"y{i+1}" for i in range(dom.m)]
    return DomainSpec(dom.m, 0, dom.p, dom.q, names + list(dom.names[dom.m + dom.n:]))


def even_embedding(dom: DomainSpec, odd_images: Mapping[str, SuperFunction] | None = None,
                   even_shifts: Mapping[str, SuperFunction] | None = None,
                   target: Optional[DomainSpec] = None) -> Substitution:
    """x_a -> y_a + shift_a, theta -> odd base expression (0 by default): the canonical embedding and its odd deformations."""
    target = target or underlying_domain(dom)
    images = {}
    for a, name in enumerate(dom.fiber_even):
        img = SuperFunction.coord(target, target.names[a])
        if even_shifts and name in even_shifts:
            img = img + even_shifts[name]
        images[name] = img
    for name in dom.fiber_odd:
        img = (odd_images or {}).get(name)
        images[name] = img if img is not None else SuperFunction.zero(target)
    return Substitution(dom, target, images)


def even_pullback_integral(iota: Substitution, omega: Form) -> SuperFunction:
    """Integral over the underlying even fiber of the top-degree part of the pulled-back form."""
    tgt = iota.target
    if tgt.n:
        raise DomainError("target of an even embedding must have no fiber odd coordinates")
    pulled = iota.pull(omega)
    top = pulled.terms.get(((1 << tgt.m) - 1, ()))
    if top is None:
        return SuperFunction.zero(tgt.base())
    for name in tgt.fiber_even:
        top = top.total_integral_even(name)
    return top.transfer(tgt.base())
