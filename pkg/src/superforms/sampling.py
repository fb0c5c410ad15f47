"""Seeded random elements over bounded monomial lattices.

Everything takes an explicit random.Random so runs are reproducible from a seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .forms import Form
from .scalar import DomainSpec, PiecewisePoly, SuperFunction
from .spencer import IntegralForm


def rational(rng: random.Random, span: int = 3) -> Fraction:
    num = rng.randint(-span, span)
    while num == 0:
        num = rng.randint(-span, span)
    return Fraction(num, rng.randint(1, 3))


def bump_product(dom: DomainSpec, rng: random.Random, names=None, degree: int = 2) -> SuperFunction:
    """Product of shifted B-splines, one per listed even coordinate (default: fiber evens)."""
    names = dom.fiber_even if names is None else names
    out = SuperFunction.const(dom, 1)
    for name in names:
        pp = PiecewisePoly.bspline(degree, center=Fraction(rng.randint(-2, 2), 2), scale=Fraction(rng.randint(1, 2)))
        out = out * SuperFunction.from_piecewise(dom, name, pp)
    return out


def function(dom: DomainSpec, rng: random.Random, nterms: int = 3, max_pow: int = 2,
             parity: Optional[int] = None, compact=False, base: bool = True) -> SuperFunction:
    """Random superfunction.

    compact=True multiplies by a fresh bump in every fiber even variable; a
    SuperFunction passed as compact is used as that bump instead.
    """
    out = SuperFunction.zero(dom)
    evens = list(dom.fiber_even) + (list(dom.names[dom.m + dom.n: dom.m + dom.n + dom.p]) if base else [])
    odds = list(dom.fiber_odd) + (list(dom.names[dom.m + dom.n + dom.p:]) if base else [])
    for _ in range(nterms):
        odd = [x for x in odds if rng.random() < 0.5]
        if parity is not None and len(odd) % 2 != parity:
            if odds:
                x = rng.choice(odds)
                odd = [y for y in odd if y != x] if x in odd else sorted(odd + [x], key=odds.index)
            else:
                continue
        powers = {x: rng.randint(0, max_pow) for x in evens if rng.random() < 0.6}
        out = out + SuperFunction.monomial(dom, odd=odd, powers=powers, coeff=rational(rng))
    if isinstance(compact, SuperFunction):
        out = out * compact
    elif compact:
        out = out * bump_product(dom, rng)
    return out


def form(dom: DomainSpec, rng: random.Random, degree: Optional[int] = None, nterms: int = 3,
         max_pow: int = 2, compact=False, homogeneous: bool = True, max_dth: int = 2,
         parity: Optional[int] = None) -> Form:
    """Random form; homogeneous=True gives a single bidegree (parity random unless given)."""
    out = Form.zero(dom)
    target_par = rng.randint(0, 1) if parity is None else parity & 1
    if compact is True:
        compact = bump_product(dom, rng)
    if degree is None and homogeneous:
        degree = rng.randint(0, dom.m + 2)
    for _ in range(nterms):
        deg = degree if degree is not None else rng.randint(0, dom.m + 2)
        mono = _random_monomial(dom, rng, deg, max_dth)
        if mono is None:
            continue
        mask, exps = mono
        par = None
        if homogeneous:
            par = (target_par + sum(exps)) & 1
            if not dom.n + dom.q and par:
                continue
        f = function(dom, rng, nterms=2, max_pow=max_pow, parity=par, compact=compact)
        out = out + Form(dom, {(mask, exps): f})
    return out


def integral_form(dom: DomainSpec, rng: random.Random, degree: Optional[int] = None, nterms: int = 3,
                  max_pow: int = 2, compact=False, homogeneous: bool = True,
                  max_dth: int = 2) -> IntegralForm:
    """Random integral form; degree means m - (polyvector order)."""
    out = IntegralForm.zero(dom)
    target_par = rng.randint(0, 1)
    if compact is True:
        compact = bump_product(dom, rng)
    if degree is None and homogeneous:
        degree = dom.m - rng.randint(0, dom.m + 2)
    for _ in range(nterms):
        order = dom.m - degree if degree is not None else rng.randint(0, dom.m + 2)
        if order < 0:
            continue
        mono = _random_monomial(dom, rng, order, max_dth)
        if mono is None:
            continue
        mask, exps = mono
        par = None
        if homogeneous:
            par = (target_par + sum(exps)) & 1
            if not dom.n + dom.q and par:
                continue
        f = function(dom, rng, nterms=2, max_pow=max_pow, parity=par, compact=compact)
        out = out + IntegralForm(dom, {(mask, exps): f})
    return out


def _random_monomial(dom: DomainSpec, rng: random.Random, deg: int, max_dth: int):
    if deg < 0:
        return None
    hi = min(deg, dom.m)
    k = rng.randint(min(hi, max(0, deg - max_dth * dom.n)), hi)
    rest = deg - k
    if rest and not dom.n:
        k = deg
        rest = 0
        if k > dom.m:
            return None
    mask = 0
    for a in rng.sample(range(dom.m), k):
        mask |= 1 << a
    exps = [0] * dom.n
    for _ in range(rest):
        exps[rng.randrange(dom.n)] += 1
    return mask, tuple(exps)
