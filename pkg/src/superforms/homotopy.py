"""Constructive homotopies for the compactly supported Poincare lemmas.

Even direction t (differential forms): a term is either free of dt or of the
form alpha ^ dt * f with the coefficient f written on the right. The push
forward integrates f over t, e_* wedges with the unit hat e(t) dt, and

    K(alpha ^ dt * f) = alpha * (int_{-inf}^t f  -  E(t) int f),   E' = e.

Odd direction psi (integral forms): pi_* takes d/dpsi at psi = 0 on terms free
of the polyvector letter d/dpsi, e_* multiplies by psi from the left and K
raises the d/dpsi power by one with weight 1/(k+1).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple, Union

from .forms import Form, mask_bits
from .scalar import DomainError, DomainSpec, PiecewisePoly, SuperFunction, popcount
from .spencer import IntegralForm

HAT = PiecewisePoly.hat()


def _even_index(dom: DomainSpec, t: str) -> int:
    par, i = dom.locate(t)
    if par or not dom.is_fiber(t):
        raise DomainError(f"{t} is not an even fiber coordinate")
    return i


def _odd_index(dom: DomainSpec, psi: str) -> int:
    par, j = dom.locate(psi)
    if not par or not dom.is_fiber(psi):
        raise DomainError(f"{psi} is not an odd fiber coordinate")
    return j


def unit_bump(dom: DomainSpec, t: str) -> SuperFunction:
    return SuperFunction.from_piecewise(dom, t, HAT)


def unit_step(dom: DomainSpec, t: str) -> SuperFunction:
    """E(t) = int_{-inf}^t e."""
    return SuperFunction.from_piecewise(dom, t, HAT.antiderivative())


# ---------------------------------------------------------------------------
# even direction, differential forms


def split_types(omega: Form, t: str) -> Tuple[Form, Form]:
    """(terms without dt, terms with dt)."""
    i = _even_index(omega.domain, t)
    one = {k: v for k, v in omega.terms.items() if not k[0] >> i & 1}
    two = {k: v for k, v in omega.terms.items() if k[0] >> i & 1}
    return Form(omega.domain, one), Form(omega.domain, two)


def _peel_dt(key, i: int) -> Tuple[int, Tuple]:
    """Sign s and key of alpha with dx^A dtheta^E = s * alpha ^ dt."""
    mask, exps = key
    after = popcount(mask >> (i + 1))
    return (-1 if (sum(exps) + after) & 1 else 1), (mask ^ (1 << i), exps)


def _drop_bit(mask: int, i: int) -> int:
    low = mask & ((1 << i) - 1)
    return low | (mask >> (i + 1)) << i


def pi_star_even(omega: Form, t: str) -> Form:
    dom = omega.domain
    i = _even_index(dom, t)
    small = dom.drop(t)
    out = {}
    for key, g in omega.terms.items():
        if not key[0] >> i & 1:
            continue
        s, (mask, exps) = _peel_dt(key, i)
        k = (_drop_bit(mask, i), exps)
        h = g.total_integral_even(t).scale(s)
        out[k] = out[k] + h if k in out else h
    return Form(small, out)


def e_star_even(omega: Form, big: DomainSpec, t: str) -> Form:
    """pi^* omega ^ e(t) dt on the domain with t."""
    lifted = omega.transfer(big)
    return lifted.wedge(Form.monomial(big, dx=[t], coeff=unit_bump(big, t)))


def K_even(omega: Form, t: str) -> Form:
    dom = omega.domain
    i = _even_index(dom, t)
    E = unit_step(dom, t)
    out = {}
    for key, g in omega.terms.items():
        if not key[0] >> i & 1:
            continue
        s, k = _peel_dt(key, i)
        total = g.total_integral_even(t).transfer(dom)
        h = g.antiderivative_even(t) - E * total
        h = h.scale(s)
        out[k] = out[k] + h if k in out else h
    return Form(dom, out)


def even_identity_sides(omega: Form, t: str) -> Tuple[Form, Form]:
    """((1 - e_* pi_*) omega, (-1)^{deg - 1} (dK - Kd) omega) for homogeneous omega."""
    deg = omega.degree()
    if deg is None:
        raise ValueError("need a form of a single degree")
    left = omega - e_star_even(pi_star_even(omega, t), omega.domain, t)
    right = K_even(omega, t).d() - K_even(omega.d(), t)
    return left, right.scale(-1 if deg % 2 == 0 else 1)


# ---------------------------------------------------------------------------
# odd direction, integral forms


def split_orders(sigma: IntegralForm, psi: str) -> dict:
    """k -> part of sigma carrying (d/dpsi)^k."""
    j = _odd_index(sigma.domain, psi)
    out = {}
    for key, g in sigma.terms.items():
        out.setdefault(key[1][j], {})[key] = g
    return {k: IntegralForm(sigma.domain, v) for k, v in sorted(out.items())}


def pi_star_odd(sigma: IntegralForm, psi: str) -> IntegralForm:
    dom = sigma.domain
    j = _odd_index(dom, psi)
    small = dom.drop(psi)
    out = {}
    for key, g in sigma.terms.items():
        if key[1][j]:
            continue
        h = g.derive(psi).set_odd_zero(psi)
        out[key] = h
    return IntegralForm(dom, out).transfer(small)


def e_star_odd(tau: IntegralForm, big: DomainSpec, psi: str) -> IntegralForm:
    lifted = tau.transfer(big)
    return lifted.lmul(SuperFunction.coord(big, psi))


def K_odd(sigma: IntegralForm, psi: str) -> IntegralForm:
    """(-1)^{|g| + #d/dx} / (k+1) * psi g d/dx^A (d/dtheta)^E (d/dpsi)^{k+1}."""
    dom = sigma.domain
    j = _odd_index(dom, psi)
    p = SuperFunction.coord(dom, psi)
    out = {}
    for (mask, exps), g in sigma.terms.items():
        k = exps[j]
        h = p * g.twist()
        if popcount(mask) & 1:
            h = -h
        h = h.scale(Fraction(1, k + 1))
        nk = (mask, exps[:j] + (k + 1,) + exps[j + 1:])
        out[nk] = out[nk] + h if nk in out else h
    return IntegralForm(dom, out)


def odd_identity_sides(sigma: IntegralForm, psi: str) -> Tuple[IntegralForm, IntegralForm]:
    left = sigma - e_star_odd(pi_star_odd(sigma, psi), sigma.domain, psi)
    right = K_odd(sigma, psi).delta() + K_odd(sigma.delta(), psi)
    return left, right


# ---------------------------------------------------------------------------
# even direction, integral forms


def pi_star_spencer_even(sigma: IntegralForm, t: str) -> IntegralForm:
    """Integrate over t the terms free of d/dt (their Berezinian carries dt)."""
    dom = sigma.domain
    i = _even_index(dom, t)
    small = dom.drop(t)
    out = {}
    for key, g in sigma.terms.items():
        if key[0] >> i & 1:
            continue
        out[key] = g.total_integral_even(t).transfer(dom)
    return IntegralForm(dom, out).transfer(small)


def e_star_spencer_even(tau: IntegralForm, big: DomainSpec, t: str) -> IntegralForm:
    return tau.transfer(big).lmul(unit_bump(big, t))


def K_spencer_even(sigma: IntegralForm, t: str) -> IntegralForm:
    """d/dt * (int_{-inf}^t a - E(t) int a) on terms a free of d/dt, zero elsewhere."""
    dom = sigma.domain
    i = _even_index(dom, t)
    E = unit_step(dom, t)
    out = IntegralForm.zero(dom)
    unit = (1 << i, (0,) * dom.n)
    for key, g in sigma.terms.items():
        if key[0] >> i & 1:
            continue
        h = g.antiderivative_even(t) - E * g.total_integral_even(t).transfer(dom)
        out = out + IntegralForm(dom, {key: h}).lmul_poly(unit, SuperFunction.const(dom, 1))
    return out


def spencer_even_identity_sides(sigma: IntegralForm, t: str) -> Tuple[IntegralForm, IntegralForm]:
    left = sigma - e_star_spencer_even(pi_star_spencer_even(sigma, t), sigma.domain, t)
    right = K_spencer_even(sigma, t).delta() + K_spencer_even(sigma.delta(), t)
    return left, right


# ---------------------------------------------------------------------------
# primitives


def odd_euler_primitive(omega: Form) -> Tuple[Form, Form]:
    """Split a closed form as (theta-free part, eta) with omega = part + d eta.

    Uses the Euler field E = sum theta d/dtheta, whose Lie derivative multiplies the
    (#theta + #dtheta)-weight w part by w.
    """
    dom = omega.domain
    by_w = {}
    for (mask, exps), g in omega.terms.items():
        for m_, part in g.odd_components().items():
            w = popcount(m_ & ((1 << dom.n) - 1)) + sum(exps)
            c = part * SuperFunction(dom, {(m_, (0,) * dom.n_even, (0,) * dom.n_even): Fraction(1)})
            by_w.setdefault(w, Form.zero(dom))
            by_w[w] = by_w[w] + Form(dom, {(mask, exps): c})
    euler = {name: SuperFunction.coord(dom, name) for name in dom.fiber_odd}
    eta = Form.zero(dom)
    for w, part in by_w.items():
        if w:
            eta = eta + part.contract(euler).scale(Fraction(1, w))
    return by_w.get(0, Form.zero(dom)), eta


def find_primitive(x: Union[Form, IntegralForm], check: bool = True) -> Optional[Union[Form, IntegralForm]]:
    """A primitive of a closed compactly supported (integral) form, or None for a nonzero top class."""
    if isinstance(x, Form):
        if check and not x.d().is_zero():
            raise ValueError("input is not closed")
        y = _form_primitive(x)
        if y is not None and y.d() != x:
            raise AssertionError("internal error: primitive does not reproduce the input")
        return y
    if isinstance(x, IntegralForm):
        if check and not x.delta().is_zero():
            raise ValueError("input is not closed")
        y = _spencer_primitive(x)
        if y is not None and y.delta() != x:
            raise AssertionError("internal error: primitive does not reproduce the input")
        return y
    raise TypeError("expected a Form or an IntegralForm")


def _form_primitive(omega: Form) -> Optional[Form]:
    dom = omega.domain
    if not omega:
        return Form.zero(dom)
    if dom.n:
        body, eta = odd_euler_primitive(omega)
        if not body:
            return eta
        rest = _even_primitive(body)
        return None if rest is None else eta + rest
    return _even_primitive(omega)


def _even_primitive(omega: Form) -> Optional[Form]:
    """Primitive of a closed form with no theta / dtheta (coefficients may carry base odd letters)."""
    dom = omega.domain
    if not omega:
        return Form.zero(dom)
    if not dom.m:
        return None
    t = dom.fiber_even[-1]
    deg = omega.degree()
    sign = -1 if deg % 2 == 0 else 1  # (-1)^{deg-1}
    pushed = pi_star_even(omega, t)
    # omega = e_* pi_* omega + (-1)^{deg-1} d K omega, and d e_* = e_* d
    lower = _even_primitive(pushed)
    if lower is None:
        return None
    return e_star_even(lower, dom, t) + K_even(omega, t).scale(sign)


def _spencer_primitive(sigma: IntegralForm) -> Optional[IntegralForm]:
    dom = sigma.domain
    if not sigma:
        return IntegralForm.zero(dom)
    if dom.n:
        psi = dom.fiber_odd[-1]
        lower = _spencer_primitive(pi_star_odd(sigma, psi))
        if lower is None:
            return None
        return e_star_odd(lower, dom, psi) + K_odd(sigma, psi)
    if not dom.m:
        return None
    t = dom.fiber_even[-1]
    lower = _spencer_primitive(pi_star_spencer_even(sigma, t))
    if lower is None:
        return None
    return e_star_spencer_even(lower, dom, t) + K_spencer_even(sigma, t)
