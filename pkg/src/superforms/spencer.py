"""Integral forms: Berezinian times polyvectors, with the Spencer differential.

An IntegralForm stores {(d/dx mask, d/dtheta exponents): g} meaning
ber (x) g * d/dx^A (d/dtheta)^E. The Berezinian generator is never stored and
contributes no sign (think of it as sitting to the right). Polyvector letters
have bidegrees d/dx: (-1, 0) and d/dtheta: (-1, 1), so the d/dx anticommute and
the d/dtheta commute.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .forms import FKey, Form, _Graded, mask_bits, mask_merge_sign, mono_mul, render
from .scalar import DomainError, DomainSpec, SuperFunction, popcount


def _strip_x(key: FKey, a: int) -> Tuple[int, Optional[FKey]]:
    """Left derivative d/d(d/dx^a) of a polyvector monomial."""
    mask, exps = key
    if not mask >> a & 1:
        return 0, None
    s = -1 if popcount(mask & ((1 << a) - 1)) & 1 else 1
    return s, (mask ^ (1 << a), exps)


def _strip_th(key: FKey, al: int) -> Tuple[int, Optional[FKey]]:
    """Left derivative d/d(d/dtheta^al): passes every d/dx, multiplicity from the power."""
    mask, exps = key
    e = exps[al]
    if not e:
        return 0, None
    s = -e if popcount(mask) & 1 else e
    return s, (mask, exps[:al] + (e - 1,) + exps[al + 1:])


class IntegralForm(_Graded):
    __slots__ = ()

    @classmethod
    def zero(cls, dom: DomainSpec) -> "IntegralForm":
        return cls(dom, {})

    @classmethod
    def ber(cls, dom: DomainSpec, coeff: SuperFunction | int | Fraction = 1) -> "IntegralForm":
        if not isinstance(coeff, SuperFunction):
            coeff = SuperFunction.const(dom, coeff)
        return cls(dom, {(0, (0,) * dom.n): coeff})

    @classmethod
    def monomial(cls, dom: DomainSpec, dx: Sequence[str] = (), dth: Mapping[str, int] | Sequence[str] = (),
                 coeff: SuperFunction | int | Fraction = 1) -> "IntegralForm":
        """ber (x) coeff * d/dx^{a1} ... d/dx^{ak} prod (d/dtheta)^e, d/dx in the given order."""
        f = Form.monomial(dom, dx, dth, coeff)
        return cls(dom, f.terms)

    # -- gradings
    def key_bidegree(self, k: FKey) -> Tuple[int, int]:
        order = popcount(k[0]) + sum(k[1])
        return self.domain.m - order, (self.domain.n + sum(k[1])) & 1

    def bidegree(self) -> Optional[Tuple[int, int]]:
        found = set()
        for k, f in self.terms.items():
            deg, par = self.key_bidegree(k)
            fp = f.parity()
            if fp is None:
                return None
            found.add((deg, (par + fp) & 1))
        if not found:
            return (self.domain.m, self.domain.n & 1)
        return found.pop() if len(found) == 1 else None

    def degree(self) -> Optional[int]:
        degs = {self.key_bidegree(k)[0] for k in self.terms}
        if not degs:
            return self.domain.m
        return degs.pop() if len(degs) == 1 else None

    def component(self, degree: int) -> "IntegralForm":
        return IntegralForm(self.domain, {k: v for k, v in self.terms.items() if self.key_bidegree(k)[0] == degree})

    def order(self) -> Optional[int]:
        d = self.degree()
        return None if d is None else self.domain.m - d

    # -- operators
    def delta(self) -> "IntegralForm":
        """Spencer differential: sum_A d/d(d/dX^A) o d/dX^A, the X-derivative acting first."""
        dom = self.domain
        out: Dict[FKey, SuperFunction] = {}
        for key, g in self.terms.items():
            mask, exps = key
            for a in mask_bits(mask):
                s, k = _strip_x(key, a)
                c = g.derive(dom.names[a])
                if not c:
                    continue
                c = c if s > 0 else -c
                out[k] = out[k] + c if k in out else c
            for al, e in enumerate(exps):
                if not e:
                    continue
                s, k = _strip_th(key, al)
                c = g.derive(dom.names[dom.m + al])
                if not c:
                    continue
                c = c.twist().scale(s)
                out[k] = out[k] + c if k in out else c
        return IntegralForm(dom, out)

    def strip(self, letter: Tuple[int, int]) -> "IntegralForm":
        """Apply d/d(d/dX) for letter (parity, fiber index) as a left derivation."""
        par, i = letter
        out: Dict[FKey, SuperFunction] = {}
        for key, g in self.terms.items():
            s, k = (_strip_th if par else _strip_x)(key, i)
            if not s:
                continue
            c = (g.twist() if par else g).scale(s)
            out[k] = out[k] + c if k in out else c
        return IntegralForm(self.domain, out)

    def lmul_poly(self, key: FKey, coeff: SuperFunction) -> "IntegralForm":
        """Left product by coeff * (polyvector monomial)."""
        out: Dict[FKey, SuperFunction] = {}
        flip = sum(key[1]) & 1
        for k2, g in self.terms.items():
            s, k = mono_mul(key, k2)
            if not s:
                continue
            c = coeff * g.twist_if(flip)
            c = c if s > 0 else -c
            out[k] = out[k] + c if k in out else c
        return IntegralForm(self.domain, out)

    def __str__(self):
        return render(self.domain, self.terms, "p", prefix="Ber⊗")

    def __repr__(self):
        return f"IntegralForm({self})"


def delta(sigma: IntegralForm) -> IntegralForm:
    return sigma.delta()


def act(omega: Form, sigma: IntegralForm) -> IntegralForm:
    """Module action of forms on integral forms.

    f dx^{a1}..dx^{ak} dtheta^E acts as f * D_{a1} ... D_{ak} D_theta^E, where
    D_X is the left derivative with respect to the polyvector letter d/dX and the
    rightmost operator is applied first.
    """
    if omega.domain != sigma.domain:
        raise DomainError("domain mismatch")
    dom = sigma.domain
    out = IntegralForm.zero(dom)
    cache: Dict[FKey, IntegralForm] = {}
    for (mask, exps), f in omega.terms.items():
        key = (mask, exps)
        r = cache.get(key)
        if r is None:
            r = sigma
            for al in range(dom.n - 1, -1, -1):
                for _ in range(exps[al]):
                    r = r.strip((1, al))
                    if not r:
                        break
            for a in sorted(mask_bits(mask), reverse=True):
                if not r:
                    break
                r = r.strip((0, a))
            cache[key] = r
        if r:
            out = out + r.lmul(f)
    return out
