"""Relative differential forms on a trivial family of superdomains.

A form is a finite sum f * dx^A dtheta^E with the coefficient written to the
LEFT of the monomial. Monomials are kept in normal order: all dx before all
dtheta, dx ascending (antisymmetric), dtheta as an exponent vector (they
commute). Bidegrees follow Deligne's rule: swapping a and b costs
(-1)^{deg a deg b + par a par b}; dx has (1, 0), dtheta has (1, 1).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .scalar import DomainError, DomainSpec, SuperFunction, popcount

FKey = Tuple[int, Tuple[int, ...]]  # (dx mask, dtheta exponents)


def mask_merge_sign(a: int, b: int) -> int:
    """Sign of putting the antisymmetric letters of a before those of b into ascending order."""
    if a & b:
        return 0
    swaps = 0
    bb = b
    while bb:
        low = bb & -bb
        swaps += popcount(a & ~((low << 1) - 1))
        bb ^= low
    return -1 if swaps & 1 else 1


def mask_bits(mask: int) -> Iterable[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mono_mul(k1: FKey, k2: FKey) -> Tuple[int, Optional[FKey]]:
    """Product of two normal-ordered monomials of the same type (dx/dtheta or dual)."""
    a, e = k1
    b, f = k2
    s = mask_merge_sign(a, b)
    if not s:
        return 0, None
    if popcount(b) * sum(e) & 1:
        s = -s
    return s, (a | b, tuple(x + y for x, y in zip(e, f)))


class _Graded:
    """Shared bookkeeping for dictionaries key -> SuperFunction."""

    __slots__ = ("domain", "terms")

    def __init__(self, domain: DomainSpec, terms: Mapping[FKey, SuperFunction] | None = None):
        self.domain = domain
        clean = {}
        for k, v in (terms or {}).items():
            if v.domain != domain:
                raise DomainError("coefficient lives on another domain")
            if v.terms:
                clean[k] = v
        self.terms = clean

    def _like(self, terms):
        return type(self)(self.domain, terms)

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"expected {type(self).__name__}")
        if other.domain != self.domain:
            raise DomainError("domain mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return self._like(out)

    def __neg__(self):
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self._like({k: v.scale(c) for k, v in self.terms.items()})

    def lmul(self, f: SuperFunction):
        """Multiply every coefficient from the left by a function."""
        return self._like({k: f * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.domain == other.domain and not (self - other).terms

    def __hash__(self):
        return hash((type(self).__name__, self.domain, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def map_coefficients(self, fn):
        return self._like({k: fn(v) for k, v in self.terms.items()})

    def transfer(self, target: DomainSpec):
        """Move to another domain by coordinate labels (relative order of fiber letters must agree)."""
        src = self.domain
        if target == src:
            return self
        emap = {}
        for a, name in enumerate(src.fiber_even):
            if name in target.names and target.is_fiber(name) and not target.locate(name)[0]:
                emap[a] = target.locate(name)[1]
        omap = {}
        for j, name in enumerate(src.fiber_odd):
            if name in target.names and target.is_fiber(name) and target.locate(name)[0]:
                omap[j] = target.locate(name)[1]
        for m in (emap, omap):
            vals = [m[k] for k in sorted(m)]
            if vals != sorted(vals):
                raise DomainError("fiber letters change relative order")
        out = {}
        for (mask, exps), f in self.terms.items():
            nmask = 0
            for a in mask_bits(mask):
                if a not in emap:
                    raise DomainError(f"letter {src.fiber_even[a]} missing in target")
                nmask |= 1 << emap[a]
            nexps = [0] * target.n
            for j, e in enumerate(exps):
                if e:
                    if j not in omap:
                        raise DomainError(f"letter {src.fiber_odd[j]} missing in target")
                    nexps[omap[j]] = e
            out[(nmask, tuple(nexps))] = f.transfer(target)
        return type(self)(target, out)


class Form(_Graded):
    """Relative differential form: {(dx mask, dtheta exponents): coefficient}."""

    __slots__ = ()

    @classmethod
    def zero(cls, dom: DomainSpec) -> "Form":
        return cls(dom, {})

    @classmethod
    def function(cls, f: SuperFunction) -> "Form":
        return cls(f.domain, {(0, (0,) * f.domain.n): f})

    @classmethod
    def const(cls, dom: DomainSpec, c=1) -> "Form":
        return cls.function(SuperFunction.const(dom, c))

    @classmethod
    def monomial(cls, dom: DomainSpec, dx: Sequence[str] = (), dth: Mapping[str, int] | Sequence[str] = (),
                 coeff: SuperFunction | int | Fraction = 1) -> "Form":
        """coeff * dx^{a1} ... dx^{ak} * prod dtheta^{e}, dx factors in the given order."""
        mask, sign = 0, 1
        for name in dx:
            par, i = dom.locate(name)
            if par or not dom.is_fiber(name):
                raise DomainError(f"{name} is not an even fiber coordinate")
            s = mask_merge_sign(mask, 1 << i)
            if not s:
                return cls.zero(dom)
            sign *= s
            mask |= 1 << i
        exps = [0] * dom.n
        items = dth.items() if isinstance(dth, Mapping) else ((x, 1) for x in dth)
        for name, k in items:
            par, j = dom.locate(name)
            if not par or not dom.is_fiber(name):
                raise DomainError(f"{name} is not an odd fiber coordinate")
            exps[j] += k
        if not isinstance(coeff, SuperFunction):
            coeff = SuperFunction.const(dom, coeff)
        return cls(dom, {(mask, tuple(exps)): coeff.scale(sign)})

    @classmethod
    def differential(cls, dom: DomainSpec, name: str) -> "Form":
        par, i = dom.locate(name)
        if not dom.is_fiber(name):
            raise DomainError(f"{name} is a base coordinate")
        if par:
            return cls.monomial(dom, dth=[name])
        return cls.monomial(dom, dx=[name])

    # -- gradings
    @staticmethod
    def key_bidegree(k: FKey) -> Tuple[int, int]:
        return popcount(k[0]) + sum(k[1]), sum(k[1]) & 1

    def bidegree(self) -> Optional[Tuple[int, int]]:
        """(form degree, parity) if homogeneous; None otherwise (zero reports (0, 0))."""
        found = set()
        for k, f in self.terms.items():
            deg, par = self.key_bidegree(k)
            fp = f.parity()
            if fp is None:
                return None
            found.add((deg, (par + fp) & 1))
        if not found:
            return (0, 0)
        return found.pop() if len(found) == 1 else None

    def degree(self) -> Optional[int]:
        degs = {self.key_bidegree(k)[0] for k in self.terms}
        if not degs:
            return 0
        return degs.pop() if len(degs) == 1 else None

    def homogeneous_parts(self) -> Dict[Tuple[int, int], "Form"]:
        out: Dict[Tuple[int, int], Dict] = {}
        for k, f in self.terms.items():
            deg, par = self.key_bidegree(k)
            for fp, part in enumerate(f.parts()):
                if part:
                    out.setdefault((deg, (par + fp) & 1), {})[k] = part
        return {bd: Form(self.domain, t) for bd, t in sorted(out.items())}

    def component(self, degree: int) -> "Form":
        return Form(self.domain, {k: v for k, v in self.terms.items() if self.key_bidegree(k)[0] == degree})

    # -- algebra
    def wedge(self, other: "Form") -> "Form":
        self._check(other)
        out: Dict[FKey, SuperFunction] = {}
        for k1, f in self.terms.items():
            flip = sum(k1[1]) & 1
            for k2, g in other.terms.items():
                s, k = mono_mul(k1, k2)
                if not s:
                    continue
                c = f * g.twist_if(flip)
                if s < 0:
                    c = -c
                out[k] = out[k] + c if k in out else c
        return Form(self.domain, out)

    def __mul__(self, other):
        if isinstance(other, Form):
            return self.wedge(other)
        if isinstance(other, SuperFunction):
            return self.wedge(Form.function(other))
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, SuperFunction):
            return self.lmul(other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def d(self) -> "Form":
        """Fiber exterior derivative; base coordinates are constants."""
        dom = self.domain
        out: Dict[FKey, SuperFunction] = {}
        nx = (0,) * dom.n
        for (mask, exps), f in self.terms.items():
            for a in range(dom.m):
                da = f.derive(dom.names[a])
                if not da:
                    continue
                s, k = mono_mul((1 << a, nx), (mask, exps))
                if s:
                    c = da if s > 0 else -da
                    out[k] = out[k] + c if k in out else c
            for al in range(dom.n):
                dal = f.derive(dom.names[dom.m + al])
                if not dal:
                    continue
                unit = tuple(1 if j == al else 0 for j in range(dom.n))
                s, k = mono_mul((0, unit), (mask, exps))
                c = dal.twist()
                c = c if s > 0 else -c
                out[k] = out[k] + c if k in out else c
        return Form(dom, out)

    def contract(self, v: Mapping[str, SuperFunction]) -> "Form":
        """Insert the vector field sum v^A d/dX^A (coefficients on the left)."""
        dom = self.domain
        out: Dict[FKey, SuperFunction] = {}
        for name, vA in v.items():
            par, idx = dom.locate(name)
            if not dom.is_fiber(name):
                raise DomainError(f"{name} is a base coordinate")
            if vA.domain != dom:
                raise DomainError("domain mismatch")
            for (mask, exps), f in self.terms.items():
                if par == 0:
                    if not mask >> idx & 1:
                        continue
                    s = -1 if popcount(mask & ((1 << idx) - 1)) & 1 else 1
                    k = (mask ^ (1 << idx), exps)
                    mult = 1
                else:
                    e = exps[idx]
                    if not e:
                        continue
                    s = -1 if popcount(mask) & 1 else 1
                    k = (mask, exps[:idx] + (e - 1,) + exps[idx + 1:])
                    mult = e
                c = vA * (f.twist() if par else f)
                c = c.scale(s * mult)
                out[k] = out[k] + c if k in out else c
        return Form(dom, out)

    def coefficient(self, dx: Sequence[str] = (), dth: Mapping[str, int] | None = None) -> SuperFunction:
        dom = self.domain
        mask = 0
        for name in dx:
            mask |= 1 << dom.locate(name)[1]
        exps = [0] * dom.n
        for name, k in (dth or {}).items():
            exps[dom.locate(name)[1]] = k
        key = (mask, tuple(exps))
        sign = 1
        seen = 0
        for name in dx:
            i = dom.locate(name)[1]
            sign *= mask_merge_sign(seen, 1 << i)
            seen |= 1 << i
        f = self.terms.get(key, SuperFunction.zero(dom))
        return f if sign > 0 else -f

    def __str__(self):
        return render(self.domain, self.terms, "d")

    def __repr__(self):
        return f"Form({self})"


def render(dom: DomainSpec, terms, style: str, prefix: str = "") -> str:
    """Deterministic text: coefficient followed by the monomial."""
    if not terms:
        return prefix + "0"
    parts = []
    for (mask, exps), f in sorted(terms.items()):
        letters = []
        for a in mask_bits(mask):
            letters.append(("d" if style == "d" else "∂") + dom.names[a])
        for j, e in enumerate(exps):
            if e:
                base = ("d" if style == "d" else "∂") + dom.names[dom.m + j]
                letters.append(base if e == 1 else f"{base}^{e}")
        mono = "^".join(letters) if style == "d" else "∧".join(letters)
        parts.append(f"[{f}]" + (" · " + mono if mono else ""))
    return prefix + " + ".join(parts)


def d(omega: Form) -> Form:
    return omega.d()


def wedge(omega: Form, eta: Form) -> Form:
    return omega.wedge(eta)


def contract(v: Mapping[str, SuperFunction], omega: Form) -> Form:
    return omega.contract(v)


# ---------------------------------------------------------------------------
# coordinate substitutions


class Substitution:
    """A morphism of superdomains given by coordinate images.

    images maps each source coordinate label to a SuperFunction on the target
    domain. Labels present in both domains that are not listed map to themselves,
    which is how base parameters ride along. Every even image must be a target
    even coordinate plus a nilpotent correction.
    """

    def __init__(self, source: DomainSpec, target: DomainSpec, images: Mapping[str, SuperFunction]):
        self.source, self.target = source, target
        imgs: Dict[str, SuperFunction] = {}
        for name in source.names:
            if name in images:
                img = images[name]
                if img.domain != target:
                    raise DomainError(f"image of {name} lives on another domain")
            elif name in target.names and target.locate(name)[0] == source.locate(name)[0]:
                img = SuperFunction.coord(target, name)
            else:
                raise DomainError(f"no image given for {name}")
            want = source.locate(name)[0]
            if img.parity() != want and img:
                raise DomainError(f"image of {name} has the wrong parity")
            imgs[name] = img
        self.images = imgs
        # even bodies
        self._even_body: Dict[int, Tuple[int, SuperFunction]] = {}
        for v, name in enumerate(source.even_names):
            img = imgs[name]
            body = {k: c for k, c in img.terms.items() if k[0] == 0}
            if any(b for b in img.bps):
                raise DomainError(f"image of {name} must be polynomial")
            if len(body) != 1:
                raise DomainError(f"image of {name} must be a coordinate plus a nilpotent part")
            ((_, _, pw), c), = body.items()
            if c != 1 or sum(pw) != 1:
                raise DomainError(f"image of {name} must be a coordinate plus a nilpotent part")
            tv = pw.index(1)
            nil = img - SuperFunction.coord(target, target.even_names[tv])
            self._even_body[v] = (tv, nil)
        targets = [tv for tv, _ in self._even_body.values()]
        if len(set(targets)) != len(targets):
            raise DomainError("two even coordinates share a body")

    def pull_function(self, f: SuperFunction) -> SuperFunction:
        if f.domain != self.source:
            raise DomainError("function lives on another domain")
        src, tgt = self.source, self.target
        out = SuperFunction.zero(tgt)
        for mask, g in f.odd_components().items():
            # even part: rename then Taylor-expand along the nilpotent shifts
            bps = [()] * tgt.n_even
            for v, (tv, _) in self._even_body.items():
                bps[tv] = g.bps[v]
            terms = {}
            for (_, cells, pw), c in g.terms.items():
                nc = [0] * tgt.n_even
                npw = [0] * tgt.n_even
                for v, (tv, _) in self._even_body.items():
                    nc[tv] = cells[v]
                    npw[tv] = pw[v]
                terms[(0, tuple(nc), tuple(npw))] = c
            h = SuperFunction(tgt, terms, bps)
            known = g._known_smooth()
            h._inherit(sum(1 << tv for v, (tv, _) in self._even_body.items() if known >> v & 1))
            for v, (tv, nil) in self._even_body.items():
                if not nil:
                    continue
                name = tgt.even_names[tv]
                acc, cur, k, power = h, h, 0, SuperFunction.const(tgt, 1)
                while True:
                    k += 1
                    power = power * nil
                    if not power:
                        break
                    cur = cur.derive(name, fiber_only=False)
                    if not cur:
                        break
                    acc = acc + (power * cur).scale(Fraction(1, factorial(k)))
                h = acc
            odd = SuperFunction.const(tgt, 1)
            for j in mask_bits(mask):
                odd = odd * self.images[src.odd_names[j]]
            out = out + h * odd
        return out

    def pull(self, omega: Form) -> Form:
        if omega.domain != self.source:
            raise DomainError("form lives on another domain")
        src = self.source
        dimg = {}
        for name in src.fiber_even + src.fiber_odd:
            dimg[name] = Form.function(self.images[name]).d()
        out = Form.zero(self.target)
        for (mask, exps), f in omega.terms.items():
            if any(not dimg[src.names[a]] for a in mask_bits(mask)) or \
                    any(e and not dimg[src.names[src.m + j]] for j, e in enumerate(exps)):
                continue
            acc = Form.function(self.pull_function(f))
            for a in mask_bits(mask):
                acc = acc.wedge(dimg[src.names[a]])
            for j, e in enumerate(exps):
                for _ in range(e):
                    acc = acc.wedge(dimg[src.names[src.m + j]])
            out = out + acc
        return out


def pullback(phi: Substitution, omega: Form) -> Form:
    return phi.pull(omega)
