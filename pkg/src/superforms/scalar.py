"""Exact superfunctions on a relative superdomain R^{m|n} x R^{p|q}.

Even dependence is piecewise polynomial with rational breakpoints, odd
dependence is a Grassmann monomial stored as a bitmask. A SuperFunction keeps,
for every even variable, one sorted breakpoint list shared by all of its terms;
a term is then an odd monomial times a product of atoms t^k * 1_cell(t).
Redundant breakpoints are merged after every operation, so equality of two
functions is equality of their dictionaries.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

Q = Fraction
Key = Tuple[int, Tuple[int, ...], Tuple[int, ...]]  # (odd mask, cells, powers)


class DomainError(ValueError):
    pass


class UnsupportedIntegrand(ValueError):
    pass


class NotDifferentiable(ValueError):
    pass


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# coordinates


class DomainSpec:
    """Coordinate data of a trivial family: fiber R^{m|n} over base R^{p|q}.

    Even variables are ordered fiber first, then base; so are odd ones.
    """

    __slots__ = ("m", "n", "p", "q", "names", "_index")

    def __init__(self, m: int, n: int, p: int = 0, q: int = 0, names: Sequence[str] | None = None):
        if min(m, n, p, q) < 0:
            raise DomainError("dimensions must be non-negative")
        if names is None:
            names = ([f"x{i+1}" for i in range(m)] + [f"th{i+1}" for i in range(n)]
                     + [f"s{i+1}" for i in range(p)] + [f"lam{i+1}" for i in range(q)])
        names = tuple(names)
        if len(names) != m + n + p + q:
            raise DomainError("need one label per coordinate")
        if len(set(names)) != len(names):
            raise DomainError("coordinate labels must be distinct")
        self.m, self.n, self.p, self.q, self.names = m, n, p, q, names
        idx = {}
        for i in range(m):
            idx[names[i]] = (0, i)
        for j in range(n):
            idx[names[m + j]] = (1, j)
        for i in range(p):
            idx[names[m + n + i]] = (0, m + i)
        for j in range(q):
            idx[names[m + n + p + j]] = (1, n + j)
        self._index = idx

    # labels in storage order
    @property
    def even_names(self) -> Tuple[str, ...]:
        return self.names[: self.m] + self.names[self.m + self.n: self.m + self.n + self.p]

    @property
    def odd_names(self) -> Tuple[str, ...]:
        return self.names[self.m: self.m + self.n] + self.names[self.m + self.n + self.p:]

    @property
    def fiber_even(self) -> Tuple[str, ...]:
        return self.names[: self.m]

    @property
    def fiber_odd(self) -> Tuple[str, ...]:
        return self.names[self.m: self.m + self.n]

    @property
    def n_even(self) -> int:
        return self.m + self.p

    @property
    def n_odd(self) -> int:
        return self.n + self.q

    def locate(self, name: str) -> Tuple[int, int]:
        """(parity, storage index) of a coordinate label."""
        try:
            return self._index[name]
        except KeyError:
            raise DomainError(f"unknown coordinate {name!r}") from None

    def is_fiber(self, name: str) -> bool:
        par, i = self.locate(name)
        return i < (self.n if par else self.m)

    def drop(self, name: str) -> "DomainSpec":
        par, i = self.locate(name)
        fiber = self.is_fiber(name)
        names = [x for x in self.names if x != name]
        m, n, p, q = self.m, self.n, self.p, self.q
        if par == 0 and fiber:
            m -= 1
        elif par == 0:
            p -= 1
        elif fiber:
            n -= 1
        else:
            q -= 1
        return DomainSpec(m, n, p, q, names)

    def base(self) -> "DomainSpec":
        """The parameter domain R^{0|0} x R^{p|q} (fiber deleted)."""
        return DomainSpec(0, 0, self.p, self.q, self.names[self.m + self.n:])

    def _key(self):
        return (self.m, self.n, self.p, self.q, self.names)

    def __eq__(self, other):
        return isinstance(other, DomainSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"DomainSpec(m={self.m}, n={self.n}, p={self.p}, q={self.q}, names={self.names})"


# ---------------------------------------------------------------------------
# Grassmann monomials


def popcount(x: int) -> int:
    return bin(x).count("1")


_odd_sign_cache: Dict[Tuple[int, int], int] = {}


def odd_product(a: int, b: int) -> int:
    """Sign of theta^a * theta^b brought to ascending order, 0 if they overlap."""
    if a & b:
        return 0
    key = (a, b)
    s = _odd_sign_cache.get(key)
    if s is None:
        swaps = 0
        bb = b
        while bb:
            low = bb & -bb
            swaps += popcount(a & ~((low << 1) - 1))
            bb ^= low
        s = -1 if swaps & 1 else 1
        _odd_sign_cache[key] = s
    return s


# ---------------------------------------------------------------------------
# one-variable piecewise polynomials


def _poly_trim(c: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_eval(c: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * t + a
    return acc


def poly_antideriv(c: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return _poly_trim([Fraction(0)] + [Fraction(a) / (k + 1) for k, a in enumerate(c)])


def poly_shift(c: Sequence[Fraction], h: Fraction) -> Tuple[Fraction, ...]:
    """Coefficients of p(t - h)."""
    out = [Fraction(0)] * len(c)
    for k, a in enumerate(c):
        if a:
            for j in range(k + 1):
                out[j] += a * comb(k, j) * (-h) ** (k - j)
    return _poly_trim(out)


class PiecewisePoly:
    """Piecewise polynomial in one real variable with rational breakpoints.

    pieces[0] lives on (-inf, b0), pieces[i] on [b_{i-1}, b_i), pieces[-1] on
    [b_last, inf). Each piece is an ascending coefficient tuple.
    """

    __slots__ = ("breakpoints", "pieces")

    def __init__(self, breakpoints: Iterable = (), pieces: Iterable | None = None):
        bps = tuple(_q(b) for b in breakpoints)
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise ValueError("breakpoints must be strictly increasing")
        if pieces is None:
            pieces = [()] * (len(bps) + 1)
        pcs = [_poly_trim(_q(a) for a in p) for p in pieces]
        if len(pcs) != len(bps) + 1:
            raise ValueError("need one piece per interval")
        # merge equal neighbours
        nb, npcs = [], [pcs[0]]
        for b, p in zip(bps, pcs[1:]):
            if p == npcs[-1]:
                continue
            nb.append(b)
            npcs.append(p)
        self.breakpoints = tuple(nb)
        self.pieces = tuple(npcs)

    @classmethod
    def polynomial(cls, coeffs: Iterable) -> "PiecewisePoly":
        return cls((), [tuple(coeffs)])

    @classmethod
    def hat(cls, center=0, halfwidth=1) -> "PiecewisePoly":
        """Triangular bump of unit integral supported on [c - w, c + w]."""
        c, w = _q(center), _q(halfwidth)
        h = 1 / w
        up = poly_shift((h, h / w), c)          # h (1 + (t-c)/w)
        down = poly_shift((h, -h / w), c)
        return cls((c - w, c, c + w), [(), up, down, ()])

    @classmethod
    def bspline(cls, degree: int, center=0, scale=1) -> "PiecewisePoly":
        """Centered cardinal B-spline of the given degree, unit integral.

        Degree d is C^{d-1}; it is built by repeated averaging of the box.
        """
        if degree < 0:
            raise ValueError("degree must be >= 0")
        half = Fraction(1, 2)
        b = cls((-half, half), [(), (1,), ()])
        for _ in range(degree):
            a = b.antiderivative()
            b = a.shift(-half) - a.shift(half)
        return b.rescale(_q(scale)).shift(_q(center))

    # -- structure
    def cells(self) -> List[Tuple]:
        return list(zip((None,) + self.breakpoints, self.breakpoints + (None,), self.pieces))

    def __call__(self, t) -> Fraction:
        t = _q(t)
        i = 0
        while i < len(self.breakpoints) and t >= self.breakpoints[i]:
            i += 1
        return poly_eval(self.pieces[i], t)

    @property
    def compactly_supported(self) -> bool:
        return not self.pieces[0] and not self.pieces[-1]

    def continuity_order(self) -> int:
        """Largest k with all derivatives of order <= k continuous, capped at 64; -1 if jumps."""
        f, k = self, -1
        while k < 64:
            for b, (p, r) in zip(f.breakpoints, zip(f.pieces, f.pieces[1:])):
                if poly_eval(p, b) != poly_eval(r, b):
                    return k
            k += 1
            if all(len(p) <= 1 for p in f.pieces):
                # derivative is identically zero on each piece
                return 64
            f = f._raw_derive()
        return k

    # -- algebra
    def _refined(self, bps) -> List[Tuple]:
        out, i = [], 0
        for j in range(len(bps) + 1):
            lo = bps[j - 1] if j else None
            while i < len(self.breakpoints) and lo is not None and self.breakpoints[i] <= lo:
                i += 1
            out.append(self.pieces[i])
        return out

    def _binary(self, other, op):
        bps = tuple(sorted(set(self.breakpoints) | set(other.breakpoints)))
        a, b = self._refined(bps), other._refined(bps)
        return PiecewisePoly(bps, [op(x, y) for x, y in zip(a, b)])

    def __add__(self, other):
        other = _as_pp(other)
        return self._binary(other, lambda x, y: _padd(x, y))

    __radd__ = __add__

    def __neg__(self):
        return PiecewisePoly(self.breakpoints, [tuple(-a for a in p) for p in self.pieces])

    def __sub__(self, other):
        return self + (-_as_pp(other))

    def __rsub__(self, other):
        return _as_pp(other) - self

    def __mul__(self, other):
        other = _as_pp(other)
        return self._binary(other, _pmul)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PiecewisePoly):
            try:
                other = _as_pp(other)
            except TypeError:
                return NotImplemented
        return self.breakpoints == other.breakpoints and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.breakpoints, self.pieces))

    def _raw_derive(self):
        return PiecewisePoly(self.breakpoints,
                             [tuple(k * a for k, a in enumerate(p))[1:] for p in self.pieces])

    def derive(self) -> "PiecewisePoly":
        if self.continuity_order() < 0:
            raise NotDifferentiable("derivative of a discontinuous piecewise polynomial")
        return self._raw_derive()

    def antiderivative(self) -> "PiecewisePoly":
        """t -> integral from -inf to t; requires compact support."""
        if not self.compactly_supported:
            raise UnsupportedIntegrand("integrand is not compactly supported")
        if not self.breakpoints:
            return PiecewisePoly()
        acc, pieces = Fraction(0), [()]
        for lo, hi, p in self.cells()[1:-1]:
            P = poly_antideriv(p)
            pieces.append(_padd(P, (acc - poly_eval(P, lo),)))
            acc += poly_eval(P, hi) - poly_eval(P, lo)
        pieces.append((acc,))
        return PiecewisePoly(self.breakpoints, pieces)

    def integral(self) -> Fraction:
        if not self.compactly_supported:
            raise UnsupportedIntegrand("integrand is not compactly supported")
        tot = Fraction(0)
        for lo, hi, p in self.cells()[1:-1]:
            P = poly_antideriv(p)
            tot += poly_eval(P, hi) - poly_eval(P, lo)
        return tot

    def shift(self, h) -> "PiecewisePoly":
        """t -> f(t - h)."""
        h = _q(h)
        return PiecewisePoly([b + h for b in self.breakpoints], [poly_shift(p, h) for p in self.pieces])

    def rescale(self, a) -> "PiecewisePoly":
        """t -> f(t / a) / a, which keeps the integral (a > 0)."""
        a = _q(a)
        if a <= 0:
            raise ValueError("scale must be positive")
        return PiecewisePoly([b * a for b in self.breakpoints],
                             [tuple(c / a ** (k + 1) for k, c in enumerate(p)) for p in self.pieces])

    def __repr__(self):
        return f"PiecewisePoly({list(map(str, self.breakpoints))}, {[list(map(str, p)) for p in self.pieces]})"


def _padd(x, y):
    n = max(len(x), len(y))
    return _poly_trim([(x[i] if i < len(x) else 0) + (y[i] if i < len(y) else 0) for i in range(n)])


def _pmul(x, y):
    if not x or not y:
        return ()
    out = [Fraction(0)] * (len(x) + len(y) - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                out[i + j] += a * b
    return _poly_trim(out)


def _as_pp(x) -> PiecewisePoly:
    if isinstance(x, PiecewisePoly):
        return x
    if isinstance(x, (int, Fraction)):
        return PiecewisePoly((), [(x,)])
    raise TypeError(f"cannot use {type(x).__name__} as a piecewise polynomial")


# ---------------------------------------------------------------------------
# refinement helpers for multivariate storage


def _cell_map(old: Tuple[Fraction, ...], new: Tuple[Fraction, ...]) -> List[List[int]]:
    """For each old cell, the list of new cells it contains (new refines old)."""
    out: List[List[int]] = [[] for _ in range(len(old) + 1)]
    i = 0
    for j in range(len(new) + 1):
        lo = new[j - 1] if j else None
        while i < len(old) and lo is not None and old[i] <= lo:
            i += 1
        out[i].append(j)
    return out


class SuperFunction:
    """Element of the exact coefficient ring. Immutable."""

    __slots__ = ("domain", "bps", "terms", "_hash", "_smooth")

    def __init__(self, domain: DomainSpec, terms: Mapping[Key, Fraction] | None = None,
                 bps: Sequence[Tuple[Fraction, ...]] | None = None, _normalized: bool = False):
        self.domain = domain
        if bps is None:
            bps = ((),) * domain.n_even
        self.bps = tuple(tuple(b) for b in bps)
        terms = {} if terms is None else terms
        if _normalized:
            self.terms = dict(terms)
        else:
            self.terms = {k: v for k, v in terms.items() if v}
            self._merge_breakpoints()
        self._hash = None
        self._smooth = 0  # bit i set: known continuous in even variable i

    def _known_smooth(self) -> int:
        bits = self._smooth
        for i, b in enumerate(self.bps):
            if not b:
                bits |= 1 << i
        return bits

    def _inherit(self, bits: int) -> "SuperFunction":
        self._smooth |= bits
        return self

    # -- construction
    @classmethod
    def zero(cls, dom: DomainSpec) -> "SuperFunction":
        return cls(dom, {}, _normalized=True)

    @classmethod
    def const(cls, dom: DomainSpec, c) -> "SuperFunction":
        c = _q(c)
        z = (0,) * dom.n_even
        return cls(dom, {(0, z, z): c} if c else {}, _normalized=True)

    @classmethod
    def monomial(cls, dom: DomainSpec, odd: Iterable[str] = (), powers: Mapping[str, int] | None = None,
                 coeff=1) -> "SuperFunction":
        """coeff * prod x^k * theta_{i1} ... theta_{ik} (odd factors in the given order)."""
        pw = [0] * dom.n_even
        for name, k in (powers or {}).items():
            par, i = dom.locate(name)
            if par:
                raise DomainError(f"{name} is odd")
            pw[i] += k
        mask, sign = 0, 1
        for name in odd:
            par, j = dom.locate(name)
            if not par:
                raise DomainError(f"{name} is even")
            s = odd_product(mask, 1 << j)
            if not s:
                return cls.zero(dom)
            sign *= s
            mask |= 1 << j
        c = _q(coeff) * sign
        z = (0,) * dom.n_even
        return cls(dom, {(mask, z, tuple(pw)): c} if c else {}, _normalized=True)

    @classmethod
    def coord(cls, dom: DomainSpec, name: str) -> "SuperFunction":
        par, _ = dom.locate(name)
        return cls.monomial(dom, odd=[name]) if par else cls.monomial(dom, powers={name: 1})

    @classmethod
    def from_piecewise(cls, dom: DomainSpec, name: str, f: PiecewisePoly) -> "SuperFunction":
        par, i = dom.locate(name)
        if par:
            raise DomainError(f"{name} is odd")
        bps = [()] * dom.n_even
        bps[i] = f.breakpoints
        terms = {}
        for cell, piece in enumerate(f.pieces):
            for k, a in enumerate(piece):
                if a:
                    cells = [0] * dom.n_even
                    cells[i] = cell
                    pw = [0] * dom.n_even
                    pw[i] = k
                    terms[(0, tuple(cells), tuple(pw))] = a
        out = cls(dom, terms, bps)
        return out._inherit(1 << i) if f.continuity_order() >= 0 else out

    # -- canonical form
    def _merge_breakpoints(self):
        for v in range(len(self.bps)):
            if not self.bps[v]:
                continue
            ncell = len(self.bps[v]) + 1
            content: List[Dict] = [dict() for _ in range(ncell)]
            for (mask, cells, pw), c in self.terms.items():
                rest = (mask, cells[:v] + cells[v + 1:], pw)
                content[cells[v]][rest] = c
            starts = [0]
            for j in range(1, ncell):
                if content[j] != content[j - 1]:
                    starts.append(j)
            if len(starts) == ncell:
                continue
            newb = tuple(self.bps[v][j - 1] for j in starts[1:])
            group = {}
            for gi, j in enumerate(starts):
                group[j] = gi
            terms = {}
            for (mask, cells, pw), c in self.terms.items():
                g = group.get(cells[v])
                if g is None:
                    continue
                terms[(mask, cells[:v] + (g,) + cells[v + 1:], pw)] = c
            self.terms = terms
            bps = list(self.bps)
            bps[v] = newb
            self.bps = tuple(bps)

    def refined(self, bps: Sequence[Tuple[Fraction, ...]]) -> Dict[Key, Fraction]:
        """Terms re-expressed on a finer breakpoint system."""
        if tuple(bps) == self.bps:
            return self.terms
        maps = [None if tuple(new) == old else _cell_map(old, tuple(new))
                for old, new in zip(self.bps, bps)]
        out: Dict[Key, Fraction] = {}
        for (mask, cells, pw), c in self.terms.items():
            options = [[cells[v]] if maps[v] is None else maps[v][cells[v]] for v in range(len(cells))]
            for nc in _product(options):
                out[(mask, nc, pw)] = c
        return out

    def _check(self, other: "SuperFunction"):
        if not isinstance(other, SuperFunction):
            raise TypeError("expected a SuperFunction")
        if other.domain != self.domain:
            raise DomainError("domain mismatch")

    def _common(self, other):
        if self.bps == other.bps:
            return self.bps, self.terms, other.terms
        bps = tuple(tuple(sorted(set(a) | set(b))) for a, b in zip(self.bps, other.bps))
        return bps, self.refined(bps), other.refined(bps)

    # -- ring operations
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SuperFunction.const(self.domain, other)
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        bps, a, b = self._common(other)
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + v
        # sums and products of continuous functions are continuous
        return SuperFunction(self.domain, out, bps)._inherit(self._known_smooth() & other._known_smooth())

    __radd__ = __add__

    def __neg__(self):
        return SuperFunction(self.domain, {k: -v for k, v in self.terms.items()}, self.bps,
                             _normalized=True)._inherit(self._smooth)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SuperFunction.const(self.domain, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SuperFunction":
        c = _q(c)
        if not c:
            return SuperFunction.zero(self.domain)
        return SuperFunction(self.domain, {k: v * c for k, v in self.terms.items()}, self.bps,
                             _normalized=True)._inherit(self._smooth)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return SuperFunction.zero(self.domain)
        bps, a, b = self._common(other)
        by_cells: Dict[Tuple[int, ...], List] = {}
        for (mask, cells, pw), c in b.items():
            by_cells.setdefault(cells, []).append((mask, pw, c))
        out: Dict[Key, Fraction] = {}
        for (m1, cells, p1), c1 in a.items():
            for m2, p2, c2 in by_cells.get(cells, ()):
                s = odd_product(m1, m2)
                if not s:
                    continue
                key = (m1 | m2, cells, tuple(x + y for x, y in zip(p1, p2)))
                out[key] = out.get(key, 0) + (c1 * c2 if s > 0 else -c1 * c2)
        return SuperFunction(self.domain, out, bps)._inherit(self._known_smooth() & other._known_smooth())

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = SuperFunction.const(self.domain, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- comparisons
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SuperFunction.const(self.domain, other)
        if not isinstance(other, SuperFunction):
            return NotImplemented
        if self.domain != other.domain:
            return False
        if self.bps == other.bps:
            return self.terms == other.terms
        return not (self - other).terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.domain, self.bps, frozenset(self.terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    # -- gradings
    def parity(self):
        """0 or 1 for homogeneous functions, None if inhomogeneous (zero counts as even)."""
        ps = {popcount(k[0]) & 1 for k in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def parts(self) -> Tuple["SuperFunction", "SuperFunction"]:
        """Even and odd components."""
        ev = {k: v for k, v in self.terms.items() if not popcount(k[0]) & 1}
        od = {k: v for k, v in self.terms.items() if popcount(k[0]) & 1}
        return (SuperFunction(self.domain, ev, self.bps), SuperFunction(self.domain, od, self.bps))

    def twist(self) -> "SuperFunction":
        """Grade involution f -> (-1)^{|f|} f, termwise."""
        return SuperFunction(self.domain, {k: (-v if popcount(k[0]) & 1 else v) for k, v in self.terms.items()},
                             self.bps, _normalized=True)

    def twist_if(self, flag) -> "SuperFunction":
        return self.twist() if flag & 1 else self

    # -- calculus
    def derive(self, name: str, fiber_only: bool = True) -> "SuperFunction":
        dom = self.domain
        par, i = dom.locate(name)
        if fiber_only and not dom.is_fiber(name):
            raise DomainError(f"{name} is a base coordinate; fiber calculus treats it as a constant")
        if par:
            bit = 1 << i
            below = bit - 1
            out = {}
            for (mask, cells, pw), c in self.terms.items():
                if mask & bit:
                    s = -1 if popcount(mask & below) & 1 else 1
                    out[(mask ^ bit, cells, pw)] = c * s
            return SuperFunction(dom, out, self.bps)._inherit(self._smooth)
        self._require_continuous(i)
        out = {}
        for (mask, cells, pw), c in self.terms.items():
            k = pw[i]
            if k:
                key = (mask, cells, pw[:i] + (k - 1,) + pw[i + 1:])
                out[key] = out.get(key, 0) + c * k
        # continuity in the other even variables survives d/dx_i
        return SuperFunction(dom, out, self.bps)._inherit(self._smooth & ~(1 << i))

    def _slices(self, i: int):
        """Group terms by everything except the variable i: rest -> cell -> poly dict."""
        groups: Dict[Tuple, Dict[int, Dict[int, Fraction]]] = {}
        for (mask, cells, pw), c in self.terms.items():
            rest = (mask, cells[:i] + cells[i + 1:], pw[:i] + pw[i + 1:])
            groups.setdefault(rest, {}).setdefault(cells[i], {})[pw[i]] = c
        return groups

    def _require_continuous(self, i: int):
        bps = self.bps[i]
        if not bps or self._smooth >> i & 1:
            return
        for rest, by_cell in self._slices(i).items():
            for j, b in enumerate(bps):
                left = by_cell.get(j, {})
                right = by_cell.get(j + 1, {})
                lv = sum((c * b ** k for k, c in left.items()), Fraction(0))
                rv = sum((c * b ** k for k, c in right.items()), Fraction(0))
                if lv != rv:
                    raise NotDifferentiable(f"coefficient jumps at {self.domain.even_names[i]} = {b}")
        self._smooth |= 1 << i

    def continuous_in(self, name: str) -> bool:
        par, i = self.domain.locate(name)
        try:
            self._require_continuous(i)
        except NotDifferentiable:
            return False
        return True

    def _compact_index(self, name: str) -> int:
        par, i = self.domain.locate(name)
        if par:
            raise DomainError(f"{name} is odd")
        last = len(self.bps[i])
        for (mask, cells, pw) in self.terms:
            if cells[i] == 0 or cells[i] == last:
                raise UnsupportedIntegrand(f"not compactly supported in {name}")
        return i

    def antiderivative_even(self, name: str) -> "SuperFunction":
        """g(t) = integral_{-inf}^t f dt, so that derive(g, t) = f."""
        i = self._compact_index(name)
        bps = self.bps[i]
        out: Dict[Key, Fraction] = {}
        for (mask, ocells, opw), by_cell in self._slices(i).items():
            acc = Fraction(0)
            for j in range(1, len(bps) + 1):
                lo = bps[j - 1]
                if j < len(bps):
                    hi = bps[j]
                    P = poly_antideriv([by_cell.get(j, {}).get(k, 0) for k in range(max(by_cell.get(j, {0: 0})) + 1)])
                    piece = _padd(P, (acc - poly_eval(P, lo),))
                    acc += poly_eval(P, hi) - poly_eval(P, lo)
                else:
                    piece = (acc,)
                for k, a in enumerate(piece):
                    if a:
                        key = (mask, ocells[:i] + (j,) + ocells[i:], opw[:i] + (k,) + opw[i:])
                        out[key] = out.get(key, 0) + a
        return SuperFunction(self.domain, out, self.bps)

    def total_integral_even(self, name: str) -> "SuperFunction":
        """Integrate t over R; the result lives on the domain with t deleted."""
        i = self._compact_index(name)
        bps = self.bps[i]
        target = self.domain.drop(name)
        out: Dict[Key, Fraction] = {}
        for (mask, ocells, opw), by_cell in self._slices(i).items():
            tot = Fraction(0)
            for j, poly in by_cell.items():
                P = poly_antideriv([poly.get(k, 0) for k in range(max(poly) + 1)])
                tot += poly_eval(P, bps[j]) - poly_eval(P, bps[j - 1])
            if tot:
                key = (mask, ocells, opw)
                out[key] = out.get(key, 0) + tot
        return SuperFunction(target, out, self.bps[:i] + self.bps[i + 1:])

    def evaluate_even(self, name: str, value) -> "SuperFunction":
        """Set an even variable to a rational number (value taken from the right cell)."""
        par, i = self.domain.locate(name)
        if par:
            raise DomainError(f"{name} is odd")
        value = _q(value)
        bps = self.bps[i]
        cell = sum(1 for b in bps if value >= b)
        target = self.domain.drop(name)
        out: Dict[Key, Fraction] = {}
        for (mask, cells, pw), c in self.terms.items():
            if cells[i] != cell:
                continue
            key = (mask, cells[:i] + cells[i + 1:], pw[:i] + pw[i + 1:])
            out[key] = out.get(key, 0) + c * value ** pw[i]
        return SuperFunction(target, out, self.bps[:i] + self.bps[i + 1:])

    def transfer(self, target: DomainSpec) -> "SuperFunction":
        """Re-express on another domain by matching coordinate labels.

        Coordinates missing from the target must not occur in the function.
        """
        src = self.domain
        if target == src:
            return self
        emap, omap = [], []
        for name in src.even_names:
            emap.append(target.locate(name)[1] if name in target._index and not target.locate(name)[0] else None)
        for name in src.odd_names:
            omap.append(target.locate(name)[1] if name in target._index and target.locate(name)[0] else None)
        bps = [()] * target.n_even
        for v, t in enumerate(emap):
            if t is not None:
                bps[t] = self.bps[v]
            elif self.bps[v]:
                raise DomainError(f"function depends on {src.even_names[v]}")
        out: Dict[Key, Fraction] = {}
        for (mask, cells, pw), c in self.terms.items():
            nmask, sign, j = 0, 1, 0
            mm = mask
            while mm:
                if mm & 1:
                    t = omap[j]
                    if t is None:
                        raise DomainError(f"function depends on {src.odd_names[j]}")
                    s = odd_product(nmask, 1 << t)
                    sign *= s
                    nmask |= 1 << t
                mm >>= 1
                j += 1
            ncells = [0] * target.n_even
            npw = [0] * target.n_even
            for v, t in enumerate(emap):
                if t is None:
                    if pw[v]:
                        raise DomainError(f"function depends on {src.even_names[v]}")
                    continue
                ncells[t] = cells[v]
                npw[t] = pw[v]
            key = (nmask, tuple(ncells), tuple(npw))
            out[key] = out.get(key, 0) + c * sign
        return SuperFunction(target, out, bps)

    def set_odd_zero(self, name: str) -> "SuperFunction":
        """Restrict to theta = 0 for one odd coordinate (the domain is kept)."""
        par, j = self.domain.locate(name)
        if not par:
            raise DomainError(f"{name} is even")
        bit = 1 << j
        return SuperFunction(self.domain, {k: v for k, v in self.terms.items() if not k[0] & bit}, self.bps)

    def depends_on(self, name: str) -> bool:
        par, i = self.domain.locate(name)
        if par:
            return any(k[0] >> i & 1 for k in self.terms)
        return bool(self.bps[i]) or any(k[2][i] for k in self.terms)

    def compactly_supported_in(self, name: str) -> bool:
        try:
            self._compact_index(name)
        except UnsupportedIntegrand:
            return False
        return True

    def odd_components(self) -> Dict[int, "SuperFunction"]:
        """mask -> purely even coefficient function (coefficient written left of the monomial)."""
        out: Dict[int, Dict[Key, Fraction]] = {}
        for (mask, cells, pw), c in self.terms.items():
            out.setdefault(mask, {})[(0, cells, pw)] = c
        return {m: SuperFunction(self.domain, t, self.bps)._inherit(self._smooth) for m, t in sorted(out.items())}

    # -- text
    def __str__(self):
        if not self.terms:
            return "0"
        dom = self.domain
        parts = []
        for (mask, cells, pw), c in sorted(self.terms.items()):
            fac = []
            for v, (cell, k) in enumerate(zip(cells, pw)):
                name = dom.even_names[v]
                if self.bps[v]:
                    b = self.bps[v]
                    lo = str(b[cell - 1]) if cell else "-inf"
                    hi = str(b[cell]) if cell < len(b) else "inf"
                    fac.append(f"1[{lo},{hi})({name})")
                if k:
                    fac.append(name if k == 1 else f"{name}^{k}")
            for j in range(dom.n_odd):
                if mask >> j & 1:
                    fac.append(dom.odd_names[j])
            parts.append(f"({c})" + ("·" + "·".join(fac) if fac else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"SuperFunction({self})"


def _product(options: List[List[int]]) -> Iterator[Tuple[int, ...]]:
    if not options:
        yield ()
        return
    head, *tail = options
    for rest in _product(tail):
        for h in head:
            yield (h,) + rest


# ---------------------------------------------------------------------------
# functional interface


def mul(f: SuperFunction, g: SuperFunction) -> SuperFunction:
    return f * g


def derive(f: SuperFunction, coord: str, fiber_only: bool = True) -> SuperFunction:
    return f.derive(coord, fiber_only)


def antiderivative_even(f: SuperFunction, coord: str) -> SuperFunction:
    return f.antiderivative_even(coord)


def total_integral_even(f: SuperFunction, coord: str) -> SuperFunction:
    return f.total_integral_even(coord)


def hat(dom: DomainSpec, name: str, center=0, halfwidth=1) -> SuperFunction:
    """The unit bump e(t): triangular, unit integral."""
    return SuperFunction.from_piecewise(dom, name, PiecewisePoly.hat(center, halfwidth))


def bump(dom: DomainSpec, name: str, degree: int = 3, center=0, scale=1) -> SuperFunction:
    return SuperFunction.from_piecewise(dom, name, PiecewisePoly.bspline(degree, center, scale))
