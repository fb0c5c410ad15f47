"""Free bigraded-commutative algebras with rational coefficients.

Generators carry (degree, parity); swapping a and b costs
(-1)^{deg a deg b + par a par b}. A generator with deg + par odd squares to
zero, the others are polynomial. Elements are dictionaries from exponent
tuples (generator order) to Fractions. Derivations are given by their values on
generators and extended by the graded Leibniz rule.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Mono = Tuple[int, ...]


class GCA:
    def __init__(self, generators: Sequence[Tuple[str, int, int]]):
        names = [g[0] for g in generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        self.names = tuple(names)
        self.degs = tuple(g[1] for g in generators)
        self.pars = tuple(g[2] & 1 for g in generators)
        self.index = {nm: i for i, nm in enumerate(names)}
        self.nilpotent = tuple((d + p) & 1 for d, p in zip(self.degs, self.pars))
        n = len(names)
        # swap[i][j] = 1 if generators i, j anticommute
        self.swap = [[(self.degs[i] * self.degs[j] + self.pars[i] * self.pars[j]) & 1 for j in range(n)]
                     for i in range(n)]
        self._cache: Dict[Tuple[Mono, Mono], Tuple[int, Optional[Mono]]] = {}

    def __len__(self):
        return len(self.names)

    # -- elements
    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {(0,) * len(self): Fraction(1)})

    def const(self, c) -> "Element":
        return self.one().scale(c)

    def gen(self, name: str) -> "Element":
        i = self.index[name]
        mono = tuple(1 if j == i else 0 for j in range(len(self)))
        return Element(self, {mono: Fraction(1)})

    def gens(self, *names: str) -> List["Element"]:
        return [self.gen(nm) for nm in names]

    def mono_bidegree(self, mono: Mono) -> Tuple[int, int]:
        return (sum(e * d for e, d in zip(mono, self.degs)), sum(e * p for e, p in zip(mono, self.pars)) & 1)

    def mono_mul(self, a: Mono, b: Mono) -> Tuple[int, Optional[Mono]]:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        n = len(a)
        out = []
        for i in range(n):
            e = a[i] + b[i]
            if e > 1 and self.nilpotent[i]:
                self._cache[key] = (0, None)
                return 0, None
            out.append(e)
        # move b's generators left past a's later generators
        flips = 0
        for j in range(n):
            if not b[j]:
                continue
            for i in range(j + 1, n):
                if a[i] and self.swap[i][j]:
                    flips += a[i] * b[j]
        res = (-1 if flips & 1 else 1, tuple(out))
        self._cache[key] = res
        return res


class Element:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: GCA, terms: Mapping[Mono, Fraction]):
        self.alg = alg
        self.terms = {k: Fraction(v) for k, v in terms.items() if v}

    def _chk(self, other):
        if not isinstance(other, Element) or other.alg is not self.alg:
            raise TypeError("elements of different algebras")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.alg.const(other)
        self._chk(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Element(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Element":
        c = Fraction(c)
        return Element(self.alg, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._chk(other)
        out: Dict[Mono, Fraction] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                s, m = self.alg.mono_mul(a, b)
                if s:
                    out[m] = out.get(m, 0) + s * x * y
        return Element(self.alg, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.alg.const(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def bidegree(self) -> Optional[Tuple[int, int]]:
        bd = {self.alg.mono_bidegree(m) for m in self.terms}
        if not bd:
            return (0, 0)
        return bd.pop() if len(bd) == 1 else None

    def factors(self, mono: Mono) -> List[int]:
        """Generator indices of a monomial in normal order, with repetition."""
        out = []
        for i, e in enumerate(mono):
            out.extend([i] * e)
        return out

    def substitute(self, images: Mapping[str, "Element"]) -> "Element":
        """Algebra morphism sending listed generators to images (others fixed)."""
        alg = self.alg
        imgs = [images.get(nm) for nm in alg.names]
        out = alg.zero()
        for mono, c in self.terms.items():
            acc = alg.const(c)
            for i in self.factors(mono):
                acc = acc * (imgs[i] if imgs[i] is not None else _gen_i(alg, i))
            out = out + acc
        return out

    def restrict(self, keep: Callable[[Mono], bool]) -> "Element":
        return Element(self.alg, {k: v for k, v in self.terms.items() if keep(k)})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items(), reverse=True):
            fac = []
            for i, e in enumerate(mono):
                if e:
                    fac.append(self.alg.names[i] if e == 1 else f"{self.alg.names[i]}^{e}")
            parts.append(f"({c})" + ("·" + "·".join(fac) if fac else ""))
        return " + ".join(parts)

    __repr__ = __str__


def _gen_i(alg: GCA, i: int) -> Element:
    return Element(alg, {tuple(1 if j == i else 0 for j in range(len(alg))): Fraction(1)})


class Derivation:
    """Graded derivation of bidegree (degree, parity) given on generators.

    Generators without an image are sent to zero.
    """

    def __init__(self, alg: GCA, bidegree: Tuple[int, int], images: Mapping[str, Element]):
        self.alg = alg
        self.deg, self.par = bidegree[0], bidegree[1] & 1
        self.images = {alg.index[k]: v for k, v in images.items()}
        self._mono_cache: Dict[Mono, Element] = {}

    def on_mono(self, mono: Mono) -> Element:
        hit = self._mono_cache.get(mono)
        if hit is not None:
            return hit
        alg = self.alg
        facs = []
        for i, e in enumerate(mono):
            facs.extend([i] * e)
        out = alg.zero()
        prefix = alg.one()
        pdeg = ppar = 0
        for pos, i in enumerate(facs):
            img = self.images.get(i)
            if img is not None and img:
                suffix = alg.one()
                for j in facs[pos + 1:]:
                    suffix = suffix * _gen_i(alg, j)
                sign = -1 if (self.deg * pdeg + self.par * ppar) & 1 else 1
                out = out + (prefix * img * suffix).scale(sign)
            prefix = prefix * _gen_i(alg, i)
            pdeg += alg.degs[i]
            ppar += alg.pars[i]
        self._mono_cache[mono] = out
        return out

    def __call__(self, x: Element) -> Element:
        if x.alg is not self.alg:
            raise TypeError("element of another algebra")
        out: Dict[Mono, Fraction] = {}
        for mono, c in x.terms.items():
            for m2, c2 in self.on_mono(mono).terms.items():
                out[m2] = out.get(m2, 0) + c * c2
        return Element(self.alg, out)

    def square_on_generators(self) -> Dict[str, Element]:
        """Nonzero values of D(D(g)) on generators."""
        bad = {}
        for i, nm in enumerate(self.alg.names):
            img = self.images.get(i)
            if img is None:
                continue
            sq = self(img)
            if sq:
                bad[nm] = sq
        return bad


def random_element(alg: GCA, rng, nterms: int = 4, max_len: int = 4, names: Optional[Sequence[str]] = None,
                   bidegree: Optional[Tuple[int, int]] = None) -> Element:
    """Random combination of short monomials; bidegree filter optional."""
    pool = [alg.index[nm] for nm in (names or alg.names)]
    out = alg.zero()
    tries = 0
    while len(out.terms) < nterms and tries < 50 * nterms:
        tries += 1
        mono = [0] * len(alg)
        for _ in range(rng.randint(0, max_len)):
            i = rng.choice(pool)
            mono[i] += 1
        mono = tuple(mono)
        if any(e > 1 and alg.nilpotent[i] for i, e in enumerate(mono)):
            continue
        if bidegree is not None and alg.mono_bidegree(mono) != (bidegree[0], bidegree[1] & 1):
            continue
        c = Fraction(rng.randint(-4, 4) or 1, rng.randint(1, 3))
        out = out + Element(alg, {mono: c})
    return out
