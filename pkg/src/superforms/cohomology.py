"""Polynomial de Rham and Spencer cohomology of R^{m|n}, one weight sector at a time.

de Rham weight: #x + #theta + #dx + #dtheta, preserved by d.
Spencer weight: #x + #(d/dtheta) + (m - #(d/dx)) + (n - #theta), preserved by
delta. Every sector is finite dimensional, so the computation involves no
truncation: the Betti numbers over weights <= cap are the exact dimensions
of the polynomial cohomology restricted to those weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Tuple

from . import linalg
from .forms import Form
from .scalar import DomainSpec, SuperFunction
from .spencer import IntegralForm

DERHAM = "deRham"
SPENCER = "spencer"


@dataclass(frozen=True)
class SectorSpec:
    complex: str
    m: int
    n: int
    degree: int
    weight: int

    @property
    def domain(self) -> DomainSpec:
        return DomainSpec(self.m, self.n)

    def shifted(self, k: int) -> "SectorSpec":
        return SectorSpec(self.complex, self.m, self.n, self.degree + k, self.weight)


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _subsets(k: int, size: int) -> Iterator[int]:
    for combo in combinations(range(size), k):
        mask = 0
        for i in combo:
            mask |= 1 << i
        yield mask


def _popcount(x: int) -> int:
    return bin(x).count("1")


def basis(spec: SectorSpec) -> List:
    """Canonical monomial basis: list of (letter key, odd mask, even powers)."""
    m, n, k, w = spec.m, spec.n, spec.degree, spec.weight
    out = []
    if spec.complex == DERHAM:
        # dx^A dtheta^E with |A| + |E| = k, plus x^a theta^S, total weight w
        for na in range(min(k, m) + 1):
            ne = k - na
            if ne and not n:
                continue
            for A in _subsets(na, m):
                for E in _compositions(ne, n):
                    rest = w - k
                    if rest < 0:
                        continue
                    for ns in range(min(rest, n) + 1):
                        for S in _subsets(ns, n):
                            for P in _compositions(rest - ns, m):
                                out.append(((A, E), S, P))
    elif spec.complex == SPENCER:
        order = m - k
        if order < 0:
            return []
        for na in range(min(order, m) + 1):
            ne = order - na
            if ne and not n:
                continue
            for A in _subsets(na, m):
                for E in _compositions(ne, n):
                    for S_size in range(n + 1):
                        rest = w - ne - (m - na) - (n - S_size)
                        if rest < 0:
                            continue
                        for S in _subsets(S_size, n):
                            for P in _compositions(rest, m):
                                out.append(((A, E), S, P))
    else:
        raise ValueError(f"unknown complex {spec.complex!r}")
    return sorted(out)


def element(spec: SectorSpec, b) -> object:
    dom = spec.domain
    (A, E), S, P = b
    z = (0,) * dom.n_even
    f = SuperFunction(dom, {(S, z, P): Fraction(1)})
    cls = Form if spec.complex == DERHAM else IntegralForm
    return cls(dom, {(A, E): f})


def _apply(spec: SectorSpec, x):
    return x.d() if spec.complex == DERHAM else x.delta()


def coordinates(spec: SectorSpec, x) -> Dict[int, Fraction]:
    """Coordinates of x in the sector basis (x must lie in the sector)."""
    index = {b: i for i, b in enumerate(basis(spec))}
    out: Dict[int, Fraction] = {}
    for key, f in x.terms.items():
        for (S, cells, P), c in f.terms.items():
            out[index[(key, S, P)]] = c
    return out


def vector_to_element(spec: SectorSpec, vec: Dict[int, Fraction]):
    bs = basis(spec)
    cls = Form if spec.complex == DERHAM else IntegralForm
    out = cls.zero(spec.domain)
    for i, c in sorted(vec.items()):
        out = out + element(spec, bs[i]).scale(c)
    return out


def sector_matrix(spec: SectorSpec):
    """Matrix of the differential from the sector to the next degree: (shape, sparse entries)."""
    src = basis(spec)
    tgt_spec = spec.shifted(1)
    tgt = {b: i for i, b in enumerate(basis(tgt_spec))}
    entries: Dict[Tuple[int, int], Fraction] = {}
    for j, b in enumerate(src):
        img = _apply(spec, element(spec, b))
        for key, f in img.terms.items():
            for (S, cells, P), c in f.terms.items():
                entries[(tgt[(key, S, P)], j)] = c
    return (len(tgt), len(src)), entries


def _sector_data(spec: SectorSpec):
    shape_out, d_out = sector_matrix(spec)
    shape_in, d_in = sector_matrix(spec.shifted(-1))
    return shape_out, d_out, shape_in, d_in


def sector_betti(spec: SectorSpec) -> int:
    shape_out, d_out, shape_in, d_in = _sector_data(spec)
    dim = shape_out[1]
    return dim - linalg.rank(shape_out, d_out) - linalg.rank(shape_in, d_in)


def betti(complex: str, m: int, n: int, degree: int, weight_cap: int) -> int:
    """dim H^degree summed over weights 0..weight_cap."""
    return sum(sector_betti(SectorSpec(complex, m, n, degree, w)) for w in range(weight_cap + 1))


def degree_range(complex: str, m: int, n: int, weight_cap: int) -> range:
    if complex == DERHAM:
        return range(0, weight_cap + 1)
    return range(-weight_cap, m + 1)


def betti_table(complex: str, m: int, n: int, weight_cap: int) -> Dict[int, int]:
    return {k: betti(complex, m, n, k, weight_cap) for k in degree_range(complex, m, n, weight_cap)}


def sector_representatives(spec: SectorSpec) -> List:
    """Closed elements spanning a complement of the image inside the kernel."""
    shape_out, d_out, shape_in, d_in = _sector_data(spec)
    dim = shape_out[1]
    kernel = linalg.nullspace(shape_out, d_out)
    image = []
    for j in range(shape_in[1]):
        col = {i: v for (i, jj), v in d_in.items() if jj == j}
        if col:
            image.append(col)
    chosen: List[Dict[int, Fraction]] = []
    current = list(image)
    for v in kernel:
        if current and linalg.in_span(current, v, dim):
            continue
        chosen.append(v)
        current.append(v)
    return [vector_to_element(spec, v) for v in chosen]


def representatives(complex: str, m: int, n: int, degree: int, weight_cap: int) -> List:
    out = []
    for w in range(weight_cap + 1):
        out.extend(sector_representatives(SectorSpec(complex, m, n, degree, w)))
    return out


def is_exact_in_sector(spec: SectorSpec, x) -> bool:
    """Whether x (an element of the sector) is the differential of something in the previous degree."""
    shape_in, d_in = sector_matrix(spec.shifted(-1))
    kind, _ = linalg.solve(shape_in, d_in, coordinates(spec, x))
    return kind == "solution"
