"""Exact rational linear algebra on sparse matrices.

Thin layer over sympy's DomainMatrix over QQ. Matrices are passed around as
(shape, {(row, col): Fraction}) so callers never see sympy types.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Sparse = Dict[Tuple[int, int], Fraction]


def _dm(shape: Tuple[int, int], entries: Sparse) -> DomainMatrix:
    rows: Dict[int, Dict[int, object]] = {}
    for (i, j), v in entries.items():
        if v:
            v = Fraction(v)
            rows.setdefault(i, {})[j] = QQ(v.numerator, v.denominator)
    return DomainMatrix(rows, shape, QQ)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _rows(dm: DomainMatrix) -> List[Dict[int, Fraction]]:
    out: List[Dict[int, Fraction]] = [dict() for _ in range(dm.shape[0])]
    for (i, j), v in dm.to_dok().items():
        if v:
            out[i][j] = _frac(v)
    return out


def rank(shape: Tuple[int, int], entries: Sparse) -> int:
    if not shape[0] or not shape[1]:
        return 0
    return _dm(shape, entries).rank()


def nullspace(shape: Tuple[int, int], entries: Sparse) -> List[Dict[int, Fraction]]:
    """Basis of {v : A v = 0} as sparse vectors indexed by column."""
    r, c = shape
    if not c:
        return []
    if not r:
        return [{j: Fraction(1)} for j in range(c)]
    return [v for v in _rows(_dm(shape, entries).nullspace()) if v]


def matmul(a_shape, a: Sparse, b_shape, b: Sparse) -> Sparse:
    if a_shape[1] != b_shape[0]:
        raise ValueError("shape mismatch")
    by_row: Dict[int, Dict[int, Fraction]] = {}
    for (k, j), v in b.items():
        by_row.setdefault(k, {})[j] = v
    out: Sparse = {}
    for (i, k), v in a.items():
        for j, w in by_row.get(k, {}).items():
            out[(i, j)] = out.get((i, j), 0) + v * w
    return {k: v for k, v in out.items() if v}


def solve(shape: Tuple[int, int], entries: Sparse, rhs: Dict[int, Fraction]):
    """Solve A x = b exactly.

    Returns ("solution", x) or ("certificate", y) where y A = 0 and y . b != 0.
    """
    r, c = shape
    b = {i: Fraction(v) for i, v in rhs.items() if v}
    if not b:
        return "solution", {}
    aug = dict(entries)
    for i, v in b.items():
        aug[(i, c)] = v
    rref, pivots = _dm((r, c + 1), aug).rref()
    if c in pivots:
        # inconsistent: a vector in the left kernel of A that sees b
        left = nullspace((c, r), {(j, i): v for (i, j), v in entries.items()})
        for y in left:
            if sum(y.get(i, 0) * v for i, v in b.items()):
                return "certificate", y
        raise AssertionError("inconsistent system without a certificate")
    rows = _rows(rref)
    x: Dict[int, Fraction] = {}
    for row_i, p in enumerate(pivots):
        val = rows[row_i].get(c, Fraction(0))
        if val:
            x[p] = val
    return "solution", x


def check_certificate(shape, entries: Sparse, rhs: Dict[int, Fraction], y: Dict[int, Fraction]) -> bool:
    r, c = shape
    acc: Dict[int, Fraction] = {}
    for (i, j), v in entries.items():
        if i in y:
            acc[j] = acc.get(j, 0) + y[i] * v
    return not any(acc.values()) and sum(y.get(i, 0) * v for i, v in rhs.items()) != 0


def in_span(vectors: Sequence[Dict[int, Fraction]], v: Dict[int, Fraction], dim: int) -> bool:
    """Whether v is a combination of the given vectors."""
    entries = {(i, j): x for j, vec in enumerate(vectors) for i, x in vec.items()}
    kind, _ = solve((dim, len(vectors)), entries, v)
    return kind == "solution"
