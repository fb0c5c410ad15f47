import random
from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from superforms import linalg

seeds = st.integers(0, 10 ** 6)


def _random_sparse(rng, r, c, density=0.4):
    return {(i, j): Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            for i in range(r) for j in range(c) if rng.random() < density and rng.randint(-3, 3)}


def _dense(shape, entries):
    M = sympy.zeros(*shape)
    for (i, j), v in entries.items():
        M[i, j] = sympy.Rational(v.numerator, v.denominator)
    return M


@given(seeds)
def test_rank_and_nullspace_match_sympy(seed):
    rng = random.Random(seed)
    shape = (rng.randint(1, 6), rng.randint(1, 6))
    A = {k: v for k, v in _random_sparse(rng, *shape).items() if v}
    assert linalg.rank(shape, A) == _dense(shape, A).rank()
    ns = linalg.nullspace(shape, A)
    assert len(ns) == shape[1] - linalg.rank(shape, A)
    for v in ns:
        assert all(sum(A.get((i, j), 0) * x for j, x in v.items()) == 0 for i in range(shape[0]))


@given(seeds)
def test_solve_or_certificate(seed):
    rng = random.Random(seed)
    shape = (rng.randint(1, 6), rng.randint(1, 5))
    A = {k: v for k, v in _random_sparse(rng, *shape).items() if v}
    b = {i: Fraction(rng.randint(-2, 2)) for i in range(shape[0])}
    kind, x = linalg.solve(shape, A, b)
    if kind == "solution":
        for i in range(shape[0]):
            assert sum(A.get((i, j), 0) * v for j, v in x.items()) == b.get(i, 0)
    else:
        assert linalg.check_certificate(shape, A, b, x)


def test_matmul_and_span():
    A = {(0, 0): Fraction(1), (0, 1): Fraction(2)}
    B = {(0, 0): Fraction(3), (1, 0): Fraction(4)}
    assert linalg.matmul((1, 2), A, (2, 1), B) == {(0, 0): Fraction(11)}
    assert linalg.in_span([{0: Fraction(1), 1: Fraction(1)}], {0: Fraction(2), 1: Fraction(2)}, 2)
    assert not linalg.in_span([{0: Fraction(1)}], {1: Fraction(1)}, 2)
    assert linalg.nullspace((0, 2), {}) == [{0: 1}, {1: 1}]
