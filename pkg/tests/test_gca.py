import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superforms.gca import GCA, Derivation, random_element

ALG = GCA([("a", 1, 0), ("b", 1, 1), ("c", 2, 0), ("p", 0, 1), ("u", 2, 1)])
seeds = st.integers(0, 10 ** 6)


def test_signs_and_nilpotency():
    a, b, c, p, u = ALG.gens("a", "b", "c", "p", "u")
    assert (a * a).is_zero()          # degree 1, even parity: anticommuting
    assert not (b * b).is_zero()      # degree 1, odd parity: commuting
    assert (p * p).is_zero()
    assert (u * u).is_zero()
    assert a * b == -(b * a)
    assert a * p == p * a
    assert b * p == -(p * b)
    assert c * a == a * c


@given(seeds)
def test_associative_and_graded_commutative(seed):
    rng = random.Random(seed)
    x, y, z = (random_element(ALG, rng) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    xh = random_element(ALG, rng, bidegree=(2, 1))
    yh = random_element(ALG, rng, bidegree=(1, 1))
    assert xh * yh == (yh * xh).scale((-1) ** (2 * 1 + 1 * 1))


def test_derivation_leibniz_and_square():
    d = Derivation(ALG, (1, 0), {"a": ALG.gen("c"), "p": ALG.gen("b")})
    rng = random.Random(1)
    for _ in range(20):
        x = random_element(ALG, rng, bidegree=(1, 1))
        y = random_element(ALG, rng)
        assert d(x * y) == d(x) * y + (x * d(y)).scale(-1)
    assert d.square_on_generators() == {}
    bad = Derivation(ALG, (1, 0), {"a": ALG.gen("c"), "c": ALG.gen("u")})
    assert "a" in bad.square_on_generators()


def test_substitute_is_a_morphism():
    a, b, c = ALG.gens("a", "b", "c")
    x = a * b + c
    img = x.substitute({"c": b * b})
    assert img == a * b + b * b


def test_duplicate_names_rejected():
    with pytest.raises(ValueError):
        GCA([("a", 0, 0), ("a", 1, 0)])


def test_bidegree_and_text():
    a, b = ALG.gens("a", "b")
    assert (a * b).bidegree() == (2, 1)
    assert (a + ALG.one()).bidegree() is None
    assert str((a * b).scale(Fraction(1, 2))) == "(1/2)·a·b"
