import random

from superforms import sampling as S
from superforms.scalar import DomainSpec

DOM = DomainSpec(3, 2, 0, 2)


def test_seeded_generators_are_reproducible():
    a = [str(S.form(DOM, random.Random(9))) for _ in range(2)]
    assert a[0] == a[1]
    assert str(S.integral_form(DOM, random.Random(4), compact=True)) == str(
        S.integral_form(DOM, random.Random(4), compact=True))


def test_requested_gradings():
    rng = random.Random(2)
    for _ in range(20):
        w = S.form(DOM, rng, degree=2, parity=1)
        assert not w or w.bidegree() == (2, 1)
        s = S.integral_form(DOM, rng, degree=1)
        assert not s or s.degree() == 1
        f = S.function(DOM, rng, parity=0)
        assert f.parity() == 0


def test_compact_samples_are_compact():
    rng = random.Random(3)
    f = S.function(DOM, rng, compact=True)
    assert all(f.compactly_supported_in(x) for x in DOM.fiber_even)
