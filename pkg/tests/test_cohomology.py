import random

import pytest

from superforms import cohomology as H
from superforms.forms import Form
from superforms.scalar import DomainSpec, SuperFunction
from superforms.spencer import IntegralForm


@pytest.mark.parametrize("m,n", [(1, 0), (0, 1), (1, 1), (2, 1), (2, 2)])
@pytest.mark.parametrize("cx", [H.DERHAM, H.SPENCER])
def test_point_cohomology(m, n, cx):
    table = H.betti_table(cx, m, n, 4)
    assert table == {k: (1 if k == 0 else 0) for k in table}


def test_sector_matrices_square_to_zero():
    for cx in (H.DERHAM, H.SPENCER):
        for k in H.degree_range(cx, 2, 2, 4):
            for w in range(5):
                spec = H.SectorSpec(cx, 2, 2, k, w)
                s1, a = H.sector_matrix(spec)
                s2, b = H.sector_matrix(spec.shifted(1))
                from superforms.linalg import matmul
                assert matmul(s2, b, s1, a) == {}


def test_sector_dimensions():
    # weight 1 de Rham degree 1 on R^{1|1}: dx, dtheta
    assert len(H.basis(H.SectorSpec(H.DERHAM, 1, 1, 1, 1))) == 2
    # Spencer degree 0, weight 0 on R^{1|1}: only theta d/dx
    assert len(H.basis(H.SectorSpec(H.SPENCER, 1, 1, 0, 0))) == 1


def test_representatives():
    dom = DomainSpec(2, 2)
    (r,) = H.representatives(H.DERHAM, 2, 2, 0, 6)
    assert set(r.terms) == {(0, (0, 0))}
    (s,) = H.representatives(H.SPENCER, 2, 2, 0, 6)
    expected = IntegralForm.monomial(dom, dx=dom.fiber_even, coeff=SuperFunction.monomial(dom, odd=dom.fiber_odd))
    ratio = {c / expected.terms[k].terms[mono] for k, f in s.terms.items() for mono, c in f.terms.items()}
    assert len(ratio) == 1 and set(s.terms) == set(expected.terms)


def test_cap_stability():
    for cx in (H.DERHAM, H.SPENCER):
        lo, hi = H.betti_table(cx, 1, 2, 3), H.betti_table(cx, 1, 2, 5)
        assert all(hi[k] == v for k, v in lo.items())


def test_exactness_in_sector():
    dom = DomainSpec(1, 1)
    spec = H.SectorSpec(H.DERHAM, 1, 1, 1, 2)
    x = SuperFunction.coord(dom, "x1")
    exact = Form.function(x * x).d()
    assert H.is_exact_in_sector(spec, exact)
    assert H.coordinates(spec, exact)
