import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from superforms import sampling as S
from superforms.berezin import canonical_Y, poincare_pair
from superforms.d3sugra import (
    BETA,
    ETA,
    PAIRS,
    CovariantDGA,
    GammaAlgebra,
    covariant_psi,
    curvature,
    d3_domain,
    flat_B,
    flat_mc,
    frame_fields,
    lagrangian_3d,
    mscale,
    omega_ce_polyvector,
    omega_ce_self_pairing,
    pco_coboundary_solve,
    rheonomy_closure_check,
    spinor_apply,
    spinor_bar,
    standard_gammas,
    susy_action_reduce,
    three_psi_defect,
    y_can,
    y_susy,
)
from superforms.forms import Form
from superforms.scalar import SuperFunction
from superforms.spencer import IntegralForm, act
from superforms.suites import closed_compact_top

seeds = st.integers(0, 10 ** 6)


@pytest.fixture(scope="module")
def gam():
    return standard_gammas()


@pytest.fixture(scope="module")
def dom():
    return d3_domain()


def _sym(M):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in M])


def test_gamma_identities(gam):
    assert all(gam.check().values())
    assert three_psi_defect(gam) == {}


def test_clifford_against_sympy(gam):
    g = [_sym(m) for m in gam.gammas]
    C = _sym(gam.C)
    for I in range(3):
        for J in range(3):
            want = 2 * ETA[I] * sympy.eye(2) if I == J else sympy.zeros(2)
            assert g[I] * g[J] + g[J] * g[I] == want
        assert (C * g[I]).T == C * g[I]
    assert C.T == -C
    # gamma^0 gamma^1 gamma^2 is a multiple of the identity in three dimensions
    prod = g[0] * g[1] * g[2]
    assert prod == prod[0, 0] * sympy.eye(2) and prod[0, 0] != 0


def test_gamma_checks_catch_bad_matrices(gam):
    bad = GammaAlgebra((gam.gammas[0], mscale(gam.gammas[1], 2), gam.gammas[2]), gam.C)
    assert not bad.check()["clifford"]


def test_flat_coframe_torsion(dom, gam):
    e, psi = flat_mc(dom, gam)
    zero = Form.zero(dom)
    for I in range(3):
        assert e[I].d() == spinor_bar(gam, gam.up(I), psi, psi, zero).scale(Fraction(1, 4))
        assert e[I].bidegree() == (1, 0)


def test_flat_curvatures_vanish(dom, gam):
    e, psi = flat_mc(dom, gam)
    B = flat_B(e, psi, gam)
    omega = {p: Form.zero(dom) for p in PAIRS}
    assert curvature(omega, e, psi, B, gam).is_zero()


def test_perturbed_coframe_shows_up_in_torsion_only(dom, gam):
    e, psi = flat_mc(dom, gam)
    B = flat_B(e, psi, gam)
    omega = {p: Form.zero(dom) for p in PAIRS}
    e2 = list(e)
    e2[1] = e[1] + Form.monomial(dom, dx=["x2"], coeff=SuperFunction.coord(dom, "x1"))
    cur = curvature(omega, e2, psi, B, gam)
    assert cur.F1[1] == Form.monomial(dom, dx=["x1", "x2"])
    assert not cur.F1[0] and not cur.F1[2]
    assert all(not v for v in cur.F2.values()) and all(not v for v in cur.rho)
    assert cur.H  # the cocycle form sees the new coframe


def test_curvature_rejects_wrong_degrees(dom, gam):
    e, psi = flat_mc(dom, gam)
    with pytest.raises(ValueError):
        curvature({p: Form.zero(dom) for p in PAIRS}, e, e[:2], Form.zero(dom), gam)


@settings(max_examples=6)
@given(seeds)
def test_spin_connection_squares_to_curvature(seed):
    gam = standard_gammas()
    dom = d3_domain(0)
    rng = random.Random(seed)
    omega = {p: S.form(dom, rng, degree=1, nterms=2, parity=0) for p in PAIRS}
    psi = [S.form(dom, rng, degree=1, nterms=2, parity=1) for _ in range(2)]
    zero = Form.zero(dom)
    cur = curvature(omega, [Form.differential(dom, x) for x in dom.fiber_even], psi, zero, gam)
    lhs = covariant_psi(omega, covariant_psi(omega, psi, gam), gam)
    rhs = [zero, zero]
    for (I, J), F in cur.F2.items():
        gp = spinor_apply(gam.low2(I, J), psi, zero)
        rhs = [rhs[a] + (F * gp[a]).scale(Fraction(1, 2)) for a in range(2)]
    assert lhs == rhs


def test_dual_frame(dom, gam):
    e, psi = flat_mc(dom, gam)
    E, P = frame_fields(dom, gam)
    ber = IntegralForm.ber(dom)
    from superforms.d3sugra import _vec_mul
    for I in range(3):
        for J in range(3):
            assert act(e[I], _vec_mul(E[J], ber)) == ber.scale(1 if I == J else 0)
        for a in range(2):
            assert act(e[I], _vec_mul(P[a], ber)).is_zero()
    for a in range(2):
        for b in range(2):
            assert act(psi[a], _vec_mul(P[b], ber)) == ber.scale(1 if a == b else 0)


def test_cocycle_self_pairing(dom, gam):
    assert omega_ce_self_pairing(dom, gam, weight=1) == IntegralForm.ber(dom, 2)
    assert omega_ce_self_pairing(dom, gam, weight=2) == IntegralForm.ber(dom, 4)


def test_susy_pco_is_closed_with_canonical_top(gam):
    dom = d3_domain(0)
    ys, yc = y_susy(dom, gam), y_can(dom)
    assert ys.delta().is_zero() and ys.degree() == 0
    top = (7, (0, 0))
    assert ys.terms[top] == yc.terms[top]
    assert yc == canonical_Y(dom)
    assert ys == omega_ce_polyvector(dom, gam).scale(Fraction(4, 3))


def test_omega_ce_frozen(gam):
    # regression value, checked by hand against the dual frame expansion
    dom = d3_domain(0)
    om = omega_ce_polyvector(dom, gam)
    assert om.terms[(7, (0, 0))] == SuperFunction.monomial(dom, odd=["th1", "th2"], coeff=Fraction(-3, 4))
    assert om.terms[(4, (1, 1))] == SuperFunction.const(dom, -2)
    assert om.terms[(1, (2, 0))] == SuperFunction.const(dom, -1)


def test_pco_difference_is_exact(dom, gam):
    kind, alpha = pco_coboundary_solve(dom, gam)
    assert kind == "solution"
    assert alpha.delta() == y_susy(dom, gam) - y_can(dom)
    kind, _ = pco_coboundary_solve(dom, gam, poly_cap=0)
    assert kind == "certificate"


@pytest.fixture(scope="module")
def alpha(dom, gam):
    return pco_coboundary_solve(dom, gam)[1]


@settings(max_examples=4)
@given(seeds)
def test_pco_independence_on_closed_forms(seed):
    dom, gam = d3_domain(), standard_gammas()
    L = closed_compact_top(dom, random.Random(seed), nterms=1)
    assert L.d().is_zero()
    assert poincare_pair(L, y_susy(dom, gam)) == poincare_pair(L, y_can(dom))


def test_pco_difference_on_open_forms(dom, gam, alpha):
    rng = random.Random(11)
    ys, yc = y_susy(dom, gam), y_can(dom)
    separated = 0
    for _ in range(6):
        L = S.form(dom, rng, degree=3, compact=True, nterms=3)
        a, b = poincare_pair(L, ys), poincare_pair(L, yc)
        assert a - b == poincare_pair(L.d(), alpha)
        separated += a != b
    assert separated


@settings(max_examples=5)
@given(seeds)
def test_superspace_reduction(seed):
    dom = d3_domain()
    rng = random.Random(seed)
    f = S.function(dom, rng, nterms=3, max_pow=2, parity=0, base=False)
    normalized, raw = susy_action_reduce(dom, f, seed=seed)
    assert normalized == IntegralForm.ber(dom, -f)
    assert raw == IntegralForm.ber(dom, -f).scale(6)


def test_flat_lagrangian_is_a_three_form(dom, gam):
    e, psi = flat_mc(dom, gam)
    B = flat_B(e, psi, gam)
    f = SuperFunction.const(dom, 2)
    L = lagrangian_3d({p: Form.zero(dom) for p in PAIRS}, e, psi, B, f, gam)
    assert L.bidegree() == (3, 0)


def test_closure_on_the_constraint_locus():
    assert rheonomy_closure_check() == (True, None)
    assert BETA == Fraction(-3, 32)


def test_closure_negative_control():
    ok, witness = rheonomy_closure_check(df_rule=False)
    assert not ok and witness


@pytest.mark.parametrize("beta", [Fraction(-1, 8), Fraction(3, 32), Fraction(1)])
def test_closure_selects_beta(beta):
    assert not rheonomy_closure_check(beta=beta)[0]


def test_covariant_algebra_flat_limit():
    X = CovariantDGA()
    # in the flat limit D e = 1/4 bar(psi) g psi and D psi = 0
    for I in range(3):
        assert X.flat_limit(X.D(X.e[I])) == spinor_bar(X.gam, X.gam.up(I), X.psi, X.psi, X.zero).scale(Fraction(1, 4))
