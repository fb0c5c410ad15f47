"""Three dimensional N=1 super Poincare data: gamma matrices, the algebra and its
3-cocycle, flat Maurer-Cartan forms, picture changing operators, the Lagrangian
and its closure on the constrained locus.

Conventions (all certified by `GammaAlgebra.check` or by the tests):

* eta = diag(-1, +1, +1), indices 0, 1, 2 map to coordinates x1, x2, x3. Real
  2x2 matrices realize {g^I, g^J} = 2 eta^{IJ} only for this signature.
* g^0 = [[0, 1], [-1, 0]], g^1 = sigma_1, g^2 = -sigma_3, C = g^0, every C g^I symmetric.
* Majorana bilinear: bar(a) M b = -a^T C M b, the sign for which the flat
  coframe is torsion free with left-standing coefficients.
* Spinor indices are raised with eps^{ab} (eps^{12} = 1), numerically C.
* eps_{012} = 1; D psi = d psi + 1/4 omega^{IJ} g_IJ psi, so D^2 psi = 1/4 F^{IJ} g_IJ psi.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .berezin import canonical_Y, poincare_pair
from .forms import Form
from .gca import GCA, Derivation, Element
from .homotopy import odd_euler_primitive
from .liesuper import Cochain, LieSuperAlgebra, StringLike
from .scalar import DomainSpec, SuperFunction
from .spencer import IntegralForm, act

BETA = Fraction(-3, 32)
ETA = (-1, 1, 1)

Mat = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]


def mat(rows) -> Mat:
    return tuple(tuple(Fraction(v) for v in r) for r in rows)


def mmul(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def madd(a: Mat, b: Mat, c=1) -> Mat:
    return tuple(tuple(a[i][j] + c * b[i][j] for j in range(2)) for i in range(2))


def mscale(a: Mat, c) -> Mat:
    return tuple(tuple(c * a[i][j] for j in range(2)) for i in range(2))


def mT(a: Mat) -> Mat:
    return tuple(tuple(a[j][i] for j in range(2)) for i in range(2))


def minv(a: Mat) -> Mat:
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return mat([[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]])


ONE = mat([[1, 0], [0, 1]])
ZERO = mat([[0, 0], [0, 0]])


def eps3(i: int, j: int, k: int) -> int:
    if len({i, j, k}) < 3:
        return 0
    perm = [i, j, k]
    inv = sum(1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b])
    return -1 if inv & 1 else 1


@dataclass(frozen=True)
class GammaAlgebra:
    gammas: Tuple[Mat, Mat, Mat]
    C: Mat

    def up(self, I: int) -> Mat:
        return self.gammas[I]

    def low(self, I: int) -> Mat:
        return mscale(self.gammas[I], ETA[I])

    def up2(self, I: int, J: int) -> Mat:
        """g^{IJ} = 1/2 [g^I, g^J]."""
        a, b = self.gammas[I], self.gammas[J]
        return mscale(madd(mmul(a, b), mmul(b, a), -1), Fraction(1, 2))

    def low2(self, I: int, J: int) -> Mat:
        return mscale(self.up2(I, J), ETA[I] * ETA[J])

    def Cg(self, I: int) -> Mat:
        return mmul(self.C, self.up(I))

    def Cg_low(self, I: int) -> Mat:
        return mmul(self.C, self.low(I))

    def check(self) -> Dict[str, bool]:
        out = {}
        out["clifford"] = all(
            madd(mmul(self.up(I), self.up(J)), mmul(self.up(J), self.up(I)))
            == mscale(ONE, 2 * (ETA[I] if I == J else 0))
            for I in range(3) for J in range(3))
        out["C_gamma_symmetric"] = all(self.Cg(I) == mT(self.Cg(I)) for I in range(3))
        out["C_antisymmetric"] = self.C == mscale(mT(self.C), -1)
        out["gamma_IJ_traceless"] = all(self.up2(I, J)[0][0] + self.up2(I, J)[1][1] == 0
                                        for I in range(3) for J in range(3))
        out["C_gamma_C_inverse"] = all(mmul(mmul(self.C, self.up(I)), minv(self.C)) == mscale(mT(self.up(I)), -1)
                                       for I in range(3))
        out["three_psi"] = three_psi_defect(self) == {}
        return out


def standard_gammas() -> GammaAlgebra:
    eps = mat([[0, 1], [-1, 0]])
    s1 = mat([[0, 1], [1, 0]])
    s3 = mat([[1, 0], [0, -1]])
    return GammaAlgebra((eps, s1, mscale(s3, -1)), eps)


def three_psi_defect(gam: GammaAlgebra) -> Dict[Tuple[int, int, int, int], Fraction]:
    """Nonzero entries of sum_I (C g_I)_{(ab} (C g^I)_{c)d}, symmetrized over a, b, c."""
    bad = {}
    for a, b, c, d in itertools.product(range(2), repeat=4):
        tot = Fraction(0)
        for x, y, z in itertools.permutations((a, b, c)):
            for I in range(3):
                tot += gam.Cg_low(I)[x][y] * gam.Cg(I)[z][d]
        if tot:
            bad[(a, b, c, d)] = tot
    return bad


# ---------------------------------------------------------------------------
# the super Poincare algebra and its cocycle

P_LABELS = ("P0", "P1", "P2")
PAIRS = ((0, 1), (0, 2), (1, 2))
M_LABELS = tuple(f"M{i}{j}" for i, j in PAIRS)
Q_LABELS = ("Q1", "Q2")


def _decompose(target: Mat, basis: Sequence[Mat], entries: Sequence[Tuple[int, int]]) -> List[Fraction]:
    shape = (len(entries), len(basis))
    A = {(r, c): b[i][j] for c, b in enumerate(basis) for r, (i, j) in enumerate(entries) if b[i][j]}
    rhs = {r: target[i][j] for r, (i, j) in enumerate(entries) if target[i][j]}
    kind, sol = linalg.solve(shape, A, rhs)
    if kind != "solution":
        raise ValueError("matrix outside the span")
    coeffs = [sol.get(c, Fraction(0)) for c in range(len(basis))]
    recon = ZERO
    for c, b in zip(coeffs, basis):
        recon = madd(recon, b, c)
    if recon != target:
        raise ValueError("matrix outside the span")
    return coeffs


def build_iso12_1(gam: Optional[GammaAlgebra] = None) -> LieSuperAlgebra:
    """Brackets generated from the matrices.

    [M_IJ, Q_a] = 1/2 Q_b (g_IJ)^b_a, [P, Q] = 0, [Q_a, Q_b] = 1/2 (C g^I)_ab P_I.
    [M, P] and [M, M] are the unique brackets making the Q action a representation
    and [Q, Q] equivariant.
    """
    gam = gam or standard_gammas()
    if not all(gam.check().values()):
        raise ValueError("gamma invariants violated")
    br: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
    half = Fraction(1, 2)
    for (I, J), m in zip(PAIRS, M_LABELS):
        g = gam.low2(I, J)
        for a in range(2):
            out = {Q_LABELS[b]: half * g[b][a] for b in range(2) if g[b][a]}
            if out:
                br[(m, Q_LABELS[a])] = out
    for a in range(2):
        for b in range(a, 2):
            out = {P_LABELS[I]: half * gam.Cg(I)[a][b] for I in range(3) if gam.Cg(I)[a][b]}
            if out:
                br[(Q_LABELS[a], Q_LABELS[b])] = out
    sym_entries = ((0, 0), (0, 1), (1, 1))
    cg = [gam.Cg(K) for K in range(3)]
    spin = [mscale(gam.low2(I, J), half) for I, J in PAIRS]
    for (I, J), m, g in zip(PAIRS, M_LABELS, spin):
        gl = gam.low2(I, J)
        for L in range(3):
            S = mscale(madd(mmul(mT(gl), cg[L]), mmul(cg[L], gl)), half)
            coeffs = _decompose(S, cg, sym_entries)
            # sum_K (C g^K) a_{KL} = S_L  ->  [M, P_K] has a_{KL} on P_L
            for K, c in enumerate(coeffs):
                if c:
                    br.setdefault((m, P_LABELS[K]), {})
                    br[(m, P_LABELS[K])][P_LABELS[L]] = br[(m, P_LABELS[K])].get(P_LABELS[L], 0) + c
    all_entries = ((0, 0), (0, 1), (1, 0), (1, 1))
    for x in range(3):
        for y in range(x + 1, 3):
            comm = madd(mmul(spin[x], spin[y]), mmul(spin[y], spin[x]), -1)
            coeffs = _decompose(comm, spin, all_entries)
            out = {M_LABELS[z]: c for z, c in enumerate(coeffs) if c}
            if out:
                br[(M_LABELS[x], M_LABELS[y])] = out
    labels = P_LABELS + M_LABELS + Q_LABELS
    return LieSuperAlgebra(labels, [0] * 6 + [1, 1], br)


def mu_ce(g: LieSuperAlgebra, gam: Optional[GammaAlgebra] = None) -> Cochain:
    """mu(Q_a, Q_b, P_I) = 2 (C g_I)_ab, zero on the Lorentz generators."""
    gam = gam or standard_gammas()
    vals = {}
    for I in range(3):
        for a in range(2):
            for b in range(a, 2):
                c = 2 * gam.Cg_low(I)[a][b]
                if c:
                    vals[(g.index[P_LABELS[I]], g.index[Q_LABELS[a]], g.index[Q_LABELS[b]])] = c
    return Cochain.from_scalars(g, 3, vals)


def superstring(gam: Optional[GammaAlgebra] = None) -> StringLike:
    g = build_iso12_1(gam)
    return StringLike(g, mu_ce(g, gam), 2, ("B",))


# ---------------------------------------------------------------------------
# forms on R^{3|2}


def d3_domain(base_odd: int = 2) -> DomainSpec:
    return DomainSpec(3, 2, 0, base_odd)


def spinor_bar(gam: GammaAlgebra, M: Mat, a: Sequence, b: Sequence, zero):
    """bar(a) M b = -sum (C M)_{ab} a^a b^b for lists of forms / algebra elements."""
    CM = mmul(gam.C, M)
    out = zero
    for x in range(2):
        for y in range(2):
            if CM[x][y]:
                out = out - (a[x] * b[y]).scale(CM[x][y])
    return out


def spinor_apply(M: Mat, v: Sequence, zero) -> List:
    return [sum((v[b].scale(M[a][b]) for b in range(2) if M[a][b]), zero) for a in range(2)]


def flat_mc(dom: Optional[DomainSpec] = None, gam: Optional[GammaAlgebra] = None):
    """e^I = dx^I - 1/4 theta^a (C g^I)_ab dtheta^b, psi^a = dtheta^a."""
    dom = dom or d3_domain()
    gam = gam or standard_gammas()
    x, th = dom.fiber_even, dom.fiber_odd
    e = []
    for I in range(3):
        f = Form.differential(dom, x[I])
        cg = gam.Cg(I)
        for a in range(2):
            for b in range(2):
                if cg[a][b]:
                    f = f - Form.monomial(dom, dth=[th[b]], coeff=SuperFunction.coord(dom, th[a]).scale(cg[a][b] / 4))
        e.append(f)
    psi = [Form.differential(dom, t) for t in th]
    return e, psi


def cocycle_form(e, psi, gam: GammaAlgebra, weight=2) -> Form:
    """weight * bar(psi) g_I psi ^ e^I (weight 2 gives the image of mu)."""
    zero = Form.zero(e[0].domain)
    out = zero
    for I in range(3):
        out = out + (spinor_bar(gam, gam.low(I), psi, psi, zero) * e[I]).scale(weight)
    return out


@dataclass
class Curvature:
    F2: Dict[Tuple[int, int], Form]
    rho: List[Form]
    F1: List[Form]
    H: Form

    def is_zero(self) -> bool:
        return all(not v for v in self.F2.values()) and all(not v for v in self.rho) \
            and all(not v for v in self.F1) and not self.H


def _omega_full(omega: Dict[Tuple[int, int], Form], zero: Form):
    full = {}
    for I in range(3):
        for J in range(3):
            if I < J:
                full[(I, J)] = omega.get((I, J), zero)
            elif I > J:
                full[(I, J)] = -omega.get((J, I), zero)
            else:
                full[(I, J)] = zero
    return full


def _check_field(f: Form, deg: int, par: int, what: str):
    bd = f.bidegree()
    if f and bd != (deg, par):
        raise ValueError(f"{what} must have degree {deg} and parity {par}, got {bd}")


def covariant_psi(omega, psi, gam: GammaAlgebra) -> List[Form]:
    """D psi = d psi + 1/4 omega^{IJ} g_IJ psi (sum over ordered pairs)."""
    zero = Form.zero(psi[0].domain)
    om = _omega_full(omega, zero)
    out = [p.d() for p in psi]
    for I in range(3):
        for J in range(3):
            if I == J or not om[(I, J)]:
                continue
            gp = spinor_apply(gam.low2(I, J), psi, zero)
            out = [out[a] + (om[(I, J)] * gp[a]).scale(Fraction(1, 4)) for a in range(2)]
    return out


def covariant_e(omega, e) -> List[Form]:
    """D e^I = d e^I + omega^I_K e^K with omega^I_K = omega^{IL} eta_LK."""
    zero = Form.zero(e[0].domain)
    om = _omega_full(omega, zero)
    return [e[I].d() + sum(((om[(I, K)] * e[K]).scale(ETA[K]) for K in range(3)), zero) for I in range(3)]


def curvature(omega: Dict[Tuple[int, int], Form], e: Sequence[Form], psi: Sequence[Form], B: Form,
              gam: Optional[GammaAlgebra] = None) -> Curvature:
    """(F^{IJ}, rho, F^I, H) for spin connection omega^{IJ} (I < J), coframe, gravitino, B-field."""
    gam = gam or standard_gammas()
    zero = Form.zero(e[0].domain)
    for v in omega.values():
        _check_field(v, 1, 0, "spin connection")
    for v in e:
        _check_field(v, 1, 0, "coframe")
    for v in psi:
        _check_field(v, 1, 1, "gravitino")
    _check_field(B, 2, 0, "B-field")
    om = _omega_full(omega, zero)
    F2 = {}
    for I, J in PAIRS:
        F2[(I, J)] = om[(I, J)].d() + sum(((om[(I, K)] * om[(K, J)]).scale(ETA[K]) for K in range(3)), zero)
    rho = covariant_psi(omega, psi, gam)
    De = covariant_e(omega, e)
    F1 = [De[I] - spinor_bar(gam, gam.up(I), psi, psi, zero).scale(Fraction(1, 4)) for I in range(3)]
    H = B.d() - cocycle_form(e, psi, gam)
    return Curvature(F2, rho, F1, H)


def flat_B(e, psi, gam: Optional[GammaAlgebra] = None) -> Form:
    """A 2-form with dB equal to the cocycle form (exact on the superdomain)."""
    gam = gam or standard_gammas()
    omega = cocycle_form(e, psi, gam)
    body, B = odd_euler_primitive(omega)
    if body or B.d() != omega:
        raise AssertionError("cocycle form is not exact")
    return B


def e_cube(e) -> Form:
    """eps_{IJK} e^I e^J e^K."""
    zero = Form.zero(e[0].domain)
    return sum(((e[I] * e[J] * e[K]).scale(eps3(I, J, K)) for I, J, K in itertools.permutations(range(3))), zero)


def lagrangian_3d(omega, e, psi, B, f: SuperFunction, gam: Optional[GammaAlgebra] = None,
                  beta: Fraction = BETA) -> Form:
    """F^{IJ} e^K eps_IJK + bar(psi) D psi + beta (f H - 1/2 f^2 eps e e e)."""
    gam = gam or standard_gammas()
    zero = Form.zero(e[0].domain)
    cur = curvature(omega, e, psi, B, gam)
    full = {}
    for (I, J), v in cur.F2.items():
        full[(I, J)], full[(J, I)] = v, -v
    out = zero
    for I, J, K in itertools.permutations(range(3)):
        out = out + (full[(I, J)] * e[K]).scale(eps3(I, J, K))
    out = out + spinor_bar(gam, ONE, psi, cur.rho, zero)
    out = out + (cur.H.lmul(f) - e_cube(e).lmul(f * f).scale(Fraction(1, 2))).scale(beta)
    return out


# ---------------------------------------------------------------------------
# picture changing operators


def _kx(i: int, n: int):
    return (1 << i, (0,) * n)


def _kt(a: int, n: int):
    return (0, tuple(1 if j == a else 0 for j in range(n)))


def frame_fields(dom: DomainSpec, gam: GammaAlgebra):
    """Dual frame: e_I = d/dx^I, psi_a = d/dtheta^a + 1/4 (C g^I)_ab theta^b d/dx^I.

    Each vector field is a list of (polyvector key, coefficient)."""
    n = dom.n
    one = SuperFunction.const(dom, 1)
    e_vec = [[(_kx(I, n), one)] for I in range(3)]
    psi_vec = []
    for a in range(2):
        v = [(_kt(a, n), one)]
        for I in range(3):
            for b in range(2):
                c = gam.Cg(I)[a][b]
                if c:
                    v.append((_kx(I, n), SuperFunction.coord(dom, dom.fiber_odd[b]).scale(c / 4)))
        psi_vec.append(v)
    return e_vec, psi_vec


def _vec_mul(v, sigma: IntegralForm) -> IntegralForm:
    out = IntegralForm.zero(sigma.domain)
    for key, f in v:
        out = out + sigma.lmul_poly(key, f)
    return out


def omega_ce_polyvector(dom: Optional[DomainSpec] = None, gam: Optional[GammaAlgebra] = None) -> IntegralForm:
    """ber (x) sum (g^I)^{ab} psi_a psi_b e_I with (g^I)^{ab} = (g^I C)^{ab}."""
    dom = dom or d3_domain()
    gam = gam or standard_gammas()
    e_vec, psi_vec = frame_fields(dom, gam)
    out = IntegralForm.zero(dom)
    for I in range(3):
        M = mmul(gam.up(I), gam.C)
        base = _vec_mul(e_vec[I], IntegralForm.ber(dom))
        for a in range(2):
            for b in range(2):
                if M[a][b]:
                    out = out + _vec_mul(psi_vec[a], _vec_mul(psi_vec[b], base)).scale(M[a][b])
    return out


def y_susy(dom: Optional[DomainSpec] = None, gam: Optional[GammaAlgebra] = None) -> IntegralForm:
    """4/3 ber(E) (x) Omega_CE; ber(E) = ber in the flat chart (Ber of the frame matrix is 1)."""
    return omega_ce_polyvector(dom, gam).scale(Fraction(4, 3))


def y_can(dom: Optional[DomainSpec] = None) -> IntegralForm:
    return canonical_Y(dom or d3_domain())


def frame_pairing(omega: Form, sigma: IntegralForm) -> IntegralForm:
    """Component pairing <sigma|omega> = act(omega, sigma) / k! for a k-form omega."""
    k = omega.degree()
    if k is None:
        raise ValueError("need a form of a single degree")
    return act(omega, sigma).scale(Fraction(1, factorial(k)))


def _function_monomials(dom: DomainSpec, cap: int):
    out = []
    for total in range(cap + 1):
        for ns in range(min(total, dom.n) + 1):
            for S in itertools.combinations(range(dom.n), ns):
                mask = sum(1 << s for s in S)
                for P in itertools.product(range(total - ns + 1), repeat=dom.m):
                    if sum(P) == total - ns:
                        out.append((mask, P))
    return out


def pco_coboundary_solve(dom: Optional[DomainSpec] = None, gam: Optional[GammaAlgebra] = None,
                         poly_cap: int = 2):
    """alpha of degree -1 with delta(alpha) = Y_susy - Y_can, searched among
    fiber polynomial coefficients of degree <= poly_cap.

    Returns ("solution", alpha) or ("certificate", y)."""
    dom = dom or d3_domain()
    gam = gam or standard_gammas()
    target = y_susy(dom, gam) - y_can(dom)
    m, n = dom.m, dom.n
    keys = []
    for na in range(m + 1):
        ne = m + 1 - na
        for A in itertools.combinations(range(m), na):
            for E in itertools.product(range(ne + 1), repeat=n):
                if sum(E) == ne:
                    keys.append((sum(1 << a for a in A), E))
    monos = _function_monomials(dom, poly_cap)
    zero_cells = (0,) * dom.n_even
    basis = []
    for key in keys:
        for mask, P in monos:
            pw = tuple(P) + (0,) * (dom.n_even - m)
            f = SuperFunction(dom, {(mask, zero_cells, pw): Fraction(1)})
            basis.append(IntegralForm(dom, {key: f}))
    rows: Dict[Tuple, int] = {}

    def coords(sig: IntegralForm):
        out = {}
        for key, g in sig.terms.items():
            for (mask, cells, pw), c in g.terms.items():
                r = rows.setdefault((key, mask, pw), len(rows))
                out[r] = c
        return out

    rhs = coords(target)
    entries = {}
    for j, b in enumerate(basis):
        for i, c in coords(b.delta()).items():
            entries[(i, j)] = c
    kind, sol = linalg.solve((len(rows), len(basis)), entries, rhs)
    if kind != "solution":
        return kind, sol
    alpha = IntegralForm.zero(dom)
    for j, c in sorted(sol.items()):
        alpha = alpha + basis[j].scale(c)
    if alpha.delta() != target:
        raise AssertionError("internal error: coboundary solution does not reproduce the difference")
    return "solution", alpha


def omega_ce_self_pairing(dom: Optional[DomainSpec] = None, gam: Optional[GammaAlgebra] = None,
                          weight=1) -> IntegralForm:
    """<Omega_CE | weight * bar(psi) g_I psi e^I> on the flat background."""
    dom = dom or d3_domain()
    gam = gam or standard_gammas()
    e, psi = flat_mc(dom, gam)
    return frame_pairing(cocycle_form(e, psi, gam, weight), omega_ce_polyvector(dom, gam))


# ---------------------------------------------------------------------------
# the constrained Lagrangian on the flat background and its superspace pairing


def rheonomic_lagrangian(dom: DomainSpec, f: SuperFunction, rng: random.Random,
                         gam: Optional[GammaAlgebra] = None, beta: Fraction = BETA, max_pow: int = 1) -> Form:
    """L restricted to the constrained locus over the flat frame:

    F^{IJ} e^K eps_IJK + bar(psi) rho + beta/2 f^2 eps e e e with
    F^{IJ} = F^{IJ}_{KL} e^K e^L + Theta^{IJ}_{K a} psi^a e^K - beta f bar(psi) g^{IJ} psi and
    rho = 1/2 rho_IJ e^I e^J + 2 beta f g_I psi e^I. The component functions
    F^{IJ}_{KL}, Theta (odd), rho_IJ (odd) are seeded random polynomials.
    """
    from . import sampling

    gam = gam or standard_gammas()
    e, psi = flat_mc(dom, gam)
    zero = Form.zero(dom)

    def rnd(par):
        return sampling.function(dom, rng, nterms=2, max_pow=max_pow, parity=par, compact=False, base=False)

    F2 = {}
    for I, J in PAIRS:
        v = zero
        for K, L in PAIRS:
            v = v + (e[K] * e[L]).lmul(rnd(0))
        for K in range(3):
            for a in range(2):
                v = v + (psi[a] * e[K]).lmul(rnd(1))
        v = v - spinor_bar(gam, gam.up2(I, J), psi, psi, zero).lmul(f).scale(beta)
        F2[(I, J)], F2[(J, I)] = v, -v
    rho = [zero, zero]
    for I, J in PAIRS:
        comps = [rnd(1), rnd(1)]
        rho = [rho[a] + (e[I] * e[J]).lmul(comps[a]) for a in range(2)]
    for I in range(3):
        gp = spinor_apply(gam.low(I), psi, zero)
        rho = [rho[a] + (gp[a] * e[I]).lmul(f).scale(2 * beta) for a in range(2)]
    out = zero
    for I, J, K in itertools.permutations(range(3)):
        out = out + (F2[(I, J)] * e[K]).scale(eps3(I, J, K))
    out = out + spinor_bar(gam, ONE, psi, rho, zero)
    out = out + e_cube(e).lmul(f * f).scale(beta / 2)
    return out


def susy_action_reduce(dom: Optional[DomainSpec] = None, f: Optional[SuperFunction] = None,
                       seed: int = 0, gam: Optional[GammaAlgebra] = None) -> Tuple[IntegralForm, IntegralForm]:
    """(component pairing <Y_susy | L>, raw module action act(L, Y_susy)) on the flat constrained background."""
    dom = dom or d3_domain()
    gam = gam or standard_gammas()
    rng = random.Random(seed)
    if f is None:
        from . import sampling
        f = sampling.function(dom, rng, nterms=3, max_pow=2, parity=0, compact=False, base=False)
    L = rheonomic_lagrangian(dom, f, rng, gam)
    ys = y_susy(dom, gam)
    return frame_pairing(L, ys), act(L, ys)


# ---------------------------------------------------------------------------
# closure of the constrained Lagrangian in a free covariant algebra


class CovariantDGA:
    """Free graded-commutative algebra on e^I, psi^a, chi^a (= D psi), F^{IJ}, f, e_I(f), rho_IJ^a
    with the covariant differential D fixed by the constraint and Bianchi rules."""

    def __init__(self, gam: Optional[GammaAlgebra] = None, beta: Fraction = BETA, df_rule: bool = True):
        self.gam = gam or standard_gammas()
        self.beta = Fraction(beta)
        gens = [(f"e{I}", 1, 0) for I in range(3)]
        gens += [(f"psi{a+1}", 1, 1) for a in range(2)]
        gens += [(f"chi{a+1}", 2, 1) for a in range(2)]
        gens += [(f"F{I}{J}", 2, 0) for I, J in PAIRS]
        gens += [("f", 0, 0)] + [(f"ef{I}", 0, 0) for I in range(3)]
        gens += [(f"rho{I}{J}_{a+1}", 0, 1) for I, J in PAIRS for a in range(2)]
        self.alg = A = GCA(gens)
        self.zero = A.zero()
        self.e = [A.gen(f"e{I}") for I in range(3)]
        self.psi = [A.gen(f"psi{a+1}") for a in range(2)]
        self.chi = [A.gen(f"chi{a+1}") for a in range(2)]
        self.f = A.gen("f")
        self.ef = [A.gen(f"ef{I}") for I in range(3)]
        g = self.gam
        images = {}
        for I in range(3):
            images[f"e{I}"] = spinor_bar(g, g.up(I), self.psi, self.psi, self.zero).scale(Fraction(1, 4))
        for a in range(2):
            images[f"psi{a+1}"] = self.chi[a]
        d2psi = [self.zero, self.zero]
        for I in range(3):
            for J in range(3):
                if I == J:
                    continue
                gp = spinor_apply(g.low2(I, J), self.psi, self.zero)
                d2psi = [d2psi[a] + self.F(I, J) * gp[a] * Fraction(1, 4) for a in range(2)]
        for a in range(2):
            images[f"chi{a+1}"] = d2psi[a]
        if df_rule:
            df = sum((self.ef[I] * self.e[I] for I in range(3)), self.zero)
            for I in range(3):
                for J in range(3):
                    if I != J:
                        df = df - spinor_bar(g, g.up2(I, J), self.psi, self.rho(I, J), self.zero).scale(Fraction(1, 3))
            images["f"] = df
        self.D = Derivation(A, (1, 0), images)

    def F(self, I: int, J: int) -> Element:
        if I == J:
            return self.zero
        return self.alg.gen(f"F{I}{J}") if I < J else -self.alg.gen(f"F{J}{I}")

    def rho(self, I: int, J: int) -> List[Element]:
        if I == J:
            return [self.zero, self.zero]
        if I < J:
            return [self.alg.gen(f"rho{I}{J}_{a+1}") for a in range(2)]
        return [-self.alg.gen(f"rho{J}{I}_{a+1}") for a in range(2)]

    def e_cube(self) -> Element:
        return sum((self.e[I] * self.e[J] * self.e[K] * eps3(I, J, K)
                    for I, J, K in itertools.permutations(range(3))), self.zero)

    def lagrangian(self) -> Element:
        """F^{IJ} e^K eps_IJK + bar(psi) chi + beta/2 f^2 eps e e e."""
        out = self.zero
        for I, J, K in itertools.permutations(range(3)):
            out = out + self.F(I, J) * self.e[K] * eps3(I, J, K)
        out = out + spinor_bar(self.gam, ONE, self.psi, self.chi, self.zero)
        return out + self.f * self.f * self.e_cube() * (self.beta / 2)

    def chi_on_locus(self) -> Dict[str, Element]:
        """chi = 1/2 rho_IJ e^I e^J + 2 beta f g_I psi e^I."""
        out = [self.zero, self.zero]
        for I in range(3):
            for J in range(3):
                r = self.rho(I, J)
                out = [out[a] + r[a] * self.e[I] * self.e[J] * Fraction(1, 2) for a in range(2)]
        for I in range(3):
            gp = spinor_apply(self.gam.low(I), self.psi, self.zero)
            out = [out[a] + self.f * gp[a] * self.e[I] * (2 * self.beta) for a in range(2)]
        return {f"chi{a+1}": out[a] for a in range(2)}

    def closure_defect(self) -> Element:
        return self.D(self.lagrangian()).substitute(self.chi_on_locus())

    def flat_limit(self, x: Element) -> Element:
        zero = {nm: self.zero for nm in self.alg.names if nm.startswith(("F", "rho")) or nm == "f"}
        return x.substitute(zero)


def rheonomy_closure_check(df_rule: bool = True, beta: Fraction = BETA) -> Tuple[bool, Optional[str]]:
    defect = CovariantDGA(beta=beta, df_rule=df_rule).closure_defect()
    if defect:
        return False, str(defect)
    return True, None
