"""Named verification suites.

Every check is a function (seed, options) -> Result. A check never raises on a
mathematical failure: it returns status FAIL with a witness string. All
randomness comes from random.Random(seed) streams local to the check, so a
report depends only on the seed and the options.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import cohomology, d3sugra, liesuper, linalg
from . import sampling as S
from .berezin import canonical_Y, even_embedding, even_pullback_integral, fiber_berezin, poincare_pair, underlying_domain
from .forms import Form
from .gca import random_element
from .homotopy import even_identity_sides, find_primitive, odd_identity_sides
from .scalar import DomainSpec, SuperFunction
from .spencer import IntegralForm, act

PASS = "PASS"
FAIL = "FAIL"


@dataclass
class Options:
    weight_cap: int = 6
    poly_cap: int = 2
    df_rule: bool = True
    scale: Fraction = Fraction(1)  # multiplies sample counts

    def count(self, n: int) -> int:
        return max(1, int(n * self.scale))


@dataclass
class Result:
    id: str
    anchor: str
    status: str
    witness: Optional[str] = None
    detail: Dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == PASS


def _res(cid: str, anchor: str, witness: Optional[str], **detail) -> Result:
    return Result(cid, anchor, PASS if witness is None else FAIL, witness, {k: str(v) for k, v in detail.items()})


def _rng(seed: int, salt: str) -> random.Random:
    return random.Random(f"{seed}:{salt}")


def relative_domain() -> DomainSpec:
    """R^{3|2} over R^{0|2}."""
    return DomainSpec(3, 2, 0, 2)


# ---------------------------------------------------------------------------
# core


def check_nilpotency(seed: int, opt: Options) -> Result:
    dom = relative_domain()
    rng = _rng(seed, "nil")
    n = opt.count(200)
    for i in range(n):
        w = S.form(dom, rng)
        if w.d().d():
            return _res("nilpotency", "complexes.d-squared", f"d(d w) != 0 for w = {w}")
        s = S.integral_form(dom, rng)
        if s.delta().delta():
            return _res("nilpotency", "complexes.d-squared", f"delta(delta s) != 0 for s = {s}")
    return _res("nilpotency", "complexes.d-squared", None, samples=n)


def check_act_leibniz(seed: int, opt: Options) -> Result:
    dom = relative_domain()
    rng = _rng(seed, "leibniz")
    n = opt.count(50)
    for _ in range(n):
        w = S.form(dom, rng)
        s = S.integral_form(dom, rng)
        p = w.degree()
        lhs = act(w, s).delta()
        rhs = act(w.d(), s) + act(w, s.delta()).scale((-1) ** p)
        if lhs != rhs:
            return _res("act-leibniz", "complexes.action-leibniz", f"w = {w}; s = {s}")
    return _res("act-leibniz", "complexes.action-leibniz", None, samples=n)


def check_stokes(seed: int, opt: Options) -> Result:
    dom = relative_domain()
    rng = _rng(seed, "stokes")
    n = opt.count(50)
    for _ in range(n):
        # one compactly supported factor suffices; degrees chosen so the pairing is not trivially zero
        w = S.form(dom, rng, degree=rng.randint(0, dom.m - 1))
        s = S.integral_form(dom, rng, degree=dom.m - w.degree() - 1, compact=True)
        if fiber_berezin(s.delta()):
            return _res("stokes", "pairing.stokes", f"fiber integral of delta s nonzero for s = {s}")
        p = w.degree()
        total = poincare_pair(w.d(), s) + poincare_pair(w, s.delta()).scale((-1) ** p)
        if total:
            return _res("stokes", "pairing.stokes", f"adjointness defect {total} for w = {w}; s = {s}")
    return _res("stokes", "pairing.stokes", None, samples=n)


def embedding_family(dom: DomainSpec):
    """Canonical embedding and two odd-shifted ones."""
    T = underlying_domain(dom)
    l1, l2 = (SuperFunction.coord(T, nm) for nm in dom.names[dom.m + dom.n + dom.p:][:2])
    return [
        even_embedding(dom, target=T),
        even_embedding(dom, {dom.fiber_odd[0]: l1, dom.fiber_odd[1]: l2}, target=T),
        even_embedding(dom, {dom.fiber_odd[0]: l1, dom.fiber_odd[1]: l1 + l2},
                       {dom.fiber_even[0]: l1 * l2}, target=T),
    ]


def closed_compact_top(dom: DomainSpec, rng: random.Random, nterms: int = 2) -> Form:
    """Closed compactly supported top form: c(base) * bump dx^top + d(eta)."""
    c = S.function(dom.base(), rng, nterms=2, max_pow=0).transfer(dom)
    top = Form.monomial(dom, dx=dom.fiber_even, coeff=c * S.bump_product(dom, rng))
    eta = S.form(dom, rng, degree=dom.m - 1, compact=True, nterms=nterms)
    return top + eta.d()


def check_embedding(seed: int, opt: Options) -> Result:
    dom = relative_domain()
    rng = _rng(seed, "embed")
    Y = canonical_Y(dom)
    embs = embedding_family(dom)
    n = opt.count(20)
    for _ in range(n):
        w = closed_compact_top(dom, rng)
        if w.d():
            return _res("embedding", "pairing.embedding", "generated form is not closed")
        p = poincare_pair(w, Y)
        for k, iota in enumerate(embs):
            v = even_pullback_integral(iota, w)
            if v != p.transfer(v.domain):
                return _res("embedding", "pairing.embedding", f"embedding {k}: {v} != {p} for w = {w}")
    return _res("embedding", "pairing.embedding", None, samples=n, embeddings=len(embs))


# ---------------------------------------------------------------------------
# poincare (polynomial cohomology)


def check_poincare_noncompact(seed: int, opt: Options, m: int = 2, n: int = 2) -> Result:
    cap = opt.weight_cap
    anchor = "cohomology.poincare-lemma"
    for cx in (cohomology.DERHAM, cohomology.SPENCER):
        table = cohomology.betti_table(cx, m, n, cap)
        want = {k: (1 if k == 0 else 0) for k in table}
        if table != want:
            return _res(f"poincare-{cx}", anchor, f"{cx} Betti table {table}")
        reps = cohomology.representatives(cx, m, n, 0, cap)
        if len(reps) != 1:
            return _res(f"poincare-{cx}", anchor, f"{len(reps)} degree 0 representatives")
        dom = DomainSpec(m, n)
        if cx == cohomology.DERHAM:
            expected = Form.const(dom, 1)
        else:
            expected = IntegralForm.monomial(dom, dx=dom.fiber_even, coeff=SuperFunction.monomial(dom, odd=dom.fiber_odd))
        r = reps[0]
        ratio = _proportional(r, expected)
        if ratio is None:
            return _res(f"poincare-{cx}", anchor, f"representative {r} is not a multiple of {expected}")
    # stability under raising the cap by one
    for cx in (cohomology.DERHAM, cohomology.SPENCER):
        lo = cohomology.betti_table(cx, m, n, cap)
        hi = cohomology.betti_table(cx, m, n, cap + 1)
        if any(hi.get(k, 0) != v for k, v in lo.items()) or any(v for k, v in hi.items() if k not in lo):
            return _res("poincare", anchor, f"{cx} table changes with the cap: {lo} vs {hi}")
    return _res("poincare", anchor, None, m=m, n=n, weight_cap=cap)


def _proportional(x, y) -> Optional[Fraction]:
    if set(x.terms) != set(y.terms):
        return None
    ratio = None
    for k, f in y.terms.items():
        g = x.terms[k]
        if set(g.terms) != set(f.terms):
            return None
        for mono, c in f.terms.items():
            r = g.terms[mono] / c
            if ratio is None:
                ratio = r
            elif r != ratio:
                return None
    return ratio


# ---------------------------------------------------------------------------
# homotopy


def check_homotopy_even(seed: int, opt: Options) -> Result:
    dom = DomainSpec(2, 1, names=["x1", "t", "th1"])
    rng = _rng(seed, "heven")
    n = opt.count(50)
    done = 0
    while done < n:
        w = S.form(dom, rng, compact=True)
        if w.degree() is None:
            continue
        left, right = even_identity_sides(w, "t")
        if left != right:
            return _res("homotopy-even", "homotopy.even-direction", f"identity fails for w = {w}")
        done += 1
    return _res("homotopy-even", "homotopy.even-direction", None, samples=n)


def check_homotopy_odd(seed: int, opt: Options) -> Result:
    dom = DomainSpec(1, 2, names=["x1", "th1", "psi"])
    rng = _rng(seed, "hodd")
    n = opt.count(100)
    for _ in range(n):
        s = S.integral_form(dom, rng, compact=True)
        left, right = odd_identity_sides(s, "psi")
        if left != right:
            return _res("homotopy-odd", "homotopy.odd-direction", f"identity fails for s = {s}")
    return _res("homotopy-odd", "homotopy.odd-direction", None, samples=n)


def check_compact_primitives(seed: int, opt: Options) -> Result:
    anchor = "homotopy.compact-poincare"
    rng = _rng(seed, "prim")
    rounds = opt.count(3)
    for dom in (DomainSpec(1, 1), DomainSpec(2, 1), DomainSpec(2, 2, 0, 1)):
        B = S.bump_product(dom, rng)
        top = Form.monomial(dom, dx=dom.fiber_even, coeff=B)
        if find_primitive(top) is not None:
            return _res("compact-primitives", anchor, f"bump top form on R^{dom.m}|{dom.n} has a primitive")
        topS = IntegralForm.ber(dom, SuperFunction.monomial(dom, odd=dom.fiber_odd) * B)
        if find_primitive(topS) is not None:
            return _res("compact-primitives", anchor, f"bump top integral form on R^{dom.m}|{dom.n} has a primitive")
        for _ in range(rounds):
            inputs: List = []
            # zero total integral: difference of two bumps with equal mass, and exact inputs
            B2 = S.bump_product(dom, rng)
            inputs.append(Form.monomial(dom, dx=dom.fiber_even, coeff=B - B2))
            inputs.append(IntegralForm.ber(dom, SuperFunction.monomial(dom, odd=dom.fiber_odd) * (B - B2)))
            for deg in range(0, dom.m + 2):
                inputs.append(S.form(dom, rng, degree=deg, compact=True).d())
            for deg in range(dom.m - 3, dom.m):
                inputs.append(S.integral_form(dom, rng, degree=deg, compact=True).delta())
            for x in inputs:
                p = find_primitive(x)
                if p is None:
                    return _res("compact-primitives", anchor, f"no primitive found for {x}")
                back = p.d() if isinstance(p, Form) else p.delta()
                if back != x:
                    return _res("compact-primitives", anchor, f"primitive does not reproduce {x}")
    return _res("compact-primitives", anchor, None, rounds=rounds)


# ---------------------------------------------------------------------------
# liesuper


def check_ce_jacobi(seed: int, opt: Options) -> Result:
    g = d3sugra.build_iso12_1()
    ok, witness = g.check_jacobi()
    if not ok:
        return _res("ce-jacobi", "lie.jacobi", f"Jacobi fails on {witness}")
    bad = g.perturbed("M01", "P0", "P1", 1)
    if bad.check_jacobi()[0]:
        return _res("ce-jacobi", "lie.jacobi", "perturbed table still passes the Jacobi check")
    return _res("ce-jacobi", "lie.jacobi", None, basis=len(g.labels))


def check_ce_nilpotency(seed: int, opt: Options, max_arity: int = 6) -> Result:
    g = d3sugra.build_iso12_1()
    for rep in (liesuper.trivial_rep(), liesuper.adjoint_rep(g)):
        top = max_arity if rep.is_trivial() else min(max_arity, 5)
        for k in range(0, top - 1):
            s1, a = liesuper.ce_matrix(g, k, rep)
            s2, b = liesuper.ce_matrix(g, k + 1, rep)
            prod = linalg.matmul(s2, b, s1, a)
            if prod:
                return _res("ce-nilpotency", "lie.ce-differential", f"d^2 != 0 from arity {k} ({rep.dim}-dim rep)")
    return _res("ce-nilpotency", "lie.ce-differential", None, max_arity=max_arity)


def check_ce_cocycle(seed: int, opt: Options) -> Result:
    g = d3sugra.build_iso12_1()
    mu = d3sugra.mu_ce(g)
    if not liesuper.d_ce(mu).is_zero():
        return _res("ce-cocycle", "lie.cocycle", f"d mu = {liesuper.d_ce(mu)}")
    kind, data = liesuper.is_coboundary(mu)
    if kind != "certificate":
        return _res("ce-cocycle", "lie.cocycle", "mu is a coboundary")
    if not liesuper.verify_certificate(mu, data):
        return _res("ce-cocycle", "lie.cocycle", "certificate does not verify")
    return _res("ce-cocycle", "lie.cocycle", None, certificate_support=len(data))


def check_string_jacobi(seed: int, opt: Options) -> Result:
    L = d3sugra.superstring()
    ok, witness = L.check_jacobi(5)
    if not ok:
        return _res("string-jacobi", "linfty.string-extension", f"generalized Jacobi fails on {witness}")
    return _res("string-jacobi", "linfty.string-extension", None, max_arity=5)


def check_weil(seed: int, opt: Options) -> Result:
    L = d3sugra.superstring()
    alg, dg, dw, sigma = liesuper.ce_algebra_string(L, weil=True)
    rng = _rng(seed, "weil")
    n = opt.count(50)
    for _ in range(n):
        x = random_element(alg, rng, nterms=4, max_len=4)
        if dw(dw(x)):
            return _res("weil-nilpotency", "linfty.weil", f"d_W^2 x != 0 for x = {x}")
    alg, dce = liesuper.ce_algebra_string(L)
    bad = dce.square_on_generators()
    if bad:
        return _res("weil-nilpotency", "linfty.weil", f"CE differential squares to {bad}")
    return _res("weil-nilpotency", "linfty.weil", None, samples=n)


# ---------------------------------------------------------------------------
# d3


def check_gammas(seed: int, opt: Options) -> Result:
    gam = d3sugra.standard_gammas()
    res = gam.check()
    bad = sorted(k for k, v in res.items() if not v)
    return _res("gamma", "d3.gamma-identities", ", ".join(bad) if bad else None)


def check_flat_mc(seed: int, opt: Options) -> Result:
    dom = d3sugra.d3_domain()
    gam = d3sugra.standard_gammas()
    e, psi = d3sugra.flat_mc(dom, gam)
    B = d3sugra.flat_B(e, psi, gam)
    zero = Form.zero(dom)
    omega = {p: zero for p in d3sugra.PAIRS}
    curv = d3sugra.curvature(omega, e, psi, B, gam)
    if not curv.is_zero():
        return _res("flat-mc", "d3.flat-maurer-cartan", f"curvature {curv}")
    if not e[0].d():
        return _res("flat-mc", "d3.flat-maurer-cartan", "flat coframe has no torsion source")
    return _res("flat-mc", "d3.flat-maurer-cartan", None)


def check_pco(seed: int, opt: Options) -> Result:
    anchor = "d3.pco-equivalence"
    dom = d3sugra.d3_domain()
    gam = d3sugra.standard_gammas()
    self_pair = d3sugra.omega_ce_self_pairing(dom, gam)
    if self_pair != IntegralForm.ber(dom, 2):
        return _res("pco", anchor, f"<Omega_CE|Omega^CE> = {self_pair}")
    kind, alpha = d3sugra.pco_coboundary_solve(dom, gam, opt.poly_cap)
    if kind != "solution":
        return _res("pco", anchor, "Y_susy - Y_can not a coboundary within the polynomial cap")
    ys, yc = d3sugra.y_susy(dom, gam), d3sugra.y_can(dom)
    rng = _rng(seed, "pco")
    n = opt.count(10)
    for _ in range(n):
        L = closed_compact_top(dom, rng)
        a, b = poincare_pair(L, ys), poincare_pair(L, yc)
        if a != b:
            return _res("pco", anchor, f"closed L pairs differently: {a} vs {b}")
    differed = 0
    tries = 0
    while differed < opt.count(3) and tries < 50:
        tries += 1
        L = S.form(dom, rng, degree=3, compact=True, nterms=3)
        a, b = poincare_pair(L, ys), poincare_pair(L, yc)
        if a - b != poincare_pair(L.d(), alpha):
            return _res("pco", anchor, f"difference is not pair(dL, alpha) for L = {L}")
        if a != b:
            differed += 1
    if not differed:
        return _res("pco", anchor, "no non-closed sample separated the two operators")
    return _res("pco", anchor, None, closed_samples=n, open_separating=differed)


def check_reduction(seed: int, opt: Options) -> Result:
    dom = d3sugra.d3_domain()
    rng = _rng(seed, "reduce")
    n = opt.count(3)
    for i in range(n):
        f = S.function(dom, rng, nterms=3, max_pow=2, parity=0, base=False)
        got, _raw = d3sugra.susy_action_reduce(dom, f, seed=rng.randrange(10 ** 6))
        want = IntegralForm.ber(dom, -f)
        if got != want:
            return _res("reduction", "d3.superspace-reduction", f"got {got}, expected {want}")
    return _res("reduction", "d3.superspace-reduction", None, beta=d3sugra.BETA, samples=n)


def check_closure(seed: int, opt: Options) -> Result:
    ok, witness = d3sugra.rheonomy_closure_check(df_rule=opt.df_rule)
    return _res("closure", "d3.rheonomy-closure", None if ok else f"D(L) on the constraint locus = {witness}",
                df_rule=opt.df_rule)


Check = Callable[[int, Options], Result]

SUITES: Dict[str, Dict[str, Check]] = {
    "core": {
        "nilpotency": check_nilpotency,
        "act-leibniz": check_act_leibniz,
        "stokes": check_stokes,
        "embedding": check_embedding,
    },
    "poincare": {"poincare": check_poincare_noncompact},
    "homotopy": {
        "homotopy-even": check_homotopy_even,
        "homotopy-odd": check_homotopy_odd,
        "compact-primitives": check_compact_primitives,
    },
    "liesuper": {
        "ce-jacobi": check_ce_jacobi,
        "ce-nilpotency": check_ce_nilpotency,
        "ce-cocycle": check_ce_cocycle,
        "string-jacobi": check_string_jacobi,
        "weil-nilpotency": check_weil,
    },
    "d3": {
        "gamma": check_gammas,
        "flat-mc": check_flat_mc,
        "pco": check_pco,
        "reduction": check_reduction,
        "closure": check_closure,
    },
}


def suite_checks(name: str) -> Dict[str, Check]:
    if name == "all":
        return dict(itertools.chain.from_iterable(s.items() for s in SUITES.values()))
    return dict(SUITES[name])


def run_suite(name: str, seed: int = 0, options: Optional[Options] = None,
              only: Optional[str] = None) -> List[Result]:
    options = options or Options()
    checks = suite_checks(name)
    if only is not None:
        if only not in checks:
            raise KeyError(only)
        checks = {only: checks[only]}
    return [fn(seed, options) for fn in checks.values()]
