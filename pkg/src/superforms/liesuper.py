"""Lie superalgebras, Chevalley-Eilenberg cochains, string-like L-infinity extensions, Weil algebras.

Cochains are stored on normalized argument tuples: basis indices in
non-decreasing order, where an even index may not repeat. The value on any
other tuple follows from graded antisymmetry: swapping neighbours X, Y costs
-(-1)^{|X||Y|}.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .gca import GCA, Derivation, Element

Vec = Dict[int, Fraction]


def _add(acc: Vec, v: Mapping[int, Fraction], c=1):
    for k, x in v.items():
        y = acc.get(k, 0) + c * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)


class LieSuperAlgebra:
    def __init__(self, labels: Sequence[str], parities: Sequence[int],
                 brackets: Mapping[Tuple[str, str], Mapping[str, Fraction]]):
        if len(labels) != len(parities) or len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct and match parities")
        self.labels = tuple(labels)
        self.parities = tuple(p & 1 for p in parities)
        self.index = {a: i for i, a in enumerate(labels)}
        table: Dict[Tuple[int, int], Vec] = {}
        for (a, b), out in brackets.items():
            i, j = self.index[a], self.index[b]
            vec = {self.index[c]: Fraction(v) for c, v in out.items() if v}
            s = -1 if not (self.parities[i] & self.parities[j]) else 1
            mirror = {k: s * v for k, v in vec.items()}
            for key, val in (((i, j), vec), ((j, i), mirror)):
                if key in table and table[key] != val:
                    raise ValueError(f"inconsistent brackets for {labels[key[0]]}, {labels[key[1]]}")
                if val:
                    table[key] = val
        self.table = table

    @property
    def dim(self) -> int:
        return len(self.labels)

    def sdim(self) -> Tuple[int, int]:
        odd = sum(self.parities)
        return self.dim - odd, odd

    def bracket_basis(self, i: int, j: int) -> Vec:
        return self.table.get((i, j), {})

    def bracket(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                _add(out, self.bracket_basis(i, j), a * b)
        return out

    def structure_constant(self, c: str, a: str, b: str) -> Fraction:
        return self.bracket_basis(self.index[a], self.index[b]).get(self.index[c], Fraction(0))

    def check_parities(self) -> Optional[Tuple[str, str, str]]:
        for (i, j), vec in self.table.items():
            for k in vec:
                if self.parities[k] != (self.parities[i] + self.parities[j]) & 1:
                    return self.labels[i], self.labels[j], self.labels[k]
        return None

    def check_jacobi(self) -> Tuple[bool, Optional[dict]]:
        """[A,[B,C]] = [[A,B],C] + (-1)^{|A||B|} [B,[A,C]] on all basis triples."""
        bad = self.check_parities()
        if bad:
            return False, {"parity": bad}
        n = self.dim
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    lhs = self.bracket({a: 1}, self.bracket_basis(b, c))
                    rhs = self.bracket(self.bracket_basis(a, b), {c: 1})
                    s = -1 if self.parities[a] & self.parities[b] else 1
                    _add(rhs, self.bracket({b: 1}, self.bracket_basis(a, c)), s)
                    if lhs != rhs:
                        return False, {"triple": (self.labels[a], self.labels[b], self.labels[c]),
                                       "lhs": _show(self, lhs), "rhs": _show(self, rhs)}
        return True, None

    def perturbed(self, a: str, b: str, c: str, delta=1) -> "LieSuperAlgebra":
        """Copy with c^c_{ab} shifted by delta (antisymmetry kept)."""
        brackets = {}
        for (i, j), vec in self.table.items():
            if i <= j:
                brackets[(self.labels[i], self.labels[j])] = {self.labels[k]: v for k, v in vec.items()}
        i, j = self.index[a], self.index[b]
        key = (a, b) if i <= j else (b, a)
        sgn = 1 if i <= j else (1 if self.parities[i] & self.parities[j] else -1)
        vec = dict(brackets.get(key, {}))
        vec[c] = vec.get(c, 0) + sgn * Fraction(delta)
        brackets[key] = vec
        return LieSuperAlgebra(self.labels, self.parities, brackets)

    # -- text format
    def to_text(self) -> str:
        lines = ["parities: " + " ".join(f"{a}:{p}" for a, p in zip(self.labels, self.parities))]
        for (i, j), vec in sorted(self.table.items()):
            if i > j:
                continue
            for k, v in sorted(vec.items()):
                lines.append(f"{self.labels[i]} {self.labels[j]} -> {v} {self.labels[k]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LieSuperAlgebra":
        labels, pars = [], []
        brackets: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("parities:"):
                for tok in line[len("parities:"):].split():
                    a, p = tok.split(":")
                    labels.append(a)
                    pars.append(int(p))
                continue
            lhs, rhs = line.split("->")
            a, b = lhs.split()
            coeff, c = rhs.split()
            vec = brackets.setdefault((a, b), {})
            vec[c] = vec.get(c, 0) + Fraction(coeff)
        return cls(labels, pars, brackets)


def _show(g: LieSuperAlgebra, v: Vec) -> str:
    return " + ".join(f"({c}){g.labels[k]}" for k, c in sorted(v.items())) or "0"


def abelian(labels: Sequence[str], parities: Sequence[int]) -> LieSuperAlgebra:
    return LieSuperAlgebra(labels, parities, {})


# ---------------------------------------------------------------------------
# representations


class Representation:
    """Linear action rho(X_A) on a super vector space; matrices as {(row, col): c}."""

    def __init__(self, parities: Sequence[int], matrices: Mapping[int, Mapping[Tuple[int, int], Fraction]]):
        self.parities = tuple(p & 1 for p in parities)
        self.matrices = {a: {k: Fraction(v) for k, v in m.items() if v} for a, m in matrices.items()}

    @property
    def dim(self) -> int:
        return len(self.parities)

    def act(self, a: int, v: Mapping[int, Fraction]) -> Vec:
        out: Vec = {}
        for (r, s), c in self.matrices.get(a, {}).items():
            if s in v:
                _add(out, {r: c * v[s]})
        return out

    def is_trivial(self) -> bool:
        return not any(self.matrices.values())


def trivial_rep(dim: int = 1, parities: Optional[Sequence[int]] = None) -> Representation:
    return Representation(parities or [0] * dim, {})


def adjoint_rep(g: LieSuperAlgebra) -> Representation:
    mats = {}
    for (i, j), vec in g.table.items():
        for k, c in vec.items():
            mats.setdefault(i, {})[(k, j)] = c
    return Representation(g.parities, mats)


# ---------------------------------------------------------------------------
# cochains


def normalize(parities: Sequence[int], args: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sort arguments with the graded antisymmetric sign; sign 0 for a repeated even argument."""
    arr = list(args)
    sign = 1
    n = len(arr)
    for i in range(n):
        for j in range(n - 1 - i):
            a, b = arr[j], arr[j + 1]
            if a > b:
                arr[j], arr[j + 1] = b, a
                if not (parities[a] & parities[b]):
                    sign = -sign
    for a, b in zip(arr, arr[1:]):
        if a == b and not parities[a]:
            return 0, tuple(arr)
    return sign, tuple(arr)


def cochain_keys(g: LieSuperAlgebra, k: int) -> List[Tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(g.dim), k):
        if any(a == b and not g.parities[a] for a, b in zip(combo, combo[1:])):
            continue
        out.append(combo)
    return out


class Cochain:
    """k-cochain with values in a representation: key -> {value index: c}."""

    def __init__(self, g: LieSuperAlgebra, arity: int, values: Mapping[Tuple[int, ...], Mapping[int, Fraction]] | None = None,
                 rep: Optional[Representation] = None):
        self.g, self.arity = g, arity
        self.rep = rep or trivial_rep()
        clean = {}
        for key, val in (values or {}).items():
            s, nk = normalize(g.parities, key)
            if len(key) != arity:
                raise ValueError("wrong arity")
            if not s:
                if any(val.values()):
                    raise ValueError("value on a repeated even argument must vanish")
                continue
            acc = clean.setdefault(nk, {})
            _add(acc, val, s)
            if not acc:
                del clean[nk]
        self.values = clean

    @classmethod
    def from_scalars(cls, g, arity, values: Mapping[Tuple[int, ...], Fraction]) -> "Cochain":
        return cls(g, arity, {k: {0: Fraction(v)} for k, v in values.items() if v})

    def __call__(self, args: Sequence[int]) -> Vec:
        s, key = normalize(self.g.parities, args)
        if not s:
            return {}
        val = self.values.get(key)
        if not val:
            return {}
        return {k: s * v for k, v in val.items()}

    def scalar(self, args: Sequence[int]) -> Fraction:
        return self(args).get(0, Fraction(0))

    def __add__(self, other: "Cochain") -> "Cochain":
        out = {k: dict(v) for k, v in self.values.items()}
        for k, v in other.values.items():
            acc = out.setdefault(k, {})
            _add(acc, v)
        return Cochain(self.g, self.arity, out, self.rep)

    def scale(self, c) -> "Cochain":
        return Cochain(self.g, self.arity, {k: {i: c * x for i, x in v.items()} for k, v in self.values.items()}, self.rep)

    def __sub__(self, other):
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.arity == other.arity and self.values == other.values

    def parity(self) -> Optional[int]:
        ps = set()
        for key, val in self.values.items():
            for r in val:
                ps.add((sum(self.g.parities[a] for a in key) + self.rep.parities[r]) & 1)
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def vector(self, keys: Sequence[Tuple[int, ...]]) -> Dict[int, Fraction]:
        """Flatten (key, value index) into one coordinate vector."""
        r = self.rep.dim
        index = {k: i for i, k in enumerate(keys)}
        out = {}
        for key, val in self.values.items():
            for v, c in val.items():
                out[index[key] * r + v] = c
        return out

    def __str__(self):
        if not self.values:
            return "0"
        lab = self.g.labels
        parts = []
        for key, val in sorted(self.values.items()):
            for v, c in sorted(val.items()):
                tag = "" if self.rep.dim == 1 else f"[{v}]"
                parts.append(f"({c})<{','.join(lab[a] for a in key)}>{tag}")
        return " + ".join(parts)


def d_ce(omega: Cochain) -> Cochain:
    """Chevalley-Eilenberg coboundary, value on normalized (n+1)-tuples:

    sum_i (-1)^{n+i} (-1)^{|X_i| sum_{k<i}|X_k|} rho(X_i) omega(.., X_i^, ..)
    + sum_{i<j} (-1)^{n+j} (-1)^{|X_j| sum_{i<k<j}|X_k|} omega(.., [X_i,X_j] at slot i, .., X_j^, ..)
    """
    g, rep, n = omega.g, omega.rep, omega.arity
    P = g.parities
    trivial = rep.is_trivial()
    out: Dict[Tuple[int, ...], Vec] = {}
    for key in cochain_keys(g, n + 1):
        acc: Vec = {}
        if not trivial:
            before = 0
            for i, x in enumerate(key, start=1):
                rest = key[: i - 1] + key[i:]
                val = omega(rest)
                if val:
                    s = (-1) ** ((n + i) + P[x] * before)
                    _add(acc, rep.act(x, val), s)
                before += P[x]
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                br = g.bracket_basis(key[i], key[j])
                if not br:
                    continue
                mid = sum(P[key[k]] for k in range(i + 1, j))
                s = (-1) ** ((n + j + 1) + P[key[j]] * mid)  # j is 0-based here
                for c, coef in br.items():
                    args = key[:i] + (c,) + key[i + 1: j] + key[j + 1:]
                    val = omega(args)
                    if val:
                        _add(acc, val, s * coef)
        if acc:
            out[key] = acc
    return Cochain(g, n + 1, out, rep)


def ce_matrix(g: LieSuperAlgebra, k: int, rep: Optional[Representation] = None):
    """Matrix of d_ce from arity k to k+1 on flattened coordinates (same formula as d_ce)."""
    rep = rep or trivial_rep()
    P = g.parities
    src = {key: i for i, key in enumerate(cochain_keys(g, k))}
    tgt = cochain_keys(g, k + 1)
    r = rep.dim
    trivial = rep.is_trivial()
    entries: Dict[Tuple[int, int], Fraction] = {}

    def put(row, col, c):
        v = entries.get((row, col), 0) + c
        if v:
            entries[(row, col)] = v
        else:
            entries.pop((row, col), None)

    for t, key in enumerate(tgt):
        if not trivial:
            before = 0
            for i, x in enumerate(key, start=1):
                s0, rest = normalize(P, key[: i - 1] + key[i:])
                if s0:
                    s = s0 * (-1) ** ((k + i) + P[x] * before)
                    for (row, col), c in rep.matrices.get(x, {}).items():
                        put(t * r + row, src[rest] * r + col, s * c)
                before += P[x]
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                br = g.bracket_basis(key[i], key[j])
                if not br:
                    continue
                mid = sum(P[key[q]] for q in range(i + 1, j))
                s = (-1) ** ((k + j + 1) + P[key[j]] * mid)
                for c, coef in br.items():
                    s0, args = normalize(P, key[:i] + (c,) + key[i + 1: j] + key[j + 1:])
                    if s0:
                        for v in range(r):
                            put(t * r + v, src[args] * r + v, s * s0 * coef)
    return (len(tgt) * r, len(src) * r), entries


def random_cochain(g: LieSuperAlgebra, k: int, rng: random.Random, nterms: int = 5,
                   rep: Optional[Representation] = None) -> Cochain:
    rep = rep or trivial_rep()
    keys = cochain_keys(g, k)
    vals = {}
    for _ in range(nterms if keys else 0):
        key = rng.choice(keys)
        vals.setdefault(key, {})[rng.randrange(rep.dim)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return Cochain(g, k, vals, rep)


def is_coboundary(omega: Cochain):
    """("preimage", eta) with d_ce(eta) = omega, or ("certificate", y) proving omega is not exact."""
    if not d_ce(omega).is_zero():
        raise ValueError("cochain is not closed")
    g, k, rep = omega.g, omega.arity, omega.rep
    if k == 0:
        if omega.is_zero():
            return "preimage", Cochain(g, -1 if False else 0, {}, rep)
        return "certificate", omega.vector([()])
    shape, entries = ce_matrix(g, k - 1, rep)
    rhs = omega.vector(cochain_keys(g, k))
    kind, sol = linalg.solve(shape, entries, rhs)
    if kind == "certificate":
        return "certificate", sol
    src = cochain_keys(g, k - 1)
    r = rep.dim
    vals: Dict[Tuple[int, ...], Vec] = {}
    for idx, c in sol.items():
        vals.setdefault(src[idx // r], {})[idx % r] = c
    return "preimage", Cochain(g, k - 1, vals, rep)


def verify_certificate(omega: Cochain, y: Dict[int, Fraction]) -> bool:
    shape, entries = ce_matrix(omega.g, omega.arity - 1, omega.rep)
    return linalg.check_certificate(shape, entries, omega.vector(cochain_keys(omega.g, omega.arity)), y)


# ---------------------------------------------------------------------------
# string-like L-infinity extensions


class StringLike:
    """g (+) V with V in degree n-1 (trivial action), l_2 = bracket, l_{n+1} = mu (V-valued)."""

    def __init__(self, g: LieSuperAlgebra, mu: Cochain, n: int, v_labels: Sequence[str] = ("B",),
                 v_parities: Optional[Sequence[int]] = None, validate: bool = True):
        if mu.arity != n + 1:
            raise ValueError("mu must have arity n + 1")
        if mu.parity() not in (0,):
            raise ValueError("mu must be even")
        if validate and not d_ce(mu).is_zero():
            raise ValueError("mu must be closed")
        self.g, self.mu, self.n = g, mu, n
        self.v_labels = tuple(v_labels)
        vp = tuple(v_parities or [0] * len(v_labels))
        self.labels = g.labels + self.v_labels
        self.parities = g.parities + vp
        self.degrees = (0,) * g.dim + (n - 1,) * len(v_labels)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def swap_sign(self, a: int, b: int) -> int:
        """chi of a transposition of neighbours a, b."""
        e = self.degrees[a] * self.degrees[b] + self.parities[a] * self.parities[b]
        return 1 if e & 1 else -1

    def bracket(self, k: int, args: Sequence[int]) -> Vec:
        N = self.g.dim
        if k == 2:
            a, b = args
            if a < N and b < N:
                return dict(self.g.bracket_basis(a, b))
            return {}
        if k == self.n + 1:
            if any(a >= N for a in args):
                return {}
            val = self.mu(args)
            return {N + v: c for v, c in val.items()}
        return {}

    def bracket_vec(self, k: int, first: Vec, rest: Sequence[int]) -> Vec:
        out: Vec = {}
        for a, c in first.items():
            _add(out, self.bracket(k, (a,) + tuple(rest)), c)
        return out

    def _chi(self, order: Sequence[int], args: Sequence[int]) -> int:
        """Sign of rearranging args into args[order[0]], args[order[1]], ..."""
        s = 1
        for x in range(len(order)):
            for y in range(x + 1, len(order)):
                if order[x] > order[y]:
                    s *= self.swap_sign(args[order[x]], args[order[y]])
        return s

    def jacobi_defect(self, args: Sequence[int]) -> Vec:
        """Left side of the generalized Jacobi identity on the given inputs."""
        N = len(args)
        out: Vec = {}
        idx = list(range(N))
        for p in range(1, N + 1):
            q = N - p
            for first in itertools.combinations(idx, p):
                second = [i for i in idx if i not in first]
                order = list(first) + second
                inner = self.bracket(p, [args[i] for i in first]) if p >= 2 else {}
                if not inner:
                    continue
                outer = self.bracket_vec(q + 1, inner, [args[i] for i in second]) if q + 1 >= 2 else {}
                if not outer:
                    continue
                s = (-1) ** (p * q) * self._chi(order, args)
                _add(out, outer, s)
        return out

    def check_jacobi(self, max_arity: int = 5) -> Tuple[bool, Optional[dict]]:
        """Generalized Jacobi on all non-decreasing basis tuples of arity 1..max_arity."""
        for N in range(1, max_arity + 1):
            for args in itertools.combinations_with_replacement(range(self.dim), N):
                defect = self.jacobi_defect(args)
                if defect:
                    return False, {"args": [self.labels[a] for a in args],
                                   "defect": {self.labels[k]: str(v) for k, v in defect.items()}}
        return True, None


# ---------------------------------------------------------------------------
# CE and Weil algebras as differential graded-commutative algebras


def _ce_generators(labels, parities, degrees):
    return [(f"T^{a}", 1 + d, p) for a, p, d in zip(labels, parities, degrees)]


def ce_algebra_of(bracket_fn, labels, parities, degrees, arities: Iterable[int], weil: bool = False):
    """CE (or Weil) algebra of an L-infinity algebra given by bracket_fn(k, args) -> Vec.

    d T^A = - sum_k 1/k! sum_{A_1..A_k} <l_k(T_{A_1},..,T_{A_k}) | T^A> T^{A_1} ... T^{A_k}.
    """
    gens = _ce_generators(labels, parities, degrees)
    if weil:
        gens = gens + [(f"W^{a}", 2 + d, p) for a, p, d in zip(labels, parities, degrees)]
    alg = GCA(gens)
    T = [alg.gen(f"T^{a}") for a in labels]
    images: Dict[str, Element] = {f"T^{a}": alg.zero() for a in labels}
    for k in arities:
        for args in itertools.product(range(len(labels)), repeat=k):
            val = bracket_fn(k, args)
            if not val:
                continue
            mono = alg.one()
            for a in args:
                mono = mono * T[a]
            if not mono:
                continue
            for target, c in val.items():
                name = f"T^{labels[target]}"
                images[name] = images[name] - mono.scale(Fraction(c) / factorial(k))
    dg = Derivation(alg, (1, 0), images)
    if not weil:
        return alg, dg
    sigma = Derivation(alg, (1, 0), {f"T^{a}": alg.gen(f"W^{a}") for a in labels})
    wimages = {}
    for a in labels:
        wimages[f"T^{a}"] = images[f"T^{a}"] + alg.gen(f"W^{a}")
        wimages[f"W^{a}"] = -sigma(images[f"T^{a}"])
    dw = Derivation(alg, (1, 0), wimages)
    return alg, dg, dw, sigma


def ce_algebra(g: LieSuperAlgebra):
    return ce_algebra_of(lambda k, args: g.bracket_basis(*args) if k == 2 else {},
                         g.labels, g.parities, [0] * g.dim, [2])


def weil_algebra(g: LieSuperAlgebra):
    return ce_algebra_of(lambda k, args: g.bracket_basis(*args) if k == 2 else {},
                         g.labels, g.parities, [0] * g.dim, [2], weil=True)


def ce_algebra_string(L: StringLike, weil: bool = False):
    return ce_algebra_of(L.bracket, L.labels, L.parities, L.degrees, sorted({2, L.n + 1}), weil=weil)


def weil_d(dw: Derivation, x: Element) -> Element:
    return dw(x)
