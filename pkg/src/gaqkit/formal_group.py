"""Truncated group laws: BCH exponentiation, closed forms and axiom checks.

A group law is stored as one :class:`TruncatedPoly` per coordinate on the
*pair chart* whose coordinates are the primed copies (g') followed by the
unprimed ones (g), so ``law["x1"]`` is x1'' as a polynomial in (g', g).

Exponentiation uses coordinates of the second kind over ordered *blocks*:
the element with coordinates c is exp(Z_1) exp(Z_2) ... exp(Z_k) where Z_j
is the first-kind combination of the generators in block j.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .algebra import AlgebraError, AlgebraSpec, check_jacobi, make_constants
from .catalog import GE_electromagnetic, PEG_electrograv, levi_civita
from .poly import Chart, TruncatedPoly

__all__ = [
    "DomainError",
    "LawError",
    "UnsupportedOrder",
    "GroupLaw",
    "AxiomReport",
    "bch_coefficients",
    "bch",
    "exponentiate",
    "check_group_axioms",
    "closed_form_GE",
    "group_law_PEG",
    "inverse",
    "default_blocks",
    "xi_m",
    "xi_q",
]


class DomainError(ValueError):
    """Point outside the coordinate chart (e.g. |ε| > 2 for rotations)."""


class LawError(ValueError):
    """A group law lacks the structure an operation needs."""


class UnsupportedOrder(ValueError):
    """Requested truncation order beyond what a construction supports."""


PRIME = "'"


def pair_chart(chart: Chart) -> Chart:
    return chart.renamed(PRIME) + chart


def triple_chart(chart: Chart) -> Chart:
    return chart.renamed(PRIME * 2) + chart.renamed(PRIME) + chart


# -- free-algebra BCH coefficients ---------------------------------------------

def _fa_mul(a: dict, b: dict, n: int) -> dict:
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            if len(wa) + len(wb) <= n:
                w = wa + wb
                out[w] = out.get(w, 0) + ca * cb
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=None)
def bch_coefficients(n: int) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """Dynkin form of log(e^X e^Y) through word length n.

    Returns pairs (word, coefficient) with letters 0 = X and 1 = Y such that
    log(e^X e^Y) = Σ coefficient · [w_1, [w_2, [..., w_k]]].
    """
    exy: dict = {}
    for i in range(n + 1):
        for j in range(n + 1 - i):
            if i + j:
                exy[(0,) * i + (1,) * j] = Fraction(1, math.factorial(i) * math.factorial(j))
    log: dict = {}
    power = {(): Fraction(1)}
    for k in range(1, n + 1):
        power = _fa_mul(power, exy, n)
        for w, c in power.items():
            log[w] = log.get(w, 0) + Fraction((-1) ** (k + 1), k) * c
    out = []
    for w, c in sorted(log.items(), key=lambda wc: (len(wc[0]), wc[0])):
        if not c:
            continue
        if len(w) > 1 and w[-1] == w[-2]:
            continue  # right-nested bracket ends in [Z, Z] = 0
        out.append((w, c / len(w)))
    return tuple(out)


Vec = dict  # generator label -> TruncatedPoly


def vec_bracket(alg: AlgebraSpec, u: Vec, v: Vec) -> Vec:
    """[u, v] for algebra elements with polynomial coefficients."""
    out: Vec = {}
    for (a, b), combo in alg.structure.items():
        terms = []
        if a in u and b in v:
            terms.append(u[a] * v[b])
        if b in u and a in v:
            terms.append(-(u[b] * v[a]))
        if not terms:
            continue
        w = terms[0] if len(terms) == 1 else terms[0] + terms[1]
        if w.is_zero():
            continue
        for k, c in combo.items():
            out[k] = out[k] + w.scale(c) if k in out else w.scale(c)
    return {k: p for k, p in out.items() if not p.is_zero()}


def vec_add(u: Vec, v: Vec) -> Vec:
    out = dict(u)
    for k, p in v.items():
        out[k] = out[k] + p if k in out else p
    return {k: p for k, p in out.items() if not p.is_zero()}


def bch(alg: AlgebraSpec, x: Vec, y: Vec, order: int) -> Vec:
    """log(e^x e^y) through word length ``order`` (coefficients must vanish at 0)."""
    if not x:
        return dict(y)
    if not y:
        return dict(x)
    memo: dict = {(0,): x, (1,): y}

    def nested(w):
        if w in memo:
            return memo[w]
        inner = nested(w[1:])
        val = vec_bracket(alg, memo[(w[0],)], inner) if inner else {}
        memo[w] = val
        return val

    acc: Vec = {}
    for w, c in bch_coefficients(order):
        val = nested(w)
        if val:
            acc = vec_add(acc, {k: p.scale(c) for k, p in val.items()})
    return acc


# -- group laws ----------------------------------------------------------------

@dataclass
class GroupLaw:
    """Composition law g'' = law(g', g) on a chart.

    ``composition[name]`` is a TruncatedPoly on :func:`pair_chart`.  For
    closed-form laws ``evaluator(gp, g)`` evaluates the exact law at points
    (dicts name -> number).
    """

    name: str
    chart: Chart
    composition: dict[str, TruncatedPoly]
    degree: int
    kind: str
    constants: dict = field(default_factory=dict)
    blocks: list | None = None
    algebra: AlgebraSpec | None = None
    evaluator: Callable | None = None
    inverse_map: dict | None = None

    @property
    def pair(self) -> Chart:
        return pair_chart(self.chart)

    def phase(self) -> str | None:
        return self.chart.phase()

    def compose(self, gp: Mapping, g: Mapping) -> dict:
        """Evaluate at points.  Exact closed forms when available, else the truncated polynomials."""
        if self.evaluator is not None:
            return self.evaluator(gp, g)
        point = {n + PRIME: gp.get(n, 0) for n in self.chart.names}
        point.update({n: g.get(n, 0) for n in self.chart.names})
        return {n: self.composition[n].evaluate(point) for n in self.chart.names}

    def compose_poly(self, left: Mapping[str, TruncatedPoly], right: Mapping[str, TruncatedPoly]) -> dict:
        """Substitute polynomial arguments: law(left, right)."""
        bindings = {n + PRIME: left[n] for n in self.chart.names}
        bindings.update({n: right[n] for n in self.chart.names})
        return {n: self.composition[n].substitute(bindings) for n in self.chart.names}

    def phase_cocycle(self) -> TruncatedPoly:
        """ξ(g', g) = φ'' - φ' - φ."""
        ph = self.phase()
        if ph is None:
            raise LawError("law has no phase coordinate")
        pc = self.pair
        p = self.composition[ph]
        return p - TruncatedPoly.var(pc, ph + PRIME, p.degree) - TruncatedPoly.var(pc, ph, p.degree)

    def truncate(self, d: int) -> "GroupLaw":
        return GroupLaw(self.name, self.chart, {k: p.truncate(d) for k, p in self.composition.items()},
                        min(d, self.degree), self.kind, self.constants, self.blocks, self.algebra)

    def to_text(self) -> str:
        lines = [f"# group law {self.name} kind={self.kind} degree={self.degree}"]
        for n in self.chart.names:
            lines.append(f"{n}'' = {self.composition[n].to_text()}")
        return "\n".join(lines) + "\n"


def default_blocks(alg: AlgebraSpec) -> list[list[str]]:
    """Block ordering used when none is given.

    GE-type charts use t, x, A0, A, v, ε, φ (chosen so that the truncated
    law reproduces the closed form); P_EG uses x, h, ε, A, φ.  Anything else
    gets a single block, i.e. plain first-kind (exponential) coordinates.
    """
    gens = list(alg.generators)

    def fam(pred):
        return [g for g in gens if pred(g)]

    if alg.name.startswith("GE_electromagnetic"):
        order = [fam(lambda g: g == "t"), fam(lambda g: g[0] == "x"), fam(lambda g: g == "A0"),
                 fam(lambda g: g[0] == "A" and g != "A0"), fam(lambda g: g[0] == "v"),
                 fam(lambda g: g.startswith("eps")), fam(lambda g: g == "phi")]
    elif alg.name.startswith("PEG_electrograv"):
        order = [fam(lambda g: g[0] == "x"), fam(lambda g: g[0] == "h"), fam(lambda g: g[0] == "e"),
                 fam(lambda g: g[0] == "A"), fam(lambda g: g == "phi")]
    else:
        return [gens]
    order = [b for b in order if b]
    if sorted(itertools.chain(*order)) != sorted(gens):
        return [[g] for g in gens]
    return order


def _first_kind_map(alg: AlgebraSpec, chart: Chart, blocks, order: int) -> Vec:
    """F(c): first-kind coordinates of exp(Z_1)...exp(Z_k) as polynomials in c."""
    vecs = []
    for blk in blocks:
        vecs.append({g: TruncatedPoly.var(chart, g, order) for g in blk})
    acc = vecs[-1]
    for v in reversed(vecs[:-1]):
        acc = bch(alg, v, acc, order)
    zero = TruncatedPoly.zero(chart, order)
    return {g: acc.get(g, zero) for g in chart.names}


def _revert(chart: Chart, F: Vec, order: int) -> Vec:
    """Series inverse G of F (F = id + higher order) by fixed-point iteration."""
    ident = {g: TruncatedPoly.var(chart, g, order) for g in chart.names}
    nonlin = {g: F[g] - ident[g] for g in chart.names}
    if all(p.is_zero() for p in nonlin.values()):
        return ident
    for g, p in nonlin.items():
        low = p.min_degree()
        if low is not None and low < 2:
            raise LawError(f"first-kind map is not the identity to first order in {g}")
    cur = dict(ident)
    for _ in range(order - 1):
        cur = {g: ident[g] - nonlin[g].substitute(cur, target=chart) for g in chart.names}
    return cur


def exponentiate(alg: AlgebraSpec, order: int = 3, blocks: Sequence[Sequence[str]] | None = None,
                 freeze: Sequence[str] = (), check: bool = True) -> GroupLaw:
    """Truncated group law of ``alg`` in block second-kind coordinates.

    ``freeze`` removes generators (the rest must close as a subalgebra).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if freeze:
        alg = alg.subalgebra([g for g in alg.generators if g not in set(freeze)], alg.name)
    if check:
        rep = check_jacobi(alg)
        if not rep.ok:
            raise AlgebraError(f"{alg.name} fails Jacobi on {rep.violating_triples[:5]}")
    if blocks is None:
        blocks = default_blocks(alg)
    else:
        blocks = [[g for g in b if g in alg.generators] for b in blocks]
        blocks = [b for b in blocks if b]
        if sorted(itertools.chain(*blocks)) != sorted(alg.generators):
            raise ValueError("blocks must partition the generators")
    chart = alg.chart()
    pc = pair_chart(chart)
    F = _first_kind_map(alg, chart, blocks, order)
    G = _revert(chart, F, order)
    prime_map = {n: n + PRIME for n in chart.names}
    Fp = {g: F[g].rename(pc, prime_map) for g in chart.names}
    Fu = {g: F[g].rename(pc) for g in chart.names}
    W = bch(alg, {g: p for g, p in Fp.items() if not p.is_zero()},
            {g: p for g, p in Fu.items() if not p.is_zero()}, order)
    zero = TruncatedPoly.zero(pc, order)
    W = {g: W.get(g, zero) for g in chart.names}
    law = {g: G[g].substitute(W, target=pc) for g in chart.names}
    neg = {g: -F[g] for g in chart.names}
    inv = {g: G[g].substitute(neg, target=chart) for g in chart.names}
    return GroupLaw(alg.name, chart, law, order, "truncated_BCH", dict(alg.constants),
                    [list(b) for b in blocks], alg, None, inv)


def inverse(law: GroupLaw) -> dict[str, TruncatedPoly]:
    """g^{-1} as polynomials in g (truncated laws) via fixed-point solving of law(g, y) = e."""
    if law.inverse_map is not None:
        return law.inverse_map
    chart, d = law.chart, law.degree
    ident = {g: TruncatedPoly.var(chart, g, d) for g in chart.names}
    y = {g: -ident[g] for g in chart.names}
    for _ in range(d):
        val = law.compose_poly(ident, y)
        y = {g: y[g] - val[g] for g in chart.names}
    law.inverse_map = y
    return y


# -- closed-form extended Galilei law -------------------------------------------

def _sqrt_series(u: TruncatedPoly, degree: int) -> TruncatedPoly:
    """√(1 - u) as a truncated series (u must vanish at 0)."""
    out = TruncatedPoly.const(u.chart, 1, degree)
    term = TruncatedPoly.const(u.chart, 1, degree)
    coef = Fraction(1)
    n = 0
    while True:
        n += 1
        term = term * u
        if term.is_zero():
            break
        coef = coef * (Fraction(1, 2) - (n - 1)) / n
        out = out + term.scale(coef * (-1) ** n)
    return out


def _rotation_poly(eps: list[TruncatedPoly], q0: TruncatedPoly):
    """R(ε) = (1 - ε²/2) I + ½ ε εᵀ + q0 [ε]×, rows of polys."""
    e2 = eps[0] * eps[0] + eps[1] * eps[1] + eps[2] * eps[2]
    chart, d = eps[0].chart, eps[0].degree
    one = TruncatedPoly.const(chart, 1, d)
    R = [[None] * 3 for _ in range(3)]
    for k in range(3):
        for j in range(3):
            val = (eps[k] * eps[j]).scale(Fraction(1, 2))
            if k == j:
                val = val + one - e2.scale(Fraction(1, 2))
            for l in range(3):
                s = levi_civita(k + 1, l + 1, j + 1)
                if s:
                    val = val + (q0 * eps[l]).scale(s)
            R[k][j] = val
    return R


def _matvec(R, v):
    return [R[k][0] * v[0] + R[k][1] * v[1] + R[k][2] * v[2] for k in range(3)]


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def rotation_matrix(eps):
    """R(ε) and q0 = √(1 - ε²/4) for numeric evaluation.

    Exact (identity, q0 = 1) when ε = 0, floats otherwise.  Raises
    DomainError for |ε| > 2.
    """
    e2 = sum(e * e for e in eps)
    if e2 > 4:
        raise DomainError(f"|eps|^2 = {e2} > 4 is outside the rotation chart")
    if e2 == 0:
        return [[Fraction(int(k == j)) for j in range(3)] for k in range(3)], Fraction(1)
    eps = [float(e) for e in eps]
    e2 = float(e2)
    q0 = math.sqrt(1 - e2 / 4)
    R = [[0.0] * 3 for _ in range(3)]
    for k in range(3):
        for j in range(3):
            val = eps[k] * eps[j] / 2 + (1 - e2 / 2 if k == j else 0.0)
            for l in range(3):
                s = levi_civita(k + 1, l + 1, j + 1)
                if s:
                    val += s * q0 * eps[l]
            R[k][j] = val
    return R, q0


def _scaled(k: Fraction, val):
    return float(k) * val if isinstance(val, float) else k * val


def xi_m(gp: Mapping, g: Mapping, constants: Mapping | None = None):
    """Bargmann cocycle -(m/ħ)[v'·R'x + ½ t v'²] evaluated at points."""
    k = make_constants(constants)
    R, _ = rotation_matrix([gp.get(f"eps{i}", 0) for i in (1, 2, 3)])
    vp = [gp.get(f"v{i}", 0) for i in (1, 2, 3)]
    x = [g.get(f"x{i}", 0) for i in (1, 2, 3)]
    Rx = [sum(R[a][b] * x[b] for b in range(3)) for a in range(3)]
    val = sum(vp[a] * Rx[a] for a in range(3)) + g.get("t", 0) * sum(v * v for v in vp) / 2
    return _scaled(-k["m"] / k["hbar"], val)


def xi_q(gp: Mapping, g: Mapping, constants: Mapping | None = None):
    """Charge cocycle -(q/ħ)[A'·R'x + t(v'·A' - A0')] evaluated at points."""
    k = make_constants(constants)
    R, _ = rotation_matrix([gp.get(f"eps{i}", 0) for i in (1, 2, 3)])
    Ap = [gp.get(f"A{i}", 0) for i in (1, 2, 3)]
    vp = [gp.get(f"v{i}", 0) for i in (1, 2, 3)]
    x = [g.get(f"x{i}", 0) for i in (1, 2, 3)]
    Rx = [sum(R[a][b] * x[b] for b in range(3)) for a in range(3)]
    val = sum(Ap[a] * Rx[a] for a in range(3)) + g.get("t", 0) * (
        sum(vp[a] * Ap[a] for a in range(3)) - gp.get("A0", 0))
    return _scaled(-k["q"] / k["hbar"], val)


def _ge_evaluate(constants, rotations):
    k = make_constants(constants)

    def evaluate(gp: Mapping, g: Mapping) -> dict:
        ep = [gp.get(f"eps{i}", 0) for i in (1, 2, 3)]
        e = [g.get(f"eps{i}", 0) for i in (1, 2, 3)]
        Rp, q0p = rotation_matrix(ep)
        _, q0 = rotation_matrix(e)

        def rot(v):
            return [sum(Rp[a][b] * v[b] for b in range(3)) for a in range(3)]

        vec = lambda pt, s: [pt.get(f"{s}{i}", 0) for i in (1, 2, 3)]
        t, tp = g.get("t", 0), gp.get("t", 0)
        x, xp, v, vp = vec(g, "x"), vec(gp, "x"), vec(g, "v"), vec(gp, "v")
        A, Ap = vec(g, "A"), vec(gp, "A")
        out = {"t": tp + t}
        Rx, Rv, RA = rot(x), rot(v), rot(A)
        for i in range(3):
            out[f"x{i + 1}"] = xp[i] + Rx[i] + vp[i] * t
            out[f"v{i + 1}"] = vp[i] + Rv[i]
            out[f"A{i + 1}"] = Ap[i] + RA[i]
        if rotations:
            q0pp = q0p * q0 - sum(ep[i] * e[i] for i in range(3)) / 4
            if q0pp < 0:
                raise DomainError("composition leaves the rotation chart (q0'' < 0)")
            cr = [ep[1] * e[2] - ep[2] * e[1], ep[2] * e[0] - ep[0] * e[2], ep[0] * e[1] - ep[1] * e[0]]
            for i in range(3):
                out[f"eps{i + 1}"] = q0 * ep[i] + q0p * e[i] + cr[i] / 2
        out["A0"] = gp.get("A0", 0) + g.get("A0", 0) + sum(vp[i] * RA[i] for i in range(3))
        out["phi"] = gp.get("phi", 0) + g.get("phi", 0) + xi_m(gp, g, k) + xi_q(gp, g, k)
        return out

    return evaluate


def closed_form_GE(constants: Mapping | None = None, degree: int = 3, rotations: bool = True) -> GroupLaw:
    """Exact extended Galilei law with the A, A0 sector.

    Symbolic part: √(1 - ε²/4) expanded to ``degree``.  The ``evaluator``
    evaluates the exact law (Fractions when ε = 0, floats otherwise).
    """
    k = make_constants(constants)
    alg = GE_electromagnetic(k, rotations=rotations)
    chart = alg.chart()
    pc = pair_chart(chart)
    d = degree
    V = lambda n: TruncatedPoly.var(pc, n, d)
    vec = lambda s, pr="": [V(f"{s}{i}{pr}") for i in (1, 2, 3)]
    t, tp = V("t"), V("t'")
    x, xp, v, vp = vec("x"), vec("x", "'"), vec("v"), vec("v", "'")
    A, Ap = vec("A"), vec("A", "'")
    one = TruncatedPoly.const(pc, 1, d)
    law: dict = {"t": tp + t}
    if rotations:
        e, ep = vec("eps"), vec("eps", "'")
        q0p = _sqrt_series(_dot(ep, ep).scale(Fraction(1, 4)), d)
        q0 = _sqrt_series(_dot(e, e).scale(Fraction(1, 4)), d)
        Rp = _rotation_poly(ep, q0p)
        rot = lambda w: _matvec(Rp, w)
        cr = _cross(ep, e)
        for i in range(3):
            law[f"eps{i + 1}"] = q0 * ep[i] + q0p * e[i] + cr[i].scale(Fraction(1, 2))
    else:
        rot = lambda w: list(w)
    Rx, Rv, RA = rot(x), rot(v), rot(A)
    for i in range(3):
        law[f"x{i + 1}"] = xp[i] + Rx[i] + vp[i] * t
        law[f"v{i + 1}"] = vp[i] + Rv[i]
        law[f"A{i + 1}"] = Ap[i] + RA[i]
    law["A0"] = V("A0'") + V("A0") + _dot(vp, RA)
    xim = (_dot(vp, Rx) + (t * _dot(vp, vp)).scale(Fraction(1, 2))).scale(-k["m"] / k["hbar"])
    xiq = (_dot(Ap, Rx) + t * (_dot(vp, Ap) - V("A0'"))).scale(-k["q"] / k["hbar"])
    law["phi"] = V("phi'") + V("phi") + xim + xiq
    del one
    return GroupLaw("closed_form_GE" if rotations else "closed_form_GE_norot", chart,
                    {n: law[n] for n in chart.names}, d, "closed_form_GE", dict(k), None, alg,
                    _ge_evaluate(k, rotations))


# -- P_EG law ----------------------------------------------------------------------

def group_law_PEG(constants: Mapping | None = None, order: int = 3, fallback: bool = False) -> GroupLaw:
    """Truncated electro-gravitational group law (BCH in x, h, ε, A, φ blocks)."""
    if order > 3 and not fallback:
        raise UnsupportedOrder("the P_EG law is provided through order 3; pass fallback=True to exponentiate further")
    alg = PEG_electrograv(constants)
    law = exponentiate(alg, order, check=False)
    law.name = "group_law_PEG"
    return law


# -- axiom checks ----------------------------------------------------------------

@dataclass
class AxiomReport:
    identity_ok: bool
    inverse_ok: bool
    associativity_ok: bool
    associativity_residual: dict = field(default_factory=dict)
    lowest_residual_degree: int | None = None
    cocycle_ok: bool | None = None
    trials: int = 0
    trial_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.identity_ok and self.inverse_ok and self.associativity_ok
                and self.cocycle_ok is not False and not self.trial_failures)


def _random_point(rng: random.Random, chart: Chart, with_rotations: bool):
    pt = {}
    for n in chart.names:
        if n.startswith("eps"):
            pt[n] = Fraction(rng.randint(-20, 20), 80) if with_rotations else Fraction(0)
        else:
            pt[n] = Fraction(rng.randint(-50, 50), rng.randint(1, 12))
    return pt


def check_group_axioms(law: GroupLaw, order: int | None = None, trials: int = 0, seed: int = 0,
                       rotations: bool = False) -> AxiomReport:
    """Identity, inverse and associativity through ``order`` (symbolic).

    For closed-form laws ``trials`` random rational triples are also
    composed with the exact evaluator; with ``rotations=False`` ε = 0 so the
    comparison is exact, otherwise it is numeric at 1e-12.
    """
    d = law.degree if order is None else min(order, law.degree)
    chart = law.chart
    pc = law.pair
    names = chart.names
    # identity
    ident_ok = True
    zero_c = {n: TruncatedPoly.zero(chart, d) for n in names}
    var_c = {n: TruncatedPoly.var(chart, n, d) for n in names}
    for left, right in ((var_c, zero_c), (zero_c, var_c)):
        res = law.compose_poly(left, right)
        if any(res[n].truncate(d) != var_c[n] for n in names):
            ident_ok = False
    # inverse
    inv = inverse(law)
    inv = {n: p.with_degree(d) for n, p in inv.items()}
    res = law.compose_poly(var_c, inv)
    res2 = law.compose_poly(inv, var_c)
    inverse_ok = all(res[n].truncate(d).is_zero() and res2[n].truncate(d).is_zero() for n in names)
    # associativity on the triple chart
    tc = triple_chart(chart)
    a = {n: TruncatedPoly.var(tc, n + PRIME * 2, d) for n in names}
    b = {n: TruncatedPoly.var(tc, n + PRIME, d) for n in names}
    c = {n: TruncatedPoly.var(tc, n, d) for n in names}
    ab = law.compose_poly(a, b)
    bc = law.compose_poly(b, c)
    lhs = law.compose_poly(ab, c)
    rhs = law.compose_poly(a, bc)
    residual = {n: (lhs[n] - rhs[n]).truncate(d) for n in names}
    residual = {n: p for n, p in residual.items() if not p.is_zero()}
    lowest = min((p.min_degree() for p in residual.values()), default=None)
    rep = AxiomReport(ident_ok, inverse_ok, not residual, residual, lowest)
    # cocycle identity of the phase
    ph = law.phase()
    if ph is not None:
        xi = law.phase_cocycle()

        def xi_of(u, w):
            bind = {n + PRIME: u[n] for n in names}
            bind.update({n: w[n] for n in names})
            return xi.substitute(bind)

        lhs_c = xi_of(a, b) + xi_of(ab, c)
        rhs_c = xi_of(a, bc) + xi_of(b, c)
        rep.cocycle_ok = (lhs_c - rhs_c).truncate(d).is_zero()
    # random exact trials
    if trials and law.evaluator is not None:
        rng = random.Random(seed)
        rep.trials = trials
        for k in range(trials):
            g1, g2, g3 = (_random_point(rng, chart, rotations) for _ in range(3))
            try:
                l1 = law.evaluator(law.evaluator(g1, g2), g3)
                r1 = law.evaluator(g1, law.evaluator(g2, g3))
            except DomainError:
                continue
            for n in names:
                diff = l1[n] - r1[n]
                if rotations:
                    if abs(float(diff)) > 1e-12 * max(1.0, abs(float(l1[n]))):
                        rep.trial_failures.append((k, n, float(diff)))
                elif diff != 0:
                    rep.trial_failures.append((k, n, diff))
    return rep
