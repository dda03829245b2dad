"""Invariant vector fields, the quantization form and its kernel.

Vector fields and differential forms have TruncatedPoly coefficients on a
single chart.  Forms of any degree are stored as maps from increasing
coordinate-index tuples to coefficients, so ``{(0, 2): p}`` is p dc0∧dc2.

Conventions
-----------
* Left fields differentiate law(g, h) in h at h = e and satisfy
  [X^L_a, X^L_b] = C_ab^c X^L_c; right fields differentiate law(h, g)
  and satisfy [X^R_a, X^R_b] = -C_ab^c X^R_c.
* Θ = ħ θ^φ, the phase row of the left-invariant canonical form, so Θ(Ξ) = ħ.
* L_X ω = i_X dω + d i_X ω.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import sympy as sp

from .formal_group import PRIME, GroupLaw, LawError
from .linalg import nullspace
from .poly import Chart, TruncatedPoly

__all__ = [
    "PolyField",
    "PolyForm",
    "combination",
    "one_form",
    "differential",
    "InvarianceResult",
    "KernelBasis",
    "NotLiftable",
    "left_invariant_fields",
    "right_invariant_fields",
    "frame_matrix",
    "theta",
    "exterior_derivative",
    "interior",
    "lie_derivative",
    "homotopy_potential",
    "characteristic_module",
    "noether",
    "hamiltonian_lift",
    "check_strict_invariance",
    "pullback",
    "to_sympy",
    "from_sympy",
]


class NotLiftable(ValueError):
    """i_X dθ = -df, i_X θ = f has no unique polynomial solution."""


# -- vector fields -------------------------------------------------------------

class PolyField:
    """Vector field Σ X^a ∂/∂c_a with polynomial coefficients."""

    __slots__ = ("chart", "components", "degree")

    def __init__(self, chart: Chart, components: Mapping[str, TruncatedPoly], degree: int | None = None):
        comps = {}
        degs = []
        for n, p in components.items():
            chart.index(n)
            if p.chart != chart:
                raise LawError("field component lives on another chart")
            degs.append(p.degree)
            if not p.is_zero():
                comps[n] = p
        self.chart = chart
        self.degree = degree if degree is not None else (min(degs) if degs else 0)
        self.components = {n: comps[n].with_degree(self.degree) if comps[n].degree != self.degree else comps[n]
                           for n in chart.names if n in comps}

    @classmethod
    def coordinate(cls, chart: Chart, name: str, degree: int) -> "PolyField":
        return cls(chart, {name: TruncatedPoly.const(chart, 1, degree)}, degree)

    def component(self, name: str) -> TruncatedPoly:
        return self.components.get(name, TruncatedPoly.zero(self.chart, self.degree))

    def __call__(self, f: TruncatedPoly) -> TruncatedPoly:
        acc = TruncatedPoly.zero(self.chart, min(self.degree, f.degree))
        for n, c in self.components.items():
            d = f.partial(n)
            if not d.is_zero():
                acc = acc + c * d
        return acc

    def bracket(self, other: "PolyField") -> "PolyField":
        d = min(self.degree, other.degree)
        out = {}
        for n in self.chart.names:
            v = self(other.component(n)) - other(self.component(n))
            if not v.is_zero():
                out[n] = v
        return PolyField(self.chart, out, d)

    def __add__(self, other: "PolyField") -> "PolyField":
        d = min(self.degree, other.degree)
        out = dict(self.components)
        for n, p in other.components.items():
            out[n] = out[n] + p if n in out else p
        return PolyField(self.chart, out, d)

    def __neg__(self):
        return PolyField(self.chart, {n: -p for n, p in self.components.items()}, self.degree)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "PolyField":
        return PolyField(self.chart, {n: p.scale(k) for n, p in self.components.items()}, self.degree)

    def times(self, f: TruncatedPoly) -> "PolyField":
        return PolyField(self.chart, {n: p * f for n, p in self.components.items()}, min(self.degree, f.degree))

    def truncate(self, d: int) -> "PolyField":
        return PolyField(self.chart, {n: p.truncate(d) for n, p in self.components.items()}, min(d, self.degree))

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, PolyField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def at(self, point: Mapping) -> dict:
        return {n: p.evaluate(point) for n, p in self.components.items()}

    def to_text(self) -> str:
        if not self.components:
            return "0"
        return "\n".join(f"d/d{n}: {p.to_text()}" for n, p in self.components.items())

    def __repr__(self):
        inner = ", ".join(f"{n}: {p.to_text()}" for n, p in self.components.items())
        return f"PolyField({{{inner}}})"


def combination(fields: Mapping[str, PolyField], coeffs: Mapping[str, Fraction]) -> PolyField:
    acc = None
    for lab, c in coeffs.items():
        if not c:
            continue
        term = fields[lab].scale(c)
        acc = term if acc is None else acc + term
    if acc is None:
        some = next(iter(fields.values()))
        return PolyField(some.chart, {}, some.degree)
    return acc


# -- forms ---------------------------------------------------------------------

def _sort_sign(idx: Sequence[int]):
    """Sort with sign of the permutation; returns (None, 0) on a repeated index."""
    idx = list(idx)
    if len(set(idx)) < len(idx):
        return None, 0
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return tuple(idx), sign


class PolyForm:
    """Differential k-form Σ ω_I dc^I with polynomial coefficients."""

    __slots__ = ("chart", "degree", "coeffs", "poly_degree", "frame", "hbar")

    def __init__(self, chart: Chart, degree: int, coeffs: Mapping, poly_degree: int | None = None,
                 frame: Mapping[str, PolyField] | None = None, hbar=1):
        clean: dict = {}
        degs = []
        for key, p in coeffs.items():
            if isinstance(key, str):
                key = (key,)
            key = tuple(chart.index(k) if isinstance(k, str) else k for k in key)
            if len(key) != degree:
                raise ValueError(f"coefficient key {key} does not match form degree {degree}")
            skey, sign = _sort_sign(key)
            degs.append(p.degree)
            if skey is None or p.is_zero():
                continue
            val = p if sign == 1 else -p
            clean[skey] = clean[skey] + val if skey in clean else val
        self.chart = chart
        self.degree = degree
        self.poly_degree = poly_degree if poly_degree is not None else (min(degs) if degs else 0)
        self.coeffs = {k: (v.with_degree(self.poly_degree) if v.degree != self.poly_degree else v)
                       for k, v in sorted(clean.items()) if not v.is_zero()}
        self.frame = frame
        self.hbar = Fraction(hbar)

    def coefficient(self, *names) -> TruncatedPoly:
        key = tuple(self.chart.index(n) for n in names)
        skey, sign = _sort_sign(key)
        zero = TruncatedPoly.zero(self.chart, self.poly_degree)
        if skey is None or skey not in self.coeffs:
            return zero
        return self.coeffs[skey] if sign == 1 else -self.coeffs[skey]

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for k, p in other.coeffs.items():
            out[k] = out[k] + p if k in out else p
        return PolyForm(self.chart, self.degree, out, min(self.poly_degree, other.poly_degree),
                        self.frame, self.hbar)

    def __neg__(self):
        return PolyForm(self.chart, self.degree, {k: -p for k, p in self.coeffs.items()}, self.poly_degree,
                        self.frame, self.hbar)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "PolyForm":
        return PolyForm(self.chart, self.degree, {kk: p.scale(k) for kk, p in self.coeffs.items()},
                        self.poly_degree, self.frame, self.hbar)

    def truncate(self, d: int) -> "PolyForm":
        return PolyForm(self.chart, self.degree, {k: p.truncate(d) for k, p in self.coeffs.items()},
                        min(d, self.poly_degree), self.frame, self.hbar)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.chart == other.chart and self.degree == other.degree and self.coeffs == other.coeffs

    def terms(self) -> list[tuple[tuple[str, ...], TruncatedPoly]]:
        return [(tuple(self.chart.names[i] for i in k), p) for k, p in self.coeffs.items()]

    def to_text(self) -> str:
        """One line per basis element, e.g. ``dv1^dx1: 1``."""
        if not self.coeffs:
            return "0"
        lines = []
        for names, p in self.terms():
            lines.append(f"{'^'.join('d' + n for n in names)}: {p.to_text()}")
        return "\n".join(lines)

    def __repr__(self):
        return f"PolyForm(degree={self.degree}, {self.to_text()!r})"


def one_form(chart: Chart, coeffs: Mapping[str, TruncatedPoly], degree: int | None = None, **kw) -> PolyForm:
    return PolyForm(chart, 1, {(n,): p for n, p in coeffs.items()}, degree, **kw)


def differential(f: TruncatedPoly) -> PolyForm:
    return PolyForm(f.chart, 1, {(n,): f.partial(n) for n in f.chart.names}, f.degree)


def exterior_derivative(omega) -> PolyForm:
    """d of a k-form (a TruncatedPoly counts as a 0-form)."""
    if isinstance(omega, TruncatedPoly):
        return differential(omega)
    out: dict = {}
    for key, p in omega.coeffs.items():
        for a, name in enumerate(omega.chart.names):
            d = p.partial(name)
            if d.is_zero():
                continue
            skey, sign = _sort_sign((a,) + key)
            if skey is None:
                continue
            val = d if sign == 1 else -d
            out[skey] = out[skey] + val if skey in out else val
    return PolyForm(omega.chart, omega.degree + 1, out, omega.poly_degree, omega.frame, omega.hbar)


def interior(X: PolyField, omega: PolyForm):
    """i_X ω: a TruncatedPoly for 1-forms, a (k-1)-form otherwise."""
    d = min(X.degree, omega.poly_degree)
    if omega.degree == 1:
        acc = TruncatedPoly.zero(omega.chart, d)
        for (i,), p in omega.coeffs.items():
            n = omega.chart.names[i]
            if n in X.components:
                acc = acc + X.components[n] * p
        return acc
    out: dict = {}
    for key, p in omega.coeffs.items():
        for j, i in enumerate(key):
            n = omega.chart.names[i]
            if n not in X.components:
                continue
            rest = key[:j] + key[j + 1:]
            val = X.components[n] * p
            if j % 2:
                val = -val
            out[rest] = out[rest] + val if rest in out else val
    return PolyForm(omega.chart, omega.degree - 1, out, d, omega.frame, omega.hbar)


def lie_derivative(X: PolyField, omega):
    """Cartan's formula L_X ω = i_X dω + d(i_X ω)."""
    if isinstance(omega, TruncatedPoly):
        return X(omega)
    first = interior(X, exterior_derivative(omega))
    if omega.degree == 1:
        return first + differential(interior(X, omega))
    return first + exterior_derivative(interior(X, omega))


def homotopy_potential(omega: PolyForm) -> TruncatedPoly:
    """g with dg = ω for a closed polynomial 1-form, g(0) = 0.

    Radial homotopy: a monomial of degree k in ω_a contributes
    mono·c_a/(k + 1).
    """
    if omega.degree != 1:
        raise ValueError("potential only implemented for 1-forms")
    chart = omega.chart
    d = omega.poly_degree + 1
    acc = TruncatedPoly.zero(chart, d)
    for (i,), p in omega.coeffs.items():
        out = {}
        for mono, c in p.terms.items():
            out[tuple(sorted(mono + (i,)))] = out.get(tuple(sorted(mono + (i,))), 0) + c / (len(mono) + 1)
        acc = acc + TruncatedPoly(chart, out, d)
    return acc


# -- fields from group laws -----------------------------------------------------

def _at_identity(law: GroupLaw, poly: TruncatedPoly, side: str, degree: int) -> TruncatedPoly:
    """Set one argument to e and move the other onto the group chart."""
    chart = law.chart
    pc = law.pair
    if side == "right":  # keep primed, kill unprimed
        keep = {n + PRIME: n for n in chart.names}
    else:
        keep = {n: n for n in chart.names}
    terms = {}
    idx_map = {}
    for i, n in enumerate(pc.names):
        idx_map[i] = chart.index(keep[n]) if n in keep else None
    for mono, c in poly.terms.items():
        if any(idx_map[i] is None for i in mono):
            continue
        terms[tuple(sorted(idx_map[i] for i in mono))] = c
    return TruncatedPoly(chart, terms, degree)


def left_invariant_fields(law: GroupLaw) -> dict[str, PolyField]:
    """X^L_a = Σ_b ∂law_b(g, h)/∂h_a |_{h=e} ∂/∂g_b, exact through degree law.degree - 1."""
    d = law.degree - 1
    if d < 1:
        raise LawError("need a law of degree >= 2 to obtain invariant fields")
    fields = {}
    for a in law.chart.names:
        comps = {b: _at_identity(law, law.composition[b].partial(a), "right", d) for b in law.chart.names}
        fields[a] = PolyField(law.chart, comps, d)
    _check_frame(law, fields)
    return fields


def right_invariant_fields(law: GroupLaw) -> dict[str, PolyField]:
    """X^R_a = Σ_b ∂law_b(h, g)/∂h_a |_{h=e} ∂/∂g_b."""
    d = law.degree - 1
    if d < 1:
        raise LawError("need a law of degree >= 2 to obtain invariant fields")
    fields = {}
    for a in law.chart.names:
        comps = {b: _at_identity(law, law.composition[b].partial(a + PRIME), "left", d) for b in law.chart.names}
        fields[a] = PolyField(law.chart, comps, d)
    _check_frame(law, fields)
    return fields


def _check_frame(law, fields):
    for a, X in fields.items():
        for b in law.chart.names:
            want = 1 if a == b else 0
            if X.component(b).constant() != want:
                raise LawError("Jacobian of the law at the identity is singular")


def frame_matrix(fields: Mapping[str, PolyField], chart: Chart) -> list[list[TruncatedPoly]]:
    """L[b][a] = component b of field a (fields in chart order)."""
    return [[fields[a].component(b) for a in chart.names] for b in chart.names]


def theta(law: GroupLaw, fields: Mapping[str, PolyField] | None = None) -> PolyForm:
    """Θ = ħ × phase row of the dual coframe of the left fields."""
    ph = law.phase()
    if ph is None:
        raise LawError("law has no phase coordinate")
    fields = fields or left_invariant_fields(law)
    chart = law.chart
    d = law.degree - 1
    names = chart.names
    L = frame_matrix(fields, chart)
    n = len(names)
    N = [[L[b][a] - (1 if a == b else 0) for a in range(n)] for b in range(n)]
    # row r = e_φ Σ (-N)^k
    iph = chart.index(ph)
    row = [TruncatedPoly.const(chart, int(i == iph), d) for i in range(n)]
    total = list(row)
    for _ in range(d):
        new = []
        for a in range(n):
            acc = TruncatedPoly.zero(chart, d)
            for b in range(n):
                if not row[b].is_zero() and not N[b][a].is_zero():
                    acc = acc - row[b] * N[b][a]
            new.append(acc)
        row = new
        if all(p.is_zero() for p in row):
            break
        total = [t + r for t, r in zip(total, row)]
    hbar = Fraction(law.constants.get("hbar", 1))
    return PolyForm(chart, 1, {(i,): total[i].scale(hbar) for i in range(n)}, d, frame=fields, hbar=hbar)


# -- kernels -------------------------------------------------------------------

@dataclass
class KernelBasis:
    generators: list[PolyField]
    rank: int
    combinations: list[dict] = field(default_factory=list)
    quotient_dimension: int | None = None
    verified: bool = True

    def to_text(self) -> str:
        lines = [f"rank: {self.rank}"]
        if self.quotient_dimension is not None:
            lines.append(f"quotient_dimension: {self.quotient_dimension}")
        for k, X in enumerate(self.generators):
            if self.combinations:
                combo = " + ".join(f"({c})*X_{lab}" for lab, c in self.combinations[k].items())
                lines.append(f"generator {k}: {combo}")
            else:
                lines.append(f"generator {k}:")
            for line in X.to_text().splitlines():
                lines.append("    " + line)
        return "\n".join(lines)


def _values_at(p: TruncatedPoly, point) -> Fraction:
    return p.evaluate(point)


def characteristic_module(th: PolyForm, frame: Mapping[str, PolyField] | None = None) -> KernelBasis:
    """Ker Θ ∩ Ker dΘ.

    With a left-invariant frame the kernel is spanned by constant
    combinations of frame fields, found from the identity values of Θ and
    dΘ (row reduction with chart-order pivots) and then verified
    symbolically.  Without a frame the kernel is computed over rational
    functions with sympy.  A form without a phase coordinate has Θ-condition
    dropped: the result is Ker dΘ normalised by dt(X) = 1 when possible.
    """
    frame = frame if frame is not None else th.frame
    chart = th.chart
    dth = exterior_derivative(th)
    phase = chart.phase()
    if frame is not None:
        names = chart.names
        origin = {n: 0 for n in names}
        rows = [[_values_at(th.coefficient(a), origin) for a in names]]
        for b in names:
            rows.append([_values_at(dth.coefficient(a, b), origin) for a in names])
        basis = nullspace(rows, len(names))
        gens, combos = [], []
        check_deg = th.poly_degree - 1
        verified = True
        for vec in basis:
            combo = {names[i]: c for i, c in enumerate(vec) if c}
            X = combination(frame, combo)
            r1 = interior(X, th).truncate(check_deg)
            r2 = interior(X, dth).truncate(check_deg)
            if not r1.is_zero() or not r2.is_zero():
                verified = False
            gens.append(X)
            combos.append(combo)
        rank = len(gens)
        qdim = len(names) - (1 if phase else 0) - rank
        return KernelBasis(gens, rank, combos, qdim, verified)
    return _kernel_sympy(th, dth, use_theta=phase is not None)


def to_sympy(p: TruncatedPoly, symbols: Mapping[str, sp.Symbol] | None = None):
    syms = symbols or {n: sp.Symbol(n) for n in p.chart.names}
    ordered = [syms[n] for n in p.chart.names]
    expr = sp.Integer(0)
    for mono, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator)
        for i in mono:
            term *= ordered[i]
        expr += term
    return expr


def from_sympy(expr, chart: Chart, degree: int, symbols: Mapping[str, sp.Symbol] | None = None) -> TruncatedPoly:
    syms = symbols or {n: sp.Symbol(n) for n in chart.names}
    ordered = [syms[n] for n in chart.names]
    expr = sp.expand(expr)
    if expr == 0:
        return TruncatedPoly.zero(chart, degree)
    poly = sp.Poly(expr, *ordered)
    if poly.domain.is_Composite or not (poly.domain.is_QQ or poly.domain.is_ZZ):
        raise ValueError("expression is not a rational polynomial in the chart coordinates")
    terms = {}
    for exps, c in poly.terms():
        mono = tuple(i for i, e in enumerate(exps) for _ in range(e))
        terms[mono] = Fraction(int(c.p), int(c.q))
    return TruncatedPoly(chart, terms, degree)


def _is_polynomial(expr, syms) -> bool:
    expr = sp.cancel(sp.together(expr))
    num, den = sp.fraction(expr)
    return not den.free_symbols & set(syms)


def _kernel_sympy(th: PolyForm, dth: PolyForm, use_theta: bool) -> KernelBasis:
    chart = th.chart
    names = chart.names
    syms = {n: sp.Symbol(n) for n in names}
    rows = []
    if use_theta:
        rows.append([to_sympy(th.coefficient(a), syms) for a in names])
    for b in names:
        rows.append([to_sympy(dth.coefficient(a, b), syms) for a in names])
    M = sp.Matrix(rows)
    basis = M.nullspace(simplify=True)
    gens = []
    time_names = [n for n, r in zip(names, chart.roles) if r == "time"]
    deg = th.poly_degree
    for vec in basis:
        vec = [sp.cancel(v) for v in vec]
        # normalise: dt(X) = 1 if possible, else clear denominators
        pivot = None
        for n in time_names + list(names):
            v = vec[names.index(n)]
            if v != 0 and all(_is_polynomial(w / v, syms.values()) for w in vec):
                pivot = v
                break
        if pivot is not None:
            vec = [sp.cancel(w / pivot) for w in vec]
        else:
            dens = [sp.fraction(sp.together(w))[1] for w in vec]
            lcm = sp.lcm(dens) if dens else 1
            vec = [sp.cancel(w * lcm) for w in vec]
        comps = {n: from_sympy(vec[i], chart, deg, syms) for i, n in enumerate(names) if vec[i] != 0}
        gens.append(PolyField(chart, comps, deg))
    rank = len(gens)
    qdim = len(names) - (1 if use_theta else 0) - rank
    return KernelBasis(gens, rank, [], qdim, True)


def noether(th: PolyForm, right_fields: Mapping[str, PolyField]) -> dict[str, TruncatedPoly]:
    """Noether invariants i_{X^R} Θ."""
    return {a: interior(X, th) for a, X in right_fields.items()}


# -- prequantization lift -------------------------------------------------------

def hamiltonian_lift(f: TruncatedPoly, th: PolyForm) -> PolyField:
    """Solve i_X dθ = -df and i_X θ = f for X.

    With this convention {f, g} = X_g(f) and [X_f, X_g] = -X_{{f,g}}.
    Raises NotLiftable when the system is inconsistent, underdetermined, or
    the solution is not polynomial.
    """
    chart = th.chart
    names = chart.names
    if f.chart != chart:
        raise LawError("function and form live on different charts")
    if f.is_zero():
        return PolyField(chart, {}, th.poly_degree)
    syms = {n: sp.Symbol(n) for n in names}
    dth = exterior_derivative(th)
    A, rhs = [], []
    A.append([to_sympy(th.coefficient(a), syms) for a in names])
    rhs.append(to_sympy(f, syms))
    for b in names:
        A.append([to_sympy(dth.coefficient(a, b), syms) for a in names])
        rhs.append(-to_sympy(f.partial(b), syms))
    M = sp.Matrix(A)
    B = sp.Matrix(rhs)
    try:
        sol, params = M.gauss_jordan_solve(B)
    except ValueError:
        raise NotLiftable(f"i_X dθ = -df, i_X θ = f is inconsistent for f = {f.to_text()}") from None
    if params.shape[0]:
        raise NotLiftable(f"lift of {f.to_text()} is not unique: {params.shape[0]} free parameter(s)")
    deg = min(th.poly_degree, f.degree)
    comps = {}
    for i, n in enumerate(names):
        v = sp.cancel(sol[i])
        if v == 0:
            continue
        if not _is_polynomial(v, syms.values()):
            raise NotLiftable(f"component {n} of the lift is not polynomial: {v}")
        comps[n] = from_sympy(v, chart, deg, syms)
    return PolyField(chart, comps, deg)


# -- invariance classification ----------------------------------------------------

@dataclass
class InvarianceResult:
    status: str  # "strict", "semi" or "neither"
    lie: PolyForm
    g: TruncatedPoly | None = None

    def to_text(self) -> str:
        if self.status == "semi":
            return f"semi-invariant: L_X theta = d({self.g.to_text()})"
        if self.status == "strict":
            return "strict: L_X theta = 0"
        return "neither: L_X theta is not closed\n" + self.lie.to_text()


def check_strict_invariance(th: PolyForm, fields: Sequence[PolyField] | Mapping[str, PolyField],
                            degree: int | None = None) -> dict:
    """Classify each field by its Lie derivative of θ.

    Returns ``{key: InvarianceResult}``: strict when L_X θ = 0, semi when
    L_X θ = dg (g returned, g(0) = 0), neither otherwise.  ``degree`` limits
    the comparison (default: the coefficient degree of the result).
    """
    items = fields.items() if isinstance(fields, Mapping) else enumerate(fields)
    out = {}
    for key, X in items:
        lie = lie_derivative(X, th)
        if degree is not None:
            lie = lie.truncate(degree)
        if lie.is_zero():
            out[key] = InvarianceResult("strict", lie)
            continue
        closed = exterior_derivative(lie)
        if degree is not None:
            closed = closed.truncate(degree - 1)
        if closed.is_zero():
            out[key] = InvarianceResult("semi", lie, homotopy_potential(lie))
        else:
            out[key] = InvarianceResult("neither", lie)
    return out


def pullback(omega: PolyForm, bindings: Mapping[str, TruncatedPoly]) -> PolyForm:
    """Pull a 1-form back along old_c = bindings[old_c](new coordinates).

    Unbound coordinates map to themselves; bindings live on the same chart.
    """
    if omega.degree != 1:
        raise ValueError("pullback implemented for 1-forms (use d of the pulled-back form for 2-forms)")
    chart = omega.chart
    d = omega.poly_degree
    images = {n: bindings.get(n, TruncatedPoly.var(chart, n, d)) for n in chart.names}
    out: dict = {}
    for (i,), p in omega.coeffs.items():
        n = chart.names[i]
        pv = p.substitute(images, target=chart, degree=d)
        phi = images[n]
        for b in chart.names:
            db = phi.partial(b)
            if db.is_zero():
                continue
            val = pv * db
            out[(chart.index(b),)] = out[(chart.index(b),)] + val if (chart.index(b),) in out else val
    return PolyForm(chart, 1, out, d, None, omega.hbar)
