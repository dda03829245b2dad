"""Concrete forms and generator sets on small movement-space charts.

These are the hand-written objects that the group-theoretic machinery is
compared against: the Poincaré-Cartan form of a free particle, its Galilei
generators, the 1+1 gravity form with a potential h, and the generators of
the time-dependent translation current algebra acting on it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .catalog import levi_civita
from .geometry import PolyField, PolyForm, one_form
from .poly import Chart, TruncatedPoly

__all__ = [
    "movement_chart",
    "theta_pc",
    "galilei_fields",
    "gravity_chart",
    "theta_gravity",
    "current_fields",
    "extended_current_fields",
    "canonical_chart",
    "theta_canonical",
    "peg_variable_change",
]

DEGREE = 6


def movement_chart(dim: int = 3, phase: bool = False) -> Chart:
    """(t, x, p) chart; names x, p in one dimension and x1.., p1.. otherwise."""
    xs = ["x"] if dim == 1 else [f"x{i}" for i in range(1, dim + 1)]
    ps = ["p"] if dim == 1 else [f"p{i}" for i in range(1, dim + 1)]
    coords = [("t", "time")] + [(n, "space") for n in xs] + [(n, "momentum") for n in ps]
    if phase:
        coords.append(("phi", "phase"))
    return Chart(coords)


def _split(chart: Chart):
    xs = [n for n, r in zip(chart.names, chart.roles) if r == "space"]
    ps = [n for n, r in zip(chart.names, chart.roles) if r == "momentum"]
    return xs, ps


def theta_pc(mass=1, dim: int = 3, hbar=None, degree: int = DEGREE) -> PolyForm:
    """p·dx - (p²/2m) dt, plus ħ dφ when ``hbar`` is given."""
    m = Fraction(mass)
    chart = movement_chart(dim, phase=hbar is not None)
    V = TruncatedPoly.variables(chart, degree)
    xs, ps = _split(chart)
    coeffs = {x: V[p] for x, p in zip(xs, ps)}
    coeffs["t"] = sum((V[p] * V[p] for p in ps), TruncatedPoly.zero(chart, degree)).scale(-1 / (2 * m))
    if hbar is not None:
        coeffs["phi"] = TruncatedPoly.const(chart, hbar, degree)
    return one_form(chart, coeffs, degree, hbar=hbar if hbar is not None else 1)


def galilei_fields(mass=1, dim: int = 3, degree: int = DEGREE, chart: Chart | None = None) -> dict[str, PolyField]:
    """Galilei generators on movement space: ∂_t, ∂_x, t∂_x + m∂_p and rotations."""
    m = Fraction(mass)
    chart = chart or movement_chart(dim)
    V = TruncatedPoly.variables(chart, degree)
    one = TruncatedPoly.const(chart, 1, degree)
    xs, ps = _split(chart)
    out = {"b": PolyField(chart, {"t": one}, degree)}
    for k, (x, p) in enumerate(zip(xs, ps), start=1):
        out[f"a{k}"] = PolyField(chart, {x: one}, degree)
        out[f"V{k}"] = PolyField(chart, {x: V["t"], p: one.scale(m)}, degree)
    if len(xs) == 3:
        for i in range(3):
            comps: dict = {}
            for j in range(3):
                for k in range(3):
                    e = levi_civita(i + 1, j + 1, k + 1)
                    if not e:
                        continue
                    for Y in (xs, ps):
                        term = V[Y[j]].scale(e)
                        comps[Y[k]] = comps[Y[k]] + term if Y[k] in comps else term
            out[f"eps{i + 1}"] = PolyField(chart, comps, degree)
    return out


def gravity_chart() -> Chart:
    return Chart([("t", "time"), ("x", "space"), ("p", "momentum"), ("h", "potential"), ("phi", "phase")])


def theta_gravity(mass=1, hbar=1, degree: int = DEGREE) -> PolyForm:
    """p dx - (p²/2m) dt + h dt + ħ dφ on (t, x, p, h, φ)."""
    m = Fraction(mass)
    chart = gravity_chart()
    V = TruncatedPoly.variables(chart, degree)
    return one_form(chart, {
        "x": V["p"],
        "t": (V["p"] * V["p"]).scale(-1 / (2 * m)) + V["h"],
        "phi": TruncatedPoly.const(chart, hbar, degree),
    }, degree, hbar=hbar)


def _poly_t(chart: Chart, coeffs: Sequence, degree: int) -> TruncatedPoly:
    """f(t) from coefficients [f0, f1, ...]."""
    t = TruncatedPoly.var(chart, "t", degree)
    acc = TruncatedPoly.zero(chart, degree)
    power = TruncatedPoly.const(chart, 1, degree)
    for c in coeffs:
        acc = acc + power.scale(c)
        power = power * t
    return acc


def current_fields(f: Sequence, mass=1, degree: int = DEGREE) -> dict[str, PolyField]:
    """Unextended current-algebra generators f(t)⊗X_b, f(t)⊗X_a, X_V, f(t)⊗X_h.

    ``f`` is the coefficient list of a polynomial in t.
    """
    m = Fraction(mass)
    chart = gravity_chart()
    V = TruncatedPoly.variables(chart, degree)
    fp = _poly_t(chart, f, degree)
    df = fp.partial("t")
    kin = (V["p"] * V["p"]).scale(1 / (2 * m)) - V["h"]
    one = TruncatedPoly.const(chart, 1, degree)
    return {
        "b": PolyField(chart, {"t": fp, "h": kin * df}, degree),
        "a": PolyField(chart, {"x": fp, "h": -(V["p"] * df)}, degree),
        "V": PolyField(chart, {"x": V["t"], "p": one.scale(m)}, degree),
        "h": PolyField(chart, {"h": fp}, degree),
    }


def extended_current_fields(f: Sequence, mass=1, hbar=1, degree: int = DEGREE) -> dict[str, PolyField]:
    """The current-algebra generators with -g/ħ ∂_φ components added.

    Each gets -g/ħ ∂_φ where g solves i_X dΘ' = dg for the gravity form
    without phase term.
    """
    m = Fraction(mass)
    hb = Fraction(hbar)
    chart = gravity_chart()
    V = TruncatedPoly.variables(chart, degree)
    fp = _poly_t(chart, f, degree)
    kin = (V["p"] * V["p"]).scale(1 / (2 * m)) - V["h"]
    base = current_fields(f, mass, degree)
    extra = {
        "b": -(fp * kin).scale(1 / hb),
        "a": (fp * V["p"]).scale(1 / hb),
        "V": -(V["x"].scale(m) - V["p"] * V["t"]).scale(1 / hb),
        "h": fp.scale(-1 / hb),
    }
    return {k: base[k] + PolyField(chart, {"phi": extra[k]}, degree) for k in base}


def canonical_chart(dim: int = 1) -> Chart:
    ks = ["K"] if dim == 1 else [f"K{i}" for i in range(1, dim + 1)]
    ps = ["P"] if dim == 1 else [f"P{i}" for i in range(1, dim + 1)]
    return Chart([(k, "space") for k in ks] + [(p, "momentum") for p in ps] + [("phi", "phase")])


def theta_canonical(hbar=1, dim: int = 1, degree: int = DEGREE) -> PolyForm:
    """Θ = P·dK + ħ dφ."""
    chart = canonical_chart(dim)
    V = TruncatedPoly.variables(chart, degree)
    ks = [n for n, r in zip(chart.names, chart.roles) if r == "space"]
    ps = [n for n, r in zip(chart.names, chart.roles) if r == "momentum"]
    coeffs = {k: V[p] for k, p in zip(ks, ps)}
    coeffs["phi"] = TruncatedPoly.const(chart, hbar, degree)
    return one_form(chart, coeffs, degree, hbar=hbar)


def peg_variable_change(chart: Chart, constants, degree: int = 2) -> dict[str, TruncatedPoly]:
    """Low-order substitution taking the P_EG presymplectic form towards canonical form.

    Returns bindings old coordinate -> polynomial in new coordinates, low
    order only (no higher-order completion).
    """
    V = TruncatedPoly.variables(chart, degree)
    zero = TruncatedPoly.zero(chart, degree)
    eta = [1, -1, -1, -1]
    m, q, k, c, g = (Fraction(constants[n]) for n in ("m", "q", "kappa", "c", "g"))
    mk = (m + k * q) * c

    def E(a, b):
        if a == b:
            return zero
        return V[f"e{a}{b}"] if a < b else -V[f"e{b}{a}"]

    def H(a, b):
        return V[f"h{min(a, b)}{max(a, b)}"]

    out = {}
    for a in range(4):
        acc = V[f"A{a}"]
        for s in range(4):
            acc = acc + ((E(a, s) + H(a, s)) * V[f"A{s}"]).scale(eta[s])
        out[f"A{a}"] = acc
    for i in (1, 2, 3):
        acc = V[f"e0{i}"] + (H(0, 0) * E(0, i)).scale(g / mk)
        for j in (1, 2, 3):
            acc = acc + E(i, j) * E(0, j) - (H(i, j) * E(0, j)).scale(2)
        out[f"e0{i}"] = acc
    for j in (1, 2, 3):
        acc = V[f"h0{j}"]
        for i in (1, 2, 3):
            acc = acc + E(i, j) * H(0, i)
        out[f"h0{j}"] = acc
    acc = V["h00"]
    for i in (1, 2, 3):
        acc = acc - (H(0, i) * E(0, i)).scale(Fraction(1, 4))
    out["h00"] = acc
    return out
