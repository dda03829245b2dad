"""Equations of motion, fixed-step integration, invariant monitoring and κ scans.

States are packed as y = (x1, x2, x3, v1, v2, v3, φ) with t carried alongside.

Force laws
----------
lorentz      m dv/dt = q [v∧(∇∧A) - ∇A⁰ - ∂A/∂t]
             dφ/dt   = -(1/ħ)[½ m v² + q (v·A - A⁰)]
electrograv  (m + κq) dv/dt = F_1 + (g/c) F_2 + (g/c) (F_3 + F_4) + (κq/2) F_5
             (an overall factor c divided out), with ∂₀ = (1/c)∂_t
             F_1 = q [v∧(∇∧A) - ∂A/∂t - ∇A⁰]              (the Lorentz bracket)
             F_2 = ∂₀h + ∇h⁰⁰ - v∧(∇∧h)
             F_3 = ¼ [-2∇(h⁰⁰²) + ∇(h·h)]
             F_4 = ¼ [-∂₀(h⁰⁰h) + v∧∇∧(h⁰⁰h) + ∂₀(H·h) - v∧∇∧(H·h)]
             F_5 = ¼∇(h·h) + ∂₀h - v∧(∇∧h)
             where h = (h⁰¹, h⁰², h⁰³) and H = (h^{ij}).
newtonian    1+1 gravity with potential term h dt in the Cartan form:
             dx/dt = p/m, dp/dt = ∂h/∂x, dφ/dt = -(p²/2m + h)/ħ.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .fieldexpr import (
    ZERO,
    EvalError,
    Expr,
    FieldSpec,
    compile_expr,
    differentiate,
    parse,
    vector_ops,
)

__all__ = [
    "DynamicsError",
    "BlowupError",
    "SingularMass",
    "ValidityError",
    "ParticleState",
    "ForceModel",
    "CompiledFields",
    "Trajectory",
    "DEFAULT_TOGGLES",
    "em_force",
    "lorentz_rhs",
    "electrograv_lines",
    "electrograv_rhs",
    "newtonian_1p1_rhs",
    "make_rhs",
    "integrate",
    "monitor_invariants",
    "kappa_scan",
    "cyclotron_oracle",
    "CSV_HEADER",
    "SCAN_HEADER",
    "Scenario",
    "normalise_constants",
    "report_text",
    "scan_csv",
]

CSV_HEADER = "step,t,x1,x2,x3,v1,v2,v3,phase"
DEFAULT_TOGGLES = frozenset({1, 2, 3, 5})


class DynamicsError(RuntimeError):
    pass


class BlowupError(DynamicsError):
    def __init__(self, step: int, t: float, message: str = "non-finite state"):
        super().__init__(f"{message} at step {step} (t = {t!r})")
        self.step = step
        self.t = t


class SingularMass(DynamicsError):
    pass


class ValidityError(DynamicsError):
    pass


@dataclass
class ParticleState:
    t: float
    x: tuple
    v: tuple
    phase: float = 0.0

    def __post_init__(self):
        self.t = float(self.t)
        self.x = tuple(float(a) for a in self.x)
        self.v = tuple(float(a) for a in self.v)
        self.phase = float(self.phase)
        if len(self.x) != 3 or len(self.v) != 3:
            raise ValueError("x and v must be 3-vectors")
        if not all(math.isfinite(a) for a in (self.t, self.phase, *self.x, *self.v)):
            raise ValueError("state components must be finite")

    def array(self) -> np.ndarray:
        return np.array([*self.x, *self.v, self.phase], dtype=float)

    @classmethod
    def from_array(cls, t: float, y: Sequence[float]) -> "ParticleState":
        return cls(t, y[0:3], y[3:6], y[6])


@dataclass
class ForceModel:
    mode: str = "lorentz"  # lorentz | electrograv | newtonian_gravity_1p1
    constants: dict = field(default_factory=dict)
    toggles: frozenset = DEFAULT_TOGGLES
    line4_reading: str = "printed"  # printed | flipped
    vmax_fraction: float | None = 0.3
    potential: Expr | None = None  # h(t, x1) for the 1+1 Newtonian mode

    MODES = ("lorentz", "electrograv", "newtonian_gravity_1p1")

    def __post_init__(self):
        if self.mode not in self.MODES:
            raise ValueError(f"unknown force model {self.mode!r}; expected one of {self.MODES}")
        self.constants = normalise_constants(self.constants)
        self.toggles = frozenset(int(t) for t in self.toggles)
        if not self.toggles <= {1, 2, 3, 4, 5}:
            raise ValueError(f"toggles must be a subset of 1..5, got {sorted(self.toggles)}")
        if self.line4_reading not in ("printed", "flipped"):
            raise ValueError("line4_reading must be 'printed' or 'flipped'")
        if isinstance(self.potential, str):
            self.potential = parse(self.potential)

    @property
    def inertial(self) -> float:
        c = self.constants
        return c["m"] + c["kappa"] * c["q"]


def normalise_constants(constants: Mapping | None) -> dict:
    """Float constants with defaults m = q = ħ = c = 1, κ = 0, g = m c.

    Strings are read as exact fractions first ("1/137", "1e-8"); g may be "mc".
    """
    c = {"m": 1.0, "q": 1.0, "hbar": 1.0, "c": 1.0, "kappa": 0.0}
    g = None
    for k, v in (constants or {}).items():
        if k == "g":
            g = v
            continue
        c[k] = float(Fraction(v.strip())) if isinstance(v, str) else float(v)
    if g is None or (isinstance(g, str) and g.strip() == "mc"):
        c["g"] = c["m"] * c["c"]
    else:
        c["g"] = float(Fraction(g.strip())) if isinstance(g, str) else float(g)
    return c


class CompiledFields:
    """Fast evaluators for the potentials and every derived field."""

    def __init__(self, spec: FieldSpec, c: float = 1.0):
        self.spec = spec
        p = spec.params
        self.A0 = compile_expr(spec.A["A0"], p)
        self.A = [compile_expr(spec.A[f"A{i}"], p) for i in (1, 2, 3)]
        ops = vector_ops(spec, Fraction(c))
        self.ops = {k: [compile_expr(e, p) for e in v] for k, v in ops.items()}
        self.zero = {k: all(e == ZERO for e in v) for k, v in ops.items()}
        self.gravity = spec.has_gravity()
        self.static = all(
            differentiate(e, "t") == ZERO for e in list(spec.A.values()) + list(spec.h.values())
        )
        self.invariant_dirs = tuple(
            all(differentiate(spec.A[k], f"x{i}") == ZERO for k in ("A0", "A1", "A2", "A3"))
            for i in (1, 2, 3)
        )
        self.empty = all(e == ZERO for e in spec.A.values()) and not self.gravity

    def get(self, key: str, t: float, x) -> np.ndarray:
        f = self.ops[key]
        return np.array([f[0](t, *x), f[1](t, *x), f[2](t, *x)])

    def potentials(self, t: float, x):
        return self.A0(t, *x), np.array([a(t, *x) for a in self.A])


def _is_normal(c) -> bool:
    return isinstance(c, dict) and c.keys() >= {"m", "q", "hbar", "c", "kappa", "g"} and all(
        type(v) is float for v in c.values())


def _fields(f, c=1.0) -> CompiledFields:
    if isinstance(f, CompiledFields):
        return f
    return CompiledFields(f, c)


def em_force(F: CompiledFields, t: float, x, v, q: float) -> np.ndarray:
    """q [v∧(∇∧A) - ∇A⁰ - ∂A/∂t]."""
    B = F.get("curl_A", t, x)
    return q * (np.cross(v, B) - F.get("grad_A0", t, x) - F.get("dA_dt", t, x))


def _phase_rate(F: CompiledFields, t, x, v, m, q, hbar) -> float:
    A0, A = F.potentials(t, x)
    return -(0.5 * m * float(np.dot(v, v)) + q * (float(np.dot(v, A)) - A0)) / hbar


def _unpack(s):
    if isinstance(s, ParticleState):
        return s.t, s.array()
    t, y = s
    return float(t), np.asarray(y, dtype=float)


def lorentz_rhs(s, f, constants: Mapping | None = None) -> np.ndarray:
    """dy/dt for the Lorentz force; ``s`` is a ParticleState or (t, y)."""
    c = constants if _is_normal(constants) else normalise_constants(constants)
    F = _fields(f, c["c"])
    t, y = _unpack(s)
    x, v = y[0:3], y[3:6]
    m, q = c["m"], c["q"]
    a = em_force(F, t, x, v, q) / m
    return np.concatenate([v, a, [_phase_rate(F, t, x, v, m, q, c["hbar"])]])


def electrograv_lines(s, f, model: ForceModel) -> dict[int, np.ndarray]:
    """Force contributions of the five lines (c divided out), before the mass division.

    Only enabled lines are returned.
    """
    c = model.constants
    F = _fields(f, c["c"])
    t, y = _unpack(s)
    x, v = y[0:3], y[3:6]
    g_c = c["g"] / c["c"]
    kq = c["kappa"] * c["q"]
    out = {}
    on = model.toggles
    if 1 in on:
        out[1] = em_force(F, t, x, v, c["q"])
    if 2 in on:
        G = F.get("d0_h", t, x) + F.get("grad_h00", t, x) - np.cross(v, F.get("curl_h_row", t, x))
        out[2] = g_c * G
    if 3 in on:
        G = 0.25 * (-2.0 * F.get("grad_h00_sq", t, x) + F.get("grad_h_dot_h", t, x))
        out[3] = g_c * G
    if 4 in on:
        G = 0.25 * (
            -F.get("d0_h00h", t, x) + np.cross(v, F.get("curl_h00h", t, x))
            + F.get("d0_Hh", t, x) - np.cross(v, F.get("curl_Hh", t, x))
        )
        if model.line4_reading == "flipped":
            G = -G
        out[4] = g_c * G
    if 5 in on:
        G = 0.25 * F.get("grad_h_dot_h", t, x) + F.get("d0_h", t, x) - np.cross(v, F.get("curl_h_row", t, x))
        out[5] = 0.5 * kq * G
    return out


def electrograv_rhs(s, f, model: ForceModel) -> np.ndarray:
    c = model.constants
    F = _fields(f, c["c"])
    t, y = _unpack(s)
    x, v = y[0:3], y[3:6]
    mass = model.inertial
    if mass == 0:
        raise SingularMass("m + κq = 0: the inertial mass vanishes")
    if model.vmax_fraction is not None:
        speed = math.sqrt(float(np.dot(v, v)))
        if speed >= model.vmax_fraction * c["c"]:
            raise ValidityError(
                f"|v|/c = {speed / c['c']:.6g} exceeds the weak-field cap {model.vmax_fraction}"
            )
    lines = electrograv_lines((t, y), F, model)
    total = None
    for k in sorted(lines):
        contrib = lines[k]
        # adding exact zeros would still flip the sign of -0.0; skip them to keep
        # the κ = 0, h = 0 reduction bit-identical to lorentz_rhs
        if total is None:
            total = contrib
        elif np.any(contrib):
            total = total + contrib
    if total is None:
        total = np.zeros(3)
    a = total / mass
    return np.concatenate([v, a, [_phase_rate(F, t, x, v, c["m"], c["q"], c["hbar"])]])


def newtonian_1p1_rhs(s, h: Expr | str, constants: Mapping | None = None) -> np.ndarray:
    """1+1 Newtonian gravity on (x1, v1, φ); other components stay frozen.

    h(t, x1) is the potential entering the Cartan form as +h dt.
    """
    c = constants if _is_normal(constants) else normalise_constants(constants)
    if isinstance(h, str):
        h = parse(h)
    t, y = _unpack(s)
    m, hbar = c["m"], c["hbar"]
    hf = _h_cache(h)
    x, v1 = y[0], y[3]
    p = m * v1
    dv = hf[1](t, x, 0.0, 0.0) / m
    dphi = -(p * p / (2 * m) + hf[0](t, x, 0.0, 0.0)) / hbar
    return np.array([v1, 0.0, 0.0, dv, 0.0, 0.0, dphi])


_H_CACHE: dict = {}


def _h_cache(h: Expr):
    if h not in _H_CACHE:
        _H_CACHE[h] = (compile_expr(h), compile_expr(differentiate(h, "x1")))
    return _H_CACHE[h]


def make_rhs(model: ForceModel, fields: FieldSpec | CompiledFields | None = None) -> Callable:
    """f(t, y) for ``integrate``."""
    if model.mode == "newtonian_gravity_1p1":
        if model.potential is None:
            raise ValueError("newtonian_gravity_1p1 needs a potential h(t, x1)")
        h = model.potential
        return lambda t, y: newtonian_1p1_rhs((t, y), h, model.constants)
    F = _fields(fields if fields is not None else FieldSpec(), model.constants["c"])
    if model.mode == "lorentz":
        consts = model.constants
        return lambda t, y: lorentz_rhs((t, y), F, consts)
    return lambda t, y: electrograv_rhs((t, y), F, model)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (steps + 1, 7)
    method: str = "rk4"

    def __len__(self):
        return len(self.times)

    def state(self, k: int) -> ParticleState:
        return ParticleState.from_array(self.times[k], self.states[k])

    @property
    def x(self):
        return self.states[:, 0:3]

    @property
    def v(self):
        return self.states[:, 3:6]

    @property
    def phase(self):
        return self.states[:, 6]

    def to_csv(self, stride: int = 1) -> str:
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for k in range(0, len(self.times), stride):
            row = [str(k), repr(float(self.times[k]))] + [repr(float(a)) for a in self.states[k]]
            out.write(",".join(row) + "\n")
        return out.getvalue()


def _rk4_step(f, t, y, dt):
    k1 = f(t, y)
    k2 = f(t + dt / 2, y + dt / 2 * k1)
    k3 = f(t + dt / 2, y + dt / 2 * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _euler_step(f, t, y, dt):
    return y + dt * f(t, y)


_METHODS = {"rk4": _rk4_step, "euler": _euler_step}


def integrate(rhs: Callable, s0: ParticleState, dt: float, steps: int, method: str = "rk4") -> Trajectory:
    """Fixed-step integration; raises BlowupError at the first non-finite state."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    try:
        step = _METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {sorted(_METHODS)}") from None
    ys = np.empty((steps + 1, 7))
    ts = s0.t + dt * np.arange(steps + 1)
    ys[0] = s0.array()
    y = ys[0]
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(steps):
            try:
                y = step(rhs, ts[k], y, dt)
            except (OverflowError, ZeroDivisionError) as exc:
                raise BlowupError(k + 1, float(ts[k + 1]), str(exc)) from None
            except EvalError as exc:
                if not exc.overflow:
                    raise
                raise BlowupError(k + 1, float(ts[k + 1]), str(exc)) from None
            if not np.all(np.isfinite(y)):
                raise BlowupError(k + 1, float(ts[k + 1]))
            ys[k + 1] = y
    return Trajectory(ts, ys, method)


# -- invariants ----------------------------------------------------------------

def _drift(series: np.ndarray) -> float:
    series = np.asarray(series, dtype=float)
    ref = series[0]
    dev = np.max(np.abs(series - ref), axis=0)
    scale = np.abs(ref)
    rel = np.where(scale > 0, dev / np.where(scale > 0, scale, 1.0), dev)
    return float(np.max(rel))


def monitor_invariants(traj: Trajectory, model: ForceModel, fields: FieldSpec | CompiledFields | None = None) -> dict:
    """Time series and max relative drift of the conserved quantities that apply.

    energy        ½ m v² + q A⁰ (static fields only)
    momentum_i    m v_i + q A_i along directions the potentials do not depend on
    K             x - v t (no fields)
    phase_residual φ + (1/ħ)(P²/2m) t (no fields)
    """
    c = model.constants
    m, q, hbar = c["m"], c["q"], c["hbar"]
    F = _fields(fields if fields is not None else FieldSpec(), c["c"])
    t = traj.times
    x, v, phi = traj.x, traj.v, traj.phase
    report: dict = {"series": {}, "drift": {}}
    A0s = np.array([F.A0(tk, *xk) for tk, xk in zip(t, x)])
    As = np.array([[a(tk, *xk) for a in F.A] for tk, xk in zip(t, x)])
    if model.mode == "newtonian_gravity_1p1":
        return report
    if F.static and not F.gravity:
        energy = 0.5 * m * np.sum(v * v, axis=1) + q * A0s
        report["series"]["energy"] = energy
    for i, free in enumerate(F.invariant_dirs):
        if free and not F.gravity:
            report["series"][f"momentum_{i + 1}"] = m * v[:, i] + q * As[:, i]
    if F.empty:
        report["series"]["K"] = x - v * t[:, None]
        P2 = np.sum((m * v) ** 2, axis=1)
        report["series"]["phase_residual"] = phi + P2 / (2 * m) * t / hbar
    for k, s in report["series"].items():
        report["drift"][k] = _drift(s)
    report["max_drift"] = max(report["drift"].values()) if report["drift"] else 0.0
    return report


def report_text(report: dict) -> str:
    lines = []
    for k in sorted(report.get("drift", {})):
        lines.append(f"{k}_max_drift = {report['drift'][k]!r}")
    lines.append(f"max_drift = {report.get('max_drift', 0.0)!r}")
    return "\n".join(lines) + "\n"


# -- oracles and scans -------------------------------------------------------------

def cyclotron_oracle(m: float, q: float, B: float, v: float):
    """Radius, period and angular frequency of the uniform-B orbit."""
    omega = abs(q * B) / m
    return {"radius": m * abs(v) / abs(q * B), "period": 2 * math.pi / omega, "omega": omega}


@dataclass
class Scenario:
    fields: FieldSpec
    state: ParticleState
    duration: float
    steps: int
    constants: dict = field(default_factory=dict)
    toggles: frozenset = DEFAULT_TOGGLES
    line4_reading: str = "printed"
    vmax_fraction: float | None = 0.3


SCAN_HEADER = "kappa,m_eff,m_antiparticle,mass_split,deflection_difference"


def _exact(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(repr(float(v))) if isinstance(v, float) else Fraction(v)


def kappa_scan(scenario: Scenario, kappa_values: Iterable) -> list[dict]:
    """Per-κ effective masses, fractional mass split and ±q deflection difference.

    m_eff = (m + κq)c and m_antiparticle = (m - κq)c; mass_split = 2|κq|/m
    is computed in exact rational arithmetic from the decimal inputs.
    deflection_difference = |x_{+q}(T) - x_{-q}(T)|.
    """
    kappas = [_exact(k) for k in kappa_values]
    if not kappas:
        raise ValueError("kappa list is empty")
    consts = dict(scenario.constants)
    m = _exact(consts.get("m", 1))
    q = _exact(consts.get("q", 1))
    c = _exact(consts.get("c", 1))
    rows = []
    F = CompiledFields(scenario.fields, float(c))
    dt = scenario.duration / scenario.steps
    for k in kappas:
        if m + k * q == 0 or m - k * q == 0:
            raise SingularMass(f"κq = ±m at κ = {k}")
        ends = []
        for sign in (1, -1):
            cc = dict(consts)
            cc["q"] = float(sign * q)
            cc["kappa"] = float(k)
            model = ForceModel("electrograv", cc, scenario.toggles, scenario.line4_reading, scenario.vmax_fraction)
            traj = integrate(make_rhs(model, F), scenario.state, dt, scenario.steps)
            ends.append(traj.x[-1])
        rows.append({
            "kappa": k,
            "m_eff": (m + k * q) * c,
            "m_antiparticle": (m - k * q) * c,
            "mass_split": 2 * abs(k * q) / m,
            "deflection_difference": float(np.linalg.norm(ends[0] - ends[1])),
        })
    return rows


def scan_csv(rows: list[dict]) -> str:
    out = [SCAN_HEADER]
    for r in rows:
        out.append(",".join([
            repr(float(r["kappa"])), repr(float(r["m_eff"])), repr(float(r["m_antiparticle"])),
            repr(float(r["mass_split"])), repr(r["deflection_difference"]),
        ]))
    return "\n".join(out) + "\n"
