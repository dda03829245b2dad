"""Command-line front end: ``gaqkit <command> [options]``.

Commands
  algebra-check   Jacobi/cocycle checks of a catalog algebra or algebra file
  exponentiate    truncated group law plus group-axiom checks
  derive          law, invariant fields, Θ, dΘ, characteristic module, Noether invariants
  simulate        integrate a trajectory and report invariants
  scan            κ sweep of mass split and charge-conjugate deflection

Every command accepts ``--config FILE`` (INI); command-line flags override
it.  Exit codes: 0 success, 1 check failed, 2 usage or config error,
3 numerical failure.  Outputs are written only after the whole run
succeeds.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .algebra import (
    AlgebraError,
    AlgebraFormatError,
    CocycleError,
    algebra_from_text,
    check_jacobi,
    make_constants,
)
from .catalog import CATALOG_NAMES, catalog, peg_deviations, peg_mixing_terms
from .dynamics import (
    BlowupError,
    DynamicsError,
    ForceModel,
    ParticleState,
    Scenario,
    SingularMass,
    ValidityError,
    integrate,
    kappa_scan,
    make_rhs,
    monitor_invariants,
    report_text,
    scan_csv,
)
from .fieldexpr import EvalError, ExprSyntaxError, FieldSpec, FieldSpecError
from .formal_group import (
    DomainError,
    LawError,
    UnsupportedOrder,
    check_group_axioms,
    closed_form_GE,
    exponentiate,
    group_law_PEG,
)
from .geometry import (
    characteristic_module,
    exterior_derivative,
    left_invariant_fields,
    noether,
    right_invariant_fields,
    theta,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


# -- config --------------------------------------------------------------------

class RunConfig:
    """INI sections: run, constants, state, integration, model, scan, check,
    plus inline field sections (meta, fields, params)."""

    def __init__(self, path: str | None):
        self.path = Path(path) if path else None
        self.cp = configparser.ConfigParser()
        self.cp.optionxform = str
        self.text = ""
        if path:
            try:
                self.text = Path(path).read_text()
                self.cp.read_string(self.text, source=str(path))
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from None
            except configparser.Error as exc:
                raise ConfigError(f"malformed config: {exc}") from None

    def get(self, section: str, key: str, default=None):
        if self.cp.has_option(section, key):
            return self.cp.get(section, key).strip()
        return default

    def section(self, name: str) -> dict:
        return dict(self.cp[name]) if self.cp.has_section(name) else {}

    def resolve(self, p: str) -> Path:
        q = Path(p)
        if not q.is_absolute() and self.path is not None:
            q = self.path.parent / q
        return q


def _parse_constants(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise ConfigError(f"constants must look like name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _constants(args, cfg: RunConfig) -> dict:
    c = cfg.section("constants")
    c.update(_parse_constants(getattr(args, "constants", None)))
    for name in ("kappa", "g"):
        v = getattr(args, name, None)
        if v is not None:
            c[name] = v
    return c


def _exact_constants(raw: dict) -> dict:
    try:
        return make_constants(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad constants: {exc}") from None


def _vector(text: str, what: str) -> tuple:
    try:
        vals = tuple(float(Fraction(s.strip())) for s in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{what} must be three comma-separated numbers, got {text!r}") from None
    if len(vals) != 3:
        raise ConfigError(f"{what} must have three components, got {text!r}")
    return vals


def _number(text, what: str, kind=float):
    try:
        v = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{what} is not a number: {text!r}") from None
    return kind(v)


def _toggles(args, cfg: RunConfig):
    text = getattr(args, "toggles", None) or cfg.get("model", "toggles")
    if text is None:
        return None
    try:
        vals = frozenset(int(s) for s in text.replace(" ", "").split(",") if s)
    except ValueError:
        raise ConfigError(f"toggles must be comma-separated line numbers, got {text!r}") from None
    if not vals <= {1, 2, 3, 4, 5}:
        raise ConfigError(f"toggles must lie in 1..5, got {sorted(vals)}")
    return vals


def _fields(args, cfg: RunConfig) -> FieldSpec:
    path = getattr(args, "fields", None)
    try:
        if path:
            return FieldSpec.load(path)
        ref = cfg.get("run", "fields")
        if ref:
            return FieldSpec.load(cfg.resolve(ref))
        if cfg.cp.has_section("fields"):
            return FieldSpec.from_ini(cfg.text)
        return FieldSpec()
    except FieldSpecError as exc:
        raise ConfigError(f"field spec: {exc}") from None


def _state(cfg: RunConfig) -> ParticleState:
    s = cfg.section("state")
    try:
        return ParticleState(
            _number(s.get("t", "0"), "state.t"),
            _vector(s.get("x", "0,0,0"), "state.x"),
            _vector(s.get("v", "0,0,0"), "state.v"),
            _number(s.get("phase", "0"), "state.phase"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _model(args, cfg: RunConfig) -> ForceModel:
    m = cfg.section("model")
    toggles = _toggles(args, cfg)
    kw = {}
    if toggles is not None:
        kw["toggles"] = toggles
    if "vmax_fraction" in m:
        v = m["vmax_fraction"].strip()
        kw["vmax_fraction"] = None if v.lower() in ("none", "off") else _number(v, "vmax_fraction")
    try:
        return ForceModel(
            m.get("mode", "lorentz").strip(),
            _constants(args, cfg),
            line4_reading=m.get("line4_reading", "printed").strip(),
            potential=m.get("potential"),
            **kw,
        )
    except (ValueError, ZeroDivisionError, ExprSyntaxError) as exc:
        raise ConfigError(f"model: {exc}") from None


def _write_outputs(out_dir: str | None, files: dict[str, str]) -> list[str]:
    """Write all files or none: everything is staged, then renamed into place."""
    if not out_dir:
        return []
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{name}.", suffix=".tmp")
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(text)
            staged.append((tmp, out / name))
    except OSError:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)
    return [str(final) for _, final in staged]


def _algebra(args, cfg: RunConfig, exact: dict):
    path = getattr(args, "algebra_file", None) or cfg.get("run", "algebra_file")
    name = getattr(args, "catalog", None) or cfg.get("run", "catalog")
    if path:
        p = Path(path) if getattr(args, "algebra_file", None) else cfg.resolve(path)
        try:
            return algebra_from_text(p.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read algebra file: {exc}") from None
        except AlgebraFormatError as exc:
            raise ConfigError(f"algebra file {p}: {exc}") from None
    if not name:
        raise ConfigError("give --catalog NAME or --algebra-file PATH")
    if name not in CATALOG_NAMES:
        raise ConfigError(f"unknown catalog algebra {name!r}; choose from {', '.join(sorted(CATALOG_NAMES))}")
    opts = {}
    if name in ("PEG", "PEG_electrograv"):
        opts["reading"] = getattr(args, "reading", None) or cfg.get("run", "reading", "forced")
    if name == "galilei_1p1_gauged":
        opts["D"] = int(cfg.get("run", "D", 3))
    return catalog(name, exact, **opts)


def _order(args, cfg: RunConfig, default: int = 3) -> int:
    v = getattr(args, "order", None)
    if v is None:
        v = cfg.get("run", "order", default)
    try:
        v = int(v)
    except ValueError:
        raise ConfigError(f"order must be an integer, got {v!r}") from None
    if v < 1:
        raise ConfigError("order must be at least 1")
    return v


def _out(args, cfg: RunConfig):
    return getattr(args, "out", None) or cfg.get("run", "out")


# -- commands --------------------------------------------------------------------

def cmd_algebra_check(args) -> int:
    cfg = RunConfig(args.config)
    exact = _exact_constants(_constants(args, cfg))
    alg = _algebra(args, cfg, exact)
    rep = check_jacobi(alg)
    lines = [f"algebra: {alg.name}", f"generators: {len(alg.generators)}", rep.summary()]
    files = {}
    if alg.name.startswith("PEG"):
        mixing = peg_mixing_terms(alg)
        lines.append(f"mixing terms: {'present' if mixing else 'absent'}")
        dev = peg_deviations(exact)
        for reading, info in dev["readings"].items():
            status = "ok" if info.get("jacobi_ok") else "fails"
            extra = f" ({info['violations']} violating triples)" if info.get("violations") else ""
            lines.append(f"reading {reading}: jacobi {status}{extra}")
        files["peg_deviations.json"] = json.dumps(dev, indent=2, sort_keys=True) + "\n"
    text = "\n".join(lines) + "\n"
    files["algebra_check.txt"] = text
    _write_outputs(_out(args, cfg), files)
    sys.stdout.write(text)
    return EXIT_OK if rep.ok else EXIT_CHECK


def _law(args, cfg, exact):
    order = _order(args, cfg)
    closed = getattr(args, "closed_form", False) or cfg.get("run", "closed_form", "no").lower() in ("yes", "true", "1")
    name = getattr(args, "catalog", None) or cfg.get("run", "catalog")
    if closed:
        if name not in ("GE", "GE_electromagnetic"):
            raise ConfigError("--closed-form is only available for the GE catalog algebra")
        return closed_form_GE(exact, degree=max(order, 3))
    if name in ("PEG", "PEG_electrograv") and not (getattr(args, "algebra_file", None) or cfg.get("run", "algebra_file")):
        return group_law_PEG(exact, order=order, fallback=getattr(args, "fallback", False))
    alg = _algebra(args, cfg, exact)
    return exponentiate(alg, order=order)


def cmd_exponentiate(args) -> int:
    cfg = RunConfig(args.config)
    exact = _exact_constants(_constants(args, cfg))
    law = _law(args, cfg, exact)
    seed = int(args.seed if args.seed is not None else cfg.get("run", "seed", 0))
    trials = int(args.trials if args.trials is not None else cfg.get("run", "trials", 20))
    rep = check_group_axioms(law, trials=trials, seed=seed)
    summary = (
        f"law: {law.name}\ndegree: {law.degree}\nidentity: {rep.identity_ok}\ninverse: {rep.inverse_ok}\n"
        f"associativity: {rep.associativity_ok}\ntrials: {rep.trials} (failures {len(rep.trial_failures)})\n"
    )
    _write_outputs(_out(args, cfg), {"law.txt": law.to_text() + "\n", "axioms.txt": summary})
    sys.stdout.write(summary)
    return EXIT_OK if rep.ok else EXIT_CHECK


def _fields_text(fields) -> str:
    blocks = []
    for label, X in fields.items():
        blocks.append(f"[{label}]\n{X.to_text()}")
    return "\n".join(blocks) + "\n"


def cmd_derive(args) -> int:
    cfg = RunConfig(args.config)
    exact = _exact_constants(_constants(args, cfg))
    law = _law(args, cfg, exact)
    if law.phase() is None:
        raise ConfigError(f"{law.name} has no central phase generator; Θ is undefined")
    L = left_invariant_fields(law)
    R = right_invariant_fields(law)
    th = theta(law, L)
    dth = exterior_derivative(th)
    kernel = characteristic_module(th, L)
    inv = noether(th, R)
    files = {
        "law.txt": law.to_text() + "\n",
        "fields_left.txt": _fields_text(L),
        "fields_right.txt": _fields_text(R),
        "theta.txt": th.to_text() + "\n",
        "dtheta.txt": dth.to_text() + "\n",
        "kernel.txt": kernel.to_text() + "\n",
        "noether.txt": "".join(f"{k}: {p.to_text()}\n" for k, p in inv.items()),
    }
    written = _write_outputs(_out(args, cfg), files)
    sys.stdout.write(f"law: {law.name}\nkernel rank: {kernel.rank}\nquotient dimension: {kernel.quotient_dimension}\n")
    sys.stdout.write("theta:\n" + files["theta.txt"])
    if not written:
        sys.stdout.write("(no --out given; nothing written)\n")
    return EXIT_OK if kernel.verified else EXIT_CHECK


def cmd_simulate(args) -> int:
    cfg = RunConfig(args.config)
    model = _model(args, cfg)
    fields = _fields(args, cfg)
    s0 = _state(cfg)
    integ = cfg.section("integration")
    dt = _number(args.dt if args.dt is not None else integ.get("dt", "0.01"), "dt")
    steps = int(args.steps if args.steps is not None else integ.get("steps", "1000"))
    method = integ.get("method", "rk4").strip()
    if dt <= 0 or steps <= 0:
        raise ConfigError("dt and steps must be positive")
    if method not in ("rk4", "euler"):
        raise ConfigError(f"unknown method {method!r}")
    if model.mode == "newtonian_gravity_1p1" and model.potential is None:
        raise ConfigError("newtonian_gravity_1p1 needs model.potential")
    traj = integrate(make_rhs(model, fields), s0, dt, steps, method)
    rep = monitor_invariants(traj, model, fields)
    text = report_text(rep)
    ok = True
    check = cfg.section("check")
    if "max_drift" in check:
        lim = _number(check["max_drift"], "check.max_drift")
        passed = rep.get("max_drift", 0.0) < lim
        text += f"check max_drift < {lim!r}: {'pass' if passed else 'FAIL'}\n"
        ok &= passed
    if "closure" in check:
        lim = _number(check["closure"], "check.closure")
        scale = _number(check.get("closure_scale", "1"), "check.closure_scale")
        err = float(((traj.x[-1] - traj.x[0]) ** 2).sum() ** 0.5) / scale
        passed = err < lim
        text += f"closure_error = {err!r}\ncheck closure < {lim!r}: {'pass' if passed else 'FAIL'}\n"
        ok &= passed
    stride = int(integ.get("stride", "1"))
    _write_outputs(_out(args, cfg), {"trajectory.csv": traj.to_csv(stride), "invariants.txt": text})
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_scan(args) -> int:
    cfg = RunConfig(args.config)
    raw = args.kappas if args.kappas is not None else cfg.get("scan", "kappas", "")
    kappas = [k.strip() for k in raw.split(",") if k.strip()]
    if not kappas:
        raise ConfigError("kappa list is empty")
    for k in kappas:
        _number(k, "kappa")
    consts = _constants(args, cfg)
    consts.pop("kappa", None)
    fields = _fields(args, cfg)
    s0 = _state(cfg)
    sc = cfg.section("scan")
    duration = _number(sc.get("duration", "1"), "scan.duration")
    steps = int(sc.get("steps", "1000"))
    if duration <= 0 or steps <= 0:
        raise ConfigError("scan duration and steps must be positive")
    toggles = _toggles(args, cfg)
    m = cfg.section("model")
    vmax = m.get("vmax_fraction", "0.3").strip()
    scenario = Scenario(
        fields, s0, duration, steps, consts,
        toggles if toggles is not None else frozenset({1, 2, 3, 5}),
        m.get("line4_reading", "printed").strip(),
        None if vmax.lower() in ("none", "off") else _number(vmax, "vmax_fraction"),
    )
    rows = kappa_scan(scenario, kappas)
    text = scan_csv(rows)
    _write_outputs(_out(args, cfg), {"scan.csv": text})
    sys.stdout.write(text)
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaqkit", description="Group-theoretic quantization toolkit")
    p.add_argument("--version", action="version", version=f"gaqkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="INI run configuration")
        sp.add_argument("--constants", help="comma list, e.g. m=1,q=1/137,kappa=0,g=mc")
        sp.add_argument("--out", help="output directory")

    def algebra_opts(sp):
        sp.add_argument("--catalog", help=f"one of {', '.join(sorted(CATALOG_NAMES))}")
        sp.add_argument("--algebra-file", help="algebra in canonical text format")
        sp.add_argument("--kappa", help="mixing constant κ")
        sp.add_argument("--g", help="cocycle constant g (number or 'mc')")
        sp.add_argument("--reading", choices=["forced", "literal", "natural", "corrected"],
                        help="P_EG A-term reading")

    sp = sub.add_parser("algebra-check", help="check Jacobi identities")
    common(sp)
    algebra_opts(sp)
    sp.set_defaults(func=cmd_algebra_check)

    for name, func, hlp in (("exponentiate", cmd_exponentiate, "truncated group law"),
                            ("derive", cmd_derive, "invariant geometry bundle")):
        sp = sub.add_parser(name, help=hlp)
        common(sp)
        algebra_opts(sp)
        sp.add_argument("--order", type=int)
        sp.add_argument("--closed-form", action="store_true", help="use the closed-form GE law")
        sp.add_argument("--fallback", action="store_true", help="allow P_EG beyond order 3")
        if name == "exponentiate":
            sp.add_argument("--seed", type=int)
            sp.add_argument("--trials", type=int)
        sp.set_defaults(func=func)

    sp = sub.add_parser("simulate", help="integrate a trajectory")
    common(sp)
    sp.add_argument("--fields", help="field spec INI")
    sp.add_argument("--toggles", help="electrograv lines, e.g. 1,2,5")
    sp.add_argument("--kappa")
    sp.add_argument("--g")
    sp.add_argument("--dt")
    sp.add_argument("--steps")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("scan", help="κ sweep")
    common(sp)
    sp.add_argument("--fields", help="field spec INI")
    sp.add_argument("--toggles")
    sp.add_argument("--kappas", help="comma list of κ values")
    sp.add_argument("--g")
    sp.set_defaults(func=cmd_scan)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, AlgebraFormatError) as exc:
        sys.stderr.write(f"gaqkit: error: {exc}\n")
        return EXIT_USAGE
    except BlowupError as exc:
        sys.stderr.write(f"gaqkit: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except (ValidityError, SingularMass, DomainError, EvalError, DynamicsError) as exc:
        sys.stderr.write(f"gaqkit: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except (AlgebraError, CocycleError, LawError, UnsupportedOrder) as exc:
        sys.stderr.write(f"gaqkit: check failed: {exc}\n")
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
