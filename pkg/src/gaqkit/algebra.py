"""Finite-dimensional Lie algebras given by exact structure constants.

Generators are plain string labels.  The labels double as coordinate names
of the group chart produced by :mod:`gaqkit.formal_group`, so ``"x1"`` is
both the generator X_{x^1} and the coordinate x^1.

A *combination* is a dict ``label -> Fraction``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .linalg import solve
from .poly import ROLES, Chart

__all__ = [
    "BasisError",
    "CocycleError",
    "AlgebraError",
    "AlgebraFormatError",
    "TruncationError",
    "AlgebraSpec",
    "AlgebraCocycle",
    "JacobiReport",
    "bracket",
    "check_jacobi",
    "check_cocycle",
    "central_extend",
    "coboundary_trivialization",
    "CurrentAlgebraSpec",
    "current_bracket",
    "make_constants",
    "algebra_to_text",
    "algebra_from_text",
]


class BasisError(KeyError):
    """Unknown generator label."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown generator"


class CocycleError(ValueError):
    """A proposed 2-cocycle fails the cocycle condition."""


class AlgebraError(ValueError):
    """The algebra fails the Jacobi identity where it is required."""


class AlgebraFormatError(ValueError):
    """Malformed algebra text file."""


class TruncationError(ArithmeticError):
    """A current-algebra bracket leaves the test-function truncation."""


CONSTANT_ALIASES = {"κ": "kappa", "ħ": "hbar", "h_bar": "hbar"}
DEFAULT_CONSTANTS = {"m": 1, "q": 1, "kappa": 0, "hbar": 1, "c": 1}


def make_constants(values: Mapping[str, object] | None = None) -> dict[str, Fraction]:
    """Normalise a constants mapping to exact Fractions.

    Defaults: m = q = ħ = c = 1, κ = 0, g = m·c.  ``g`` may be given as the
    string ``"mc"``.
    """
    out = {k: Fraction(v) for k, v in DEFAULT_CONSTANTS.items()}
    g = None
    for k, v in (values or {}).items():
        k = CONSTANT_ALIASES.get(k, k)
        if k == "g":
            g = v
            continue
        if k not in DEFAULT_CONSTANTS:
            raise ValueError(f"unknown physical constant {k!r}")
        out[k] = Fraction(str(v)) if isinstance(v, float) else Fraction(v)
    if g is None or (isinstance(g, str) and g.strip() == "mc"):
        out["g"] = out["m"] * out["c"]
    else:
        out["g"] = Fraction(str(g)) if isinstance(g, float) else Fraction(g)
    if out["hbar"] == 0 or out["c"] == 0:
        raise ValueError("hbar and c must be nonzero")
    return out


def _combo(alg: "AlgebraSpec", u) -> dict[str, Fraction]:
    if isinstance(u, str):
        alg.index(u)
        return {u: Fraction(1)}
    out = {}
    for k, c in u.items():
        alg.index(k)
        c = Fraction(c)
        if c:
            out[k] = c
    return out


def _add_into(acc: dict, combo: Mapping[str, Fraction], scale=1):
    for k, c in combo.items():
        s = acc.get(k, 0) + scale * c
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


@dataclass(frozen=True)
class AlgebraSpec:
    """Lie algebra: ordered generator labels, structure constants, constants.

    ``structure`` maps an ordered pair ``(a, b)`` with ``index(a) < index(b)``
    to the combination ``[a, b]``.  Pairs not listed commute.  Construct via
    :meth:`build`, which accepts either order and enforces antisymmetry.
    """

    name: str
    generators: tuple[str, ...]
    roles: tuple[str, ...]
    structure: Mapping[tuple[str, str], Mapping[str, Fraction]]
    constants: Mapping[str, Fraction] = field(default_factory=dict)
    central: str | None = None

    @classmethod
    def build(cls, name, generators: Iterable, brackets: Mapping, constants=None, central=None):
        gens, roles = [], []
        for g in generators:
            if isinstance(g, str):
                gens.append(g)
                roles.append("generic")
            else:
                gens.append(g[0])
                roles.append(g[1])
        if len(set(gens)) != len(gens):
            raise BasisError(f"duplicate generator labels in {gens}")
        for r in roles:
            if r not in ROLES:
                raise BasisError(f"unknown role {r!r}")
        pos = {g: i for i, g in enumerate(gens)}
        structure: dict = {}
        for (a, b), combo in brackets.items():
            if a not in pos or b not in pos:
                raise BasisError(f"bracket [{a},{b}] uses unknown generator")
            if a == b:
                if any(Fraction(c) for c in combo.values()):
                    raise AlgebraError(f"[{a},{a}] must vanish")
                continue
            sign = 1
            if pos[a] > pos[b]:
                a, b, sign = b, a, -1
            clean = {}
            for k, c in combo.items():
                if k not in pos:
                    raise BasisError(f"bracket [{a},{b}] produces unknown generator {k!r}")
                c = Fraction(c) * sign
                if c:
                    clean[k] = c
            if (a, b) in structure and structure[(a, b)] != clean:
                raise AlgebraError(f"conflicting entries for [{a},{b}]")
            if clean:
                structure[(a, b)] = clean
        if central is not None and central not in pos:
            raise BasisError(f"central generator {central!r} not in basis")
        return cls(name, tuple(gens), tuple(roles), structure, dict(constants or {}), central)

    def __post_init__(self):
        object.__setattr__(self, "_pos", {g: i for i, g in enumerate(self.generators)})

    def __len__(self):
        return len(self.generators)

    def index(self, label: str) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise BasisError(f"unknown generator {label!r} in algebra {self.name!r}") from None

    def chart(self) -> Chart:
        return Chart(zip(self.generators, self.roles))

    def pair(self, a: str, b: str) -> dict[str, Fraction]:
        ia, ib = self.index(a), self.index(b)
        if ia == ib:
            return {}
        if ia < ib:
            return dict(self.structure.get((a, b), {}))
        return {k: -c for k, c in self.structure.get((b, a), {}).items()}

    def brackets(self) -> dict[tuple[str, str], dict[str, Fraction]]:
        """All nonzero [a, b] with a before b in basis order."""
        return {k: dict(v) for k, v in self.structure.items()}

    def without(self, labels: Iterable[str], name: str | None = None) -> "AlgebraSpec":
        """Drop generators (and every bracket term involving them)."""
        drop = set(labels)
        keep = [(g, r) for g, r in zip(self.generators, self.roles) if g not in drop]
        br = {}
        for (a, b), combo in self.structure.items():
            if a in drop or b in drop:
                continue
            br[(a, b)] = {k: c for k, c in combo.items() if k not in drop}
        central = self.central if self.central not in drop else None
        return AlgebraSpec.build(name or self.name, keep, br, self.constants, central)

    def subalgebra(self, labels: Iterable[str], name: str | None = None) -> "AlgebraSpec":
        keep = set(labels)
        for (a, b), combo in self.structure.items():
            if a in keep and b in keep and not set(combo) <= keep:
                raise AlgebraError(f"{sorted(keep)} is not closed: [{a},{b}] leaves it")
        return self.without([g for g in self.generators if g not in keep], name)

    def renamed(self, name: str) -> "AlgebraSpec":
        return AlgebraSpec(name, self.generators, self.roles, self.structure, self.constants, self.central)


def bracket(alg: AlgebraSpec, u, v) -> dict[str, Fraction]:
    """Bilinear bracket of two combinations (or single labels)."""
    u, v = _combo(alg, u), _combo(alg, v)
    acc: dict = {}
    for a, ca in u.items():
        for b, cb in v.items():
            if a != b:
                _add_into(acc, alg.pair(a, b), ca * cb)
    return acc


@dataclass
class JacobiReport:
    ok: bool
    violating_triples: list[tuple[str, str, str]]
    residuals: dict[tuple[str, str, str], dict[str, Fraction]]
    antisymmetric: bool = True
    central_ok: bool = True

    def summary(self) -> str:
        if self.ok:
            return "jacobi: ok"
        lines = [f"jacobi: {len(self.violating_triples)} violating triple(s)"]
        for t in self.violating_triples:
            res = " + ".join(f"{c}*{k}" for k, c in sorted(self.residuals[t].items()))
            lines.append(f"  ({', '.join(t)}): {res}")
        if not self.central_ok:
            lines.append("  central generator is not central")
        return "\n".join(lines)


def _jacobiator(alg, a, b, c):
    acc: dict = {}
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        _add_into(acc, bracket(alg, alg.pair(x, y), z))
    return acc


def check_jacobi(alg: AlgebraSpec) -> JacobiReport:
    """Scan every basis triple a < b < c for a nonzero Jacobiator."""
    bad, residuals = [], {}
    for a, b, c in itertools.combinations(alg.generators, 3):
        r = _jacobiator(alg, a, b, c)
        if r:
            bad.append((a, b, c))
            residuals[(a, b, c)] = r
    central_ok = True
    if alg.central is not None:
        central_ok = all(not alg.pair(alg.central, g) for g in alg.generators)
    return JacobiReport(not bad and central_ok, bad, residuals, True, central_ok)


@dataclass(frozen=True)
class AlgebraCocycle:
    """Antisymmetric bilinear form on generators, given on basis pairs."""

    pairs: Mapping[tuple[str, str], Fraction]

    def value(self, a: str, b: str) -> Fraction:
        if a == b:
            return Fraction(0)
        if (a, b) in self.pairs:
            return Fraction(self.pairs[(a, b)])
        if (b, a) in self.pairs:
            return -Fraction(self.pairs[(b, a)])
        return Fraction(0)

    def on(self, u: Mapping[str, Fraction], v: Mapping[str, Fraction]) -> Fraction:
        return sum((cu * cv * self.value(a, b) for a, cu in u.items() for b, cv in v.items()), Fraction(0))


def check_cocycle(alg: AlgebraSpec, cocycle: AlgebraCocycle) -> list[tuple[str, str, str]]:
    """Triples where Σ_cyclic ξ([a,b], c) ≠ 0."""
    for (a, b), val in cocycle.pairs.items():
        alg.index(a)
        alg.index(b)
        if (b, a) in cocycle.pairs and Fraction(cocycle.pairs[(b, a)]) != -Fraction(val):
            raise CocycleError(f"cocycle not antisymmetric on ({a},{b})")
    bad = []
    for a, b, c in itertools.combinations(alg.generators, 3):
        s = (cocycle.on(alg.pair(a, b), {c: 1}) + cocycle.on(alg.pair(b, c), {a: 1})
             + cocycle.on(alg.pair(c, a), {b: 1}))
        if s:
            bad.append((a, b, c))
    return bad


def central_extend(alg: AlgebraSpec, cocycle: AlgebraCocycle, central: str = "phi",
                   name: str | None = None) -> AlgebraSpec:
    """Append a central generator and add ``cocycle(a, b)·central`` to every bracket."""
    bad = check_cocycle(alg, cocycle)
    if bad:
        raise CocycleError(f"cocycle condition fails on {bad}")
    if central in alg.generators:
        raise BasisError(f"{central!r} already in basis")
    br = alg.brackets()
    for (a, b), v in cocycle.pairs.items():
        v = Fraction(v)
        if alg.index(a) > alg.index(b):
            a, b, v = b, a, -v
        if v:
            br.setdefault((a, b), {})
            br[(a, b)][central] = br[(a, b)].get(central, 0) + v
    ext = AlgebraSpec.build(name or alg.name + "_ext", list(zip(alg.generators, alg.roles)) + [(central, "phase")],
                            br, alg.constants, central)
    rep = check_jacobi(ext)
    if not rep.ok:
        raise CocycleError(f"extension fails Jacobi on {rep.violating_triples}")
    return ext


def coboundary_trivialization(alg: AlgebraSpec, cocycle: AlgebraCocycle) -> dict[str, Fraction] | None:
    """Find λ with cocycle(a, b) = λ([a, b]) for all basis pairs.

    If it exists, the basis change Y_a = X_a + λ_a Ξ turns the extension by
    ``cocycle`` into the direct product with u(1).  Returns None when the
    cocycle is not a coboundary.
    """
    gens = alg.generators
    rows, rhs = [], []
    for a, b in itertools.combinations(gens, 2):
        br = alg.pair(a, b)
        rows.append([br.get(g, Fraction(0)) for g in gens])
        rhs.append(cocycle.value(a, b))
    if not rows:
        return {g: Fraction(0) for g in gens}
    lam = solve(rows, rhs)
    if lam is None:
        return None
    return dict(zip(gens, lam))


def apply_basis_shift(ext: AlgebraSpec, shift: Mapping[str, Fraction]) -> AlgebraSpec:
    """Rewrite ``ext`` in the basis Y_a = X_a + shift_a Ξ (Ξ = ext.central)."""
    xi = ext.central
    if xi is None:
        raise BasisError("algebra has no central generator")
    br = {}
    for a, b in itertools.combinations(ext.generators, 2):
        # [Y_a, Y_b] = Σ C^c X_c + ω Ξ = Σ C^c Y_c + (ω - Σ C^c shift_c) Ξ
        combo = dict(ext.pair(a, b))
        extra = sum((c * Fraction(shift.get(k, 0)) for k, c in combo.items() if k != xi), Fraction(0))
        combo[xi] = combo.get(xi, 0) - extra
        br[(a, b)] = combo
    return AlgebraSpec.build(ext.name + "_shifted", list(zip(ext.generators, ext.roles)), br, ext.constants, xi)


# -- current algebras -----------------------------------------------------

def _pmul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return _ptrim(out)


def _pder(f):
    return _ptrim([i * f[i] for i in range(1, len(f))])


def _padd(f, g, k=1):
    n = max(len(f), len(g))
    out = [(f[i] if i < len(f) else 0) + k * (g[i] if i < len(g) else 0) for i in range(n)]
    return _ptrim([Fraction(x) for x in out])


def _ptrim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


@dataclass(frozen=True)
class CurrentAlgebraSpec:
    """1+1 Galilei algebra with time translations and space translations made local.

    Elements are dicts ``kind -> coefficient list`` where a coefficient list
    ``[f0, f1, ...]`` stands for f(t) = Σ f_n tⁿ and kind is one of
    ``"b"``, ``"a"``, ``"V"``, ``"h"`` (``"V"`` carries constant functions only).
    Test functions are truncated at degree ``test_function_degree``.
    """

    base: AlgebraSpec
    test_function_degree: int = 3

    @property
    def mass(self) -> Fraction:
        return Fraction(self.base.constants.get("m", 1))


KINDS = ("b", "a", "V", "h")


def _celem(x) -> dict[str, list[Fraction]]:
    if isinstance(x, tuple):
        f, kind = x
        x = {kind: f}
    out = {}
    for kind, f in x.items():
        if kind not in KINDS:
            raise BasisError(f"unknown current generator {kind!r}")
        if isinstance(f, (int, Fraction)):
            f = [f]
        f = _ptrim([Fraction(c) for c in f])
        if kind == "V" and len(f) > 1:
            raise BasisError("X_V is rigid: only constant coefficients allowed")
        if f:
            out[kind] = f
    return out


def current_bracket(cur: CurrentAlgebraSpec, u, v) -> dict[str, list[Fraction]]:
    """Bracket of ``f⊗X`` and ``g⊗Y``.

    Arguments are ``(coeffs, kind)`` tuples or dicts ``kind -> coeffs``.
    Realised on functions of (t, x, p, h) the generators satisfy

    [f X_b, g X_b] = (f g' - g f') X_b     [f X_b, g X_a] = f g' X_a
    [f X_b, X_V]   = f X_a                 [f X_a, X_V]   = m f' X_h
    [f X_b, g X_h] = (f g)' X_h            everything else commutes.

    The last two rows are the closure generators f⊗X_h.
    """
    m = cur.mass
    u, v = _celem(u), _celem(v)
    for e in (u, v):
        for f in e.values():
            if len(f) - 1 > cur.test_function_degree:
                raise TruncationError(f"test function degree {len(f) - 1} exceeds D={cur.test_function_degree}")
    acc: dict[str, list] = {}

    def put(kind, f, sign):
        acc[kind] = _padd(acc.get(kind, []), f, sign)

    def basic(ka, f, kb, g, sign):
        # sign * [f ka, g kb] with ka <= kb in the table order above
        if ka == "b" and kb == "b":
            put("b", _padd(_pmul(f, _pder(g)), _pmul(g, _pder(f)), -1), sign)
        elif ka == "b" and kb == "a":
            put("a", _pmul(f, _pder(g)), sign)
        elif ka == "b" and kb == "V":
            put("a", _pmul(f, g), sign)
        elif ka == "a" and kb == "V":
            put("h", [m * c for c in _pmul(_pder(f), g)], sign)
        elif ka == "b" and kb == "h":
            put("h", _pder(_pmul(f, g)), sign)

    for ka, f in u.items():
        for kb, g in v.items():
            if KINDS.index(ka) <= KINDS.index(kb):
                basic(ka, f, kb, g, 1)
            else:
                basic(kb, g, ka, f, -1)
    out = {}
    for k, f in acc.items():
        if not f:
            continue
        if len(f) - 1 > cur.test_function_degree:
            raise TruncationError(f"[{u}, {v}] has a {k}-component of degree {len(f) - 1} > D={cur.test_function_degree}")
        out[k] = f
    return out


# -- text format ----------------------------------------------------------

def algebra_to_text(alg: AlgebraSpec) -> str:
    """Line format::

        name <name>
        generator <label> <role>
        central <label>
        constant <key> <num/den>
        bracket <a> <b> <c> <coeff>      # [a, b] contains coeff * c
    """
    lines = [f"name {alg.name}"]
    for g, r in zip(alg.generators, alg.roles):
        lines.append(f"generator {g} {r}")
    if alg.central:
        lines.append(f"central {alg.central}")
    for k in sorted(alg.constants):
        lines.append(f"constant {k} {alg.constants[k]}")
    for a, b in itertools.combinations(alg.generators, 2):
        combo = alg.structure.get((a, b), {})
        for c in alg.generators:
            if c in combo:
                lines.append(f"bracket {a} {b} {c} {combo[c]}")
    return "\n".join(lines) + "\n"


def algebra_from_text(text: str) -> AlgebraSpec:
    name, gens, central, consts, br = "algebra", [], None, {}, {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        try:
            if key == "name" and len(parts) == 2:
                name = parts[1]
            elif key == "generator" and len(parts) in (2, 3):
                gens.append((parts[1], parts[2] if len(parts) == 3 else "generic"))
            elif key == "central" and len(parts) == 2:
                central = parts[1]
            elif key == "constant" and len(parts) == 3:
                consts[parts[1]] = Fraction(parts[2])
            elif key == "bracket" and len(parts) == 5:
                a, b, c, v = parts[1:]
                br.setdefault((a, b), {})
                br[(a, b)][c] = br[(a, b)].get(c, 0) + Fraction(v)
            else:
                raise AlgebraFormatError(f"line {n}: cannot parse {raw!r}")
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, AlgebraFormatError):
                raise
            raise AlgebraFormatError(f"line {n}: bad number in {raw!r}") from None
    if not gens:
        raise AlgebraFormatError("no generators declared")
    try:
        return AlgebraSpec.build(name, gens, br, consts, central)
    except (BasisError, AlgebraError) as exc:
        raise AlgebraFormatError(str(exc)) from None
