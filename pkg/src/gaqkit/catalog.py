"""Catalog of the algebras used throughout the package.

All constants are folded into exact structure constants at construction
time, so a catalog entry is a plain :class:`AlgebraSpec`.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from .algebra import (
    AlgebraCocycle,
    AlgebraSpec,
    CocycleError,
    CurrentAlgebraSpec,
    bracket,
    central_extend,
    check_jacobi,
    make_constants,
)

__all__ = [
    "catalog",
    "CATALOG_NAMES",
    "galilei_extended",
    "galilei_unextended",
    "GE_electromagnetic",
    "PEG_electrograv",
    "peg_deviations",
    "peg_mixing_terms",
    "galilei_1p1_gauged",
    "current_algebra_1p1",
    "abelian",
    "heisenberg",
    "levi_civita",
]


def levi_civita(i: int, j: int, k: int) -> int:
    """ε_ijk for indices in {1, 2, 3}."""
    if len({i, j, k}) < 3:
        return 0
    return 1 if (i, j, k) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


def _rotations(brackets: dict, prefix: str, families: list[str]):
    """[ε_i, ε_j] = ε_ijk ε_k and [ε_i, Y_j] = ε_ijk Y_k for each family Y."""
    for i, j in itertools.product((1, 2, 3), repeat=2):
        k = 6 - i - j
        s = levi_civita(i, j, k)
        if not s:
            continue
        if i < j:
            brackets[(f"{prefix}{i}", f"{prefix}{j}")] = {f"{prefix}{k}": s}
        for fam in families:
            brackets[(f"{prefix}{i}", f"{fam}{j}")] = {f"{fam}{k}": s}


def galilei_unextended(constants: Mapping | None = None) -> AlgebraSpec:
    """Galilei algebra with generators b, a_i, V_i, eps_i (no central term)."""
    k = make_constants(constants)
    gens = [("b", "time")] + [(f"a{i}", "space") for i in (1, 2, 3)]
    gens += [(f"V{i}", "velocity") for i in (1, 2, 3)] + [(f"eps{i}", "rotation") for i in (1, 2, 3)]
    br: dict = {}
    for i in (1, 2, 3):
        br[(f"V{i}", "b")] = {f"a{i}": 1}
    _rotations(br, "eps", ["V", "a"])
    return AlgebraSpec.build("galilei", gens, br, k)


def galilei_cocycle(constants: Mapping | None = None) -> AlgebraCocycle:
    k = make_constants(constants)
    return AlgebraCocycle({(f"V{i}", f"a{i}"): k["m"] / k["hbar"] for i in (1, 2, 3)})


def galilei_extended(constants: Mapping | None = None) -> AlgebraSpec:
    """Centrally extended Galilei algebra: [V_i, a_j] = (m/ħ) δ_ij Ξ."""
    base = galilei_unextended(constants)
    return central_extend(base, galilei_cocycle(constants), central="phi", name="galilei_extended")


def GE_electromagnetic(constants: Mapping | None = None, rotations: bool = True) -> AlgebraSpec:
    """Extended Galilei algebra with the linear local-U(1) generators A_i, A0.

    Generator order (= chart order of the group law):
    t, x1..x3, v1..v3, eps1..eps3, A1..A3, A0, phi.
    """
    k = make_constants(constants)
    m, q, hb = k["m"], k["q"], k["hbar"]
    gens = [("t", "time")] + [(f"x{i}", "space") for i in (1, 2, 3)]
    gens += [(f"v{i}", "velocity") for i in (1, 2, 3)]
    if rotations:
        gens += [(f"eps{i}", "rotation") for i in (1, 2, 3)]
    gens += [(f"A{i}", "potential") for i in (1, 2, 3)] + [("A0", "potential"), ("phi", "phase")]
    br: dict = {("t", "A0"): {"phi": -q / hb}}
    for i in (1, 2, 3):
        br[("t", f"v{i}")] = {f"x{i}": -1}
        br[(f"x{i}", f"v{i}")] = {"phi": m / hb}
        br[(f"x{i}", f"A{i}")] = {"phi": q / hb}
        br[(f"v{i}", f"A{i}")] = {"A0": 1}
    if rotations:
        _rotations(br, "eps", ["x", "v", "A"])
    name = "GE_electromagnetic" if rotations else "GE_electromagnetic_norot"
    return AlgebraSpec.build(name, gens, br, k, central="phi")


# -- P_EG --------------------------------------------------------------------

ETA = (1, -1, -1, -1)


def _eta(a: int, b: int) -> int:
    return ETA[a] if a == b else 0


def _d(a: int, b: int) -> int:
    return 1 if a == b else 0


def _eps_label(a, b):
    return f"e{a}{b}"


def _h_label(a, b):
    return f"h{min(a, b)}{max(a, b)}"


def _E(a: int, b: int) -> dict:
    """X_{ε^{ab}} as a combination of stored (a < b) generators."""
    if a == b:
        return {}
    return {_eps_label(a, b): 1} if a < b else {_eps_label(b, a): -1}


def _H(a: int, b: int) -> dict:
    return {_h_label(a, b): 1}


def _acc(out: dict, combo: dict, k):
    for lab, c in combo.items():
        out[lab] = out.get(lab, 0) + k * c


PEG_EPS = [(a, b) for a in range(4) for b in range(4) if a < b]
PEG_H = [(a, b) for a in range(4) for b in range(4) if a <= b]


def _peg_generators():
    gens = [("x0", "time")] + [(f"x{i}", "space") for i in (1, 2, 3)]
    gens += [(_eps_label(a, b), "rotation") for a, b in PEG_EPS]
    gens += [(_h_label(a, b), "metric-perturbation") for a, b in PEG_H]
    gens += [(f"A{r}", "potential") for r in range(4)] + [("phi", "phase")]
    return gens


def _peg_linear(k: Mapping[str, Fraction]) -> dict:
    """All P_EG brackets except the A-components of [ε, h] and [h, h]."""
    m, q, g, kap, c = k["m"], k["q"], k["g"], k["kappa"], k["c"]
    mk = (m + kap * q) * c
    br: dict = {}
    for mu in range(4):
        x = f"x{mu}"
        for nu, rho in PEG_EPS:
            out: dict = {}
            _acc(out, {f"x{rho}": 1}, -_eta(nu, mu))
            _acc(out, {f"x{nu}": 1}, _eta(rho, mu))
            out["phi"] = -mk * (_eta(rho, mu) * _d(0, nu) - _eta(nu, mu) * _d(0, rho))
            br[(x, _eps_label(nu, rho))] = out
        for nu, rho in PEG_H:
            out = {}
            _acc(out, {f"x{rho}": 1}, -_eta(nu, mu))
            _acc(out, {f"x{nu}": 1}, -_eta(rho, mu))
            out["phi"] = (2 * (g - m * c) * _eta(0, mu) * _d(0, nu) * _d(0, rho)
                          + m * c * (_eta(rho, mu) * _d(0, nu) + _eta(nu, mu) * _d(0, rho)))
            br[(x, _h_label(nu, rho))] = out
        for nu in range(4):
            br[(x, f"A{nu}")] = {"phi": -q * _eta(nu, mu)}
    for (mu, nu), (al, be) in itertools.product(PEG_EPS, PEG_EPS):
        out = {}
        _acc(out, _E(mu, be), -_eta(al, nu))
        _acc(out, _E(mu, al), _eta(be, nu))
        _acc(out, _E(nu, be), _eta(al, mu))
        _acc(out, _E(nu, al), -_eta(mu, be))
        br.setdefault((_eps_label(mu, nu), _eps_label(al, be)), out)
    for (mu, nu), (al, be) in itertools.product(PEG_EPS, PEG_H):
        out = {}
        _acc(out, _H(mu, be), -_eta(al, nu))
        _acc(out, _H(mu, al), -_eta(be, nu))
        _acc(out, _H(nu, be), _eta(al, mu))
        _acc(out, _H(nu, al), _eta(mu, be))
        br[(_eps_label(mu, nu), _h_label(al, be))] = out
    for (mu, nu), (al, be) in itertools.combinations(PEG_H, 2):
        out = {}
        _acc(out, _E(mu, be), -_eta(al, nu))
        _acc(out, _E(mu, al), -_eta(be, nu))
        _acc(out, _E(nu, be), -_eta(al, mu))
        _acc(out, _E(nu, al), -_eta(mu, be))
        br[(_h_label(mu, nu), _h_label(al, be))] = out
    for rho in range(4):
        for mu, nu in PEG_EPS:
            out = {}
            _acc(out, {f"A{mu}": 1}, -_eta(rho, nu))
            _acc(out, {f"A{nu}": 1}, _eta(rho, mu))
            br[(_eps_label(mu, nu), f"A{rho}")] = out
        for mu, nu in PEG_H:
            out = {}
            _acc(out, {f"A{mu}": 1}, -_eta(rho, nu))
            _acc(out, {f"A{nu}": 1}, -_eta(rho, mu))
            br[(_h_label(mu, nu), f"A{rho}")] = out
    return br


def _listed_A_terms(k: Mapping[str, Fraction], reading: str) -> dict:
    """A-components of [ε, h] and [h, h] from the reference coefficient list.

    ``reading`` selects how the index typos are read:

    * ``"literal"``: every index exactly as listed; a factor without a free
      ρ contributes to every A^ρ.
    * ``"natural"``: dangling factors repaired to the symmetry-respecting
      index (δ^ρ attached to the free slot, (α↔β) and (μ↔ν) pairs restored).
    * ``"corrected"``: the natural reading with the sign of the
      δ^0_α δ^0_β tail of the [ε, h] term flipped, the single change needed
      for the Jacobi identity.
    """
    q, g, m, c, kap = k["q"], k["g"], k["m"], k["c"], k["kappa"]
    G2 = 2 * (g - m * c)
    out: dict = {}
    for (mu, nu), (al, be) in itertools.product(PEG_EPS, PEG_H):
        combo = {}
        for rho in range(4):
            base = (_eta(al, nu) * _d(rho, be) * _d(0, mu) - _eta(mu, al) * _d(rho, be) * _d(0, nu)
                    + _eta(nu, be) * _d(rho, al) * _d(0, mu) - _eta(mu, be) * _d(rho, al) * _d(0, nu))
            if reading == "literal":
                tail = _d(0, al) * _d(0, be) * (_eta(0, nu) * _d(0, mu) - _eta(0, mu) * _d(rho, nu))
            else:
                tail = _d(0, al) * _d(0, be) * (_eta(0, nu) * _d(rho, mu) - _eta(0, mu) * _d(rho, nu))
            if reading == "corrected":
                tail = -tail
            val = kap * q * c * base - G2 * (base * _d(rho, 0) + tail)
            if val:
                combo[f"A{rho}"] = val / q
        if combo:
            out[(_eps_label(mu, nu), _h_label(al, be))] = combo
    for (mu, nu), (al, be) in itertools.combinations(PEG_H, 2):
        combo = {}
        for rho in range(4):
            def dd(b_, m_):  # δ^{0ρ}_{b m}
                return _d(0, b_) * _d(rho, m_) - _d(0, m_) * _d(rho, b_)
            kterm = (_eta(al, nu) * dd(be, mu) + _eta(be, nu) * dd(al, mu)
                     + _eta(al, mu) * dd(be, nu) + _eta(be, mu) * dd(al, nu))
            if reading == "literal":
                gterm = (_d(0, al) * _d(0, be) * (_eta(0, nu) * _d(rho, mu) + _eta(0, be) * _d(rho, nu))
                         - _d(0, mu) * _d(0, nu) * (_eta(0, be) * _d(rho, be) + _eta(0, al) * _d(rho, be)))
            else:
                gterm = (_d(0, al) * _d(0, be) * (_eta(0, nu) * _d(rho, mu) + _eta(0, mu) * _d(rho, nu))
                         - _d(0, mu) * _d(0, nu) * (_eta(0, be) * _d(rho, al) + _eta(0, al) * _d(rho, be)))
            val = -kap * q * c * kterm + G2 * gterm
            if val:
                combo[f"A{rho}"] = val / q
        if combo:
            out[(_h_label(mu, nu), _h_label(al, be))] = combo
    return out


def _forced_A_terms(k: Mapping[str, Fraction], linear: dict) -> dict:
    """A-components fixed by Jacobi(x^μ, M, N) for M, N in the ε/h sector.

    With [A^ρ, x^μ] = q η_ρμ Ξ, the Ξ-residual J(μ) of the Jacobiator
    without A-terms is cancelled by a^μ = -η_μμ J(μ)/q.
    """
    gens = _peg_generators()
    trial = AlgebraSpec.build("peg_trial", gens, linear, k, central="phi")
    q = k["q"]
    sector = [_eps_label(a, b) for a, b in PEG_EPS] + [_h_label(a, b) for a, b in PEG_H]
    forced: dict = {}
    for M, N in itertools.combinations(sector, 2):
        if M.startswith("e") and N.startswith("e"):
            continue
        combo = {}
        for mu in range(4):
            x = f"x{mu}"
            res: dict = {}
            for a, b, cc in ((x, M, N), (M, N, x), (N, x, M)):
                for lab, v in bracket(trial, trial.pair(a, b), cc).items():
                    res[lab] = res.get(lab, 0) + v
            j0 = res.get("phi", Fraction(0))
            if any(v for lab, v in res.items() if lab != "phi"):
                raise AssertionError("non-central Jacobi residual in the x-sector")
            if j0:
                if q == 0:
                    raise CocycleError(
                        f"Jacobi(x{mu}, {M}, {N}) leaves {j0}·Ξ and q = 0 leaves no A-term to absorb it")
                combo[f"A{mu}"] = -ETA[mu] * j0 / q
        if combo:
            forced[(M, N)] = combo
    return forced


def _merge(linear: dict, aterms: dict) -> dict:
    br = {kk: dict(v) for kk, v in linear.items()}
    for key, combo in aterms.items():
        tgt = br.setdefault(key, {})
        for lab, v in combo.items():
            tgt[lab] = tgt.get(lab, 0) + v
    return br


def PEG_electrograv(constants: Mapping | None = None, reading: str = "forced") -> AlgebraSpec:
    """Electro-gravitational algebra on x^μ, ε^{μν}, h^{μν}, A^μ, Ξ (ħ = 1, η = diag(1,-1,-1,-1)).

    ``reading="forced"`` (default) uses the A-components of [ε, h] and
    [h, h] fixed by the Jacobi identity; ``"literal"``, ``"natural"`` and
    ``"corrected"``
    use the reference coefficient list under the index readings described
    in :func:`_listed_A_terms` (these need not satisfy Jacobi).
    [x^μ, x^ν] = 0 is assumed.
    """
    k = make_constants(constants)
    linear = _peg_linear(k)
    if reading == "forced":
        aterms = _forced_A_terms(k, linear)
    elif reading in ("literal", "natural", "corrected"):
        if k["q"] == 0:
            raise CocycleError("listed A-terms carry 1/q and are undefined for q = 0")
        aterms = _listed_A_terms(k, reading)
    else:
        raise ValueError(f"unknown reading {reading!r}")
    return AlgebraSpec.build(f"PEG_electrograv[{reading}]", _peg_generators(), _merge(linear, aterms), k, "phi")


def peg_mixing_terms(alg: AlgebraSpec) -> dict:
    """A-components of every [ε, h] and [h, h] bracket (empty when decoupled)."""
    out = {}
    for (a, b), combo in alg.structure.items():
        if a[0] in "eh" and b[0] == "h":
            part = {lab: v for lab, v in combo.items() if lab.startswith("A")}
            if part:
                out[(a, b)] = part
    return out


def peg_deviations(constants: Mapping | None = None) -> dict:
    """Machine-readable comparison of the listed A-terms against Jacobi.

    Returns a JSON-serialisable dict with the assumptions made, each
    candidate reading's Jacobi status, and the per-bracket differences
    between each reading and the forced A-terms.
    """
    k = make_constants(constants)
    linear = _peg_linear(k)
    report = {
        "constants": {kk: str(v) for kk, v in sorted(k.items())},
        "assumptions": ["[X_x^mu, X_x^nu] = 0 (not listed; Poincare translations commute)"],
        "readings": {},
    }
    forced = _forced_A_terms(k, linear) if k["q"] != 0 else None
    if forced is None:
        try:
            _forced_A_terms(k, linear)
            forced = {}
        except CocycleError as exc:
            report["readings"]["forced"] = {"jacobi_ok": False, "error": str(exc)}
    if forced is not None:
        alg = AlgebraSpec.build("forced", _peg_generators(), _merge(linear, forced), k, "phi")
        rep = check_jacobi(alg)
        report["readings"]["forced"] = {"jacobi_ok": rep.ok, "violations": len(rep.violating_triples),
                                        "mixing_terms": "present" if forced else "absent"}
    if k["q"] != 0:
        for reading in ("literal", "natural", "corrected"):
            listed = _listed_A_terms(k, reading)
            alg = AlgebraSpec.build(reading, _peg_generators(), _merge(linear, listed), k, "phi")
            rep = check_jacobi(alg)
            diffs = []
            if forced is not None:
                for key in sorted(set(listed) | set(forced)):
                    a, b = listed.get(key, {}), forced.get(key, {})
                    if a != b:
                        diffs.append({"bracket": list(key),
                                      "listed": {kk: str(v) for kk, v in sorted(a.items())},
                                      "used": {kk: str(v) for kk, v in sorted(b.items())}})
            report["readings"][reading] = {"jacobi_ok": rep.ok, "violations": len(rep.violating_triples),
                                           "differs_from_forced": len(diffs), "corrections": diffs}
    return report


# -- 1+1 gauged Galilei --------------------------------------------------------

def current_algebra_1p1(D: int = 3, constants: Mapping | None = None) -> CurrentAlgebraSpec:
    k = make_constants(constants)
    base = AlgebraSpec.build("galilei_1p1", [("b", "time"), ("a", "space"), ("V", "velocity")],
                             {("V", "b"): {"a": 1}}, k)
    return CurrentAlgebraSpec(base, D)


def galilei_1p1_gauged(D: int = 3, constants: Mapping | None = None) -> AlgebraSpec:
    """Largest finite subalgebra of the 1+1 current algebra closed at degree D.

    Basis: b_n = tⁿ⊗X_b (n ≤ min(1, D)), a_n = tⁿ⊗X_a (n ≤ D), V, and
    h_n = tⁿ⊗X_h (n ≤ D-1).  Brackets follow :func:`current_bracket`.
    D = 0 gives the rigid algebra of b, a, V.
    """
    from .algebra import current_bracket

    cur = current_algebra_1p1(D, constants)
    deg = {"b": min(1, D), "a": D, "V": 0, "h": D - 1}
    basis = []
    for kind in ("b", "a", "V", "h"):
        for n in range(deg[kind] + 1):
            basis.append((kind, n))
    roles = {"b": "time", "a": "space", "V": "velocity", "h": "potential"}

    def label(kind, n):
        return "V" if kind == "V" else f"{kind}{n}"

    gens = [(label(kd, n), roles[kd]) for kd, n in basis]
    br = {}
    for (k1, n1), (k2, n2) in itertools.combinations(basis, 2):
        f = [0] * n1 + [1]
        g = [0] * n2 + [1]
        res = current_bracket(cur, (f, k1), (g, k2))
        combo = {}
        for kind, coeffs in res.items():
            for n, cf in enumerate(coeffs):
                if cf:
                    combo[label(kind, n)] = cf
        if combo:
            br[(label(k1, n1), label(k2, n2))] = combo
    return AlgebraSpec.build(f"galilei_1p1_gauged_D{D}", gens, br, cur.base.constants)


# -- toy algebras ----------------------------------------------------------------

def abelian(n: int = 2, constants: Mapping | None = None) -> AlgebraSpec:
    """n commuting generators y1..yn plus a central phase."""
    gens = [(f"y{i}", "generic") for i in range(1, n + 1)] + [("phi", "phase")]
    return AlgebraSpec.build("abelian", gens, {}, make_constants(constants), central="phi")


def heisenberg(constants: Mapping | None = None) -> AlgebraSpec:
    """[X, Y] = Z with Z central (Z plays the phase)."""
    return AlgebraSpec.build("heisenberg", [("x", "space"), ("y", "velocity"), ("z", "phase")],
                             {("x", "y"): {"z": 1}}, make_constants(constants), central="z")


CATALOG_NAMES = {
    "galilei_extended": galilei_extended,
    "GE_electromagnetic": GE_electromagnetic,
    "GE": GE_electromagnetic,
    "PEG_electrograv": PEG_electrograv,
    "PEG": PEG_electrograv,
    "galilei_1p1_gauged": galilei_1p1_gauged,
    "abelian": abelian,
    "heisenberg": heisenberg,
}


def catalog(name: str, constants: Mapping | None = None, **options) -> AlgebraSpec:
    """Look up a catalog algebra by name (short aliases GE and PEG accepted)."""
    try:
        builder = CATALOG_NAMES[name]
    except KeyError:
        raise KeyError(f"unknown catalog algebra {name!r}; choose from {sorted(CATALOG_NAMES)}") from None
    if builder is galilei_1p1_gauged:
        return builder(options.pop("D", 3), constants)
    if builder is abelian:
        return builder(options.pop("n", 2), constants)
    return builder(constants, **options)
