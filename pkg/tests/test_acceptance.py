"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES, DATA, FIELD_CORPUS, random_expr_text  # noqa: E402
from gaqkit.algebra import bracket, check_jacobi  # noqa: E402
from gaqkit.catalog import catalog  # noqa: E402
from gaqkit.dynamics import (  # noqa: E402
    ForceModel,
    ParticleState,
    Scenario,
    cyclotron_oracle,
    electrograv_lines,
    electrograv_rhs,
    integrate,
    kappa_scan,
    lorentz_rhs,
    make_rhs,
    monitor_invariants,
    scan_csv,
)
from gaqkit.fieldexpr import FieldSpec, differentiate, evaluate, parse, to_text  # noqa: E402
from gaqkit.formal_group import closed_form_GE, exponentiate, xi_m, xi_q  # noqa: E402
from gaqkit.geometry import (  # noqa: E402
    characteristic_module,
    check_strict_invariance,
    combination,
    left_invariant_fields,
    noether,
    right_invariant_fields,
    theta,
)
from gaqkit.models import extended_current_fields, galilei_fields, theta_gravity, theta_pc  # noqa: E402
from gaqkit.poly import TruncatedPoly  # noqa: E402

K = {"m": 2, "q": 3, "hbar": 5}


def report(label, ok, detail):
    line = f"criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def ge():
    law = closed_form_GE(K, degree=4)
    left = left_invariant_fields(law)
    return law, left, right_invariant_fields(law), theta(law, left)


def load(name):
    return FieldSpec.load(DATA / "fields" / f"{name}.ini")


# -- 1 ------------------------------------------------------------------------

def test_criterion_01_jacobi():
    parts, ok = [], True
    for name, opts in (("galilei_extended", {}), ("GE_electromagnetic", {}), ("PEG_electrograv", {}),
                       ("galilei_1p1_gauged", {"D": 3})):
        alg = catalog(name, **opts)
        t0 = time.perf_counter()
        rep = check_jacobi(alg)
        dt = time.perf_counter() - t0
        good = rep.ok and dt < 5
        ok &= good
        parts.append(f"{name} {'ok' if good else 'BAD'} {dt:.2f}s")
    assert report(1, ok, "exact Jacobi, < 5 s each: " + "; ".join(parts))


# -- 2 ------------------------------------------------------------------------

def _point(rng, rot):
    p = {n: Fraction(rng.randint(-40, 40), rng.randint(1, 9))
         for n in ("t", "x1", "x2", "x3", "v1", "v2", "v3", "A1", "A2", "A3", "A0")}
    for i in (1, 2, 3):
        p[f"eps{i}"] = Fraction(rng.randint(-20, 20), 60) if rot else Fraction(0)
    return p


def test_criterion_02_cocycle_law():
    law = closed_form_GE(K, degree=3)
    rng = random.Random(2)
    exact_bad, worst = 0, 0.0
    for rot in (False, True):
        for _ in range(100):
            g3, g2, g1 = (_point(rng, rot) for _ in range(3))
            g21 = law.compose(g2, g1)
            g32 = law.compose(g3, g2)
            for xi in (xi_m, xi_q):
                lhs = xi(g2, g1, K) + xi(g3, g21, K)
                rhs = xi(g3, g2, K) + xi(g32, g1, K)
                if rot:
                    worst = max(worst, abs(float(lhs - rhs)) / max(1.0, abs(float(lhs))))
                elif lhs != rhs:
                    exact_bad += 1
    ok = exact_bad == 0 and worst < 1e-12
    assert report(2, ok, f"eps=0 exact failures {exact_bad}/200; eps!=0 max rel residual {worst:.1e} (< 1e-12)")


# -- 3 ------------------------------------------------------------------------

def test_criterion_03_bch_vs_closed_form():
    t0 = time.perf_counter()
    bch = exponentiate(catalog("GE", K), 3, freeze=["eps1", "eps2", "eps3"])
    closed = closed_form_GE(K, degree=3, rotations=False)
    diff = [n for n in closed.chart.names if bch.composition[n] != closed.composition[n]]
    dt = time.perf_counter() - t0
    ok = bch.chart == closed.chart and not diff and dt < 60
    assert report(3, ok, f"degree-3 coefficients equal exactly (mismatch in {diff or 'none'}), {dt:.1f}s (< 60 s)")


# -- 4 ------------------------------------------------------------------------

def test_criterion_04_commutator_table(ge):
    law, left, _, _ = ge
    alg = law.algebra
    bad = []
    for a, b in itertools.combinations(alg.generators, 2):
        got = left[a].bracket(left[b]).truncate(2)
        if got != combination(left, bracket(alg, a, b)).truncate(2):
            bad.append((a, b))
    c = law.chart
    xi = left["phi"].truncate(2)
    special = left["t"].bracket(left["A0"]).truncate(2) == xi.scale(Fraction(-3, 5))
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            br = left[f"x{i}"].bracket(left[f"A{j}"]).truncate(2)
            special &= br == (xi.scale(Fraction(3, 5)) if i == j else xi.scale(0))
    ok = not bad and special and len(c) == 15
    assert report(4, ok, f"{len(list(itertools.combinations(alg.generators, 2)))} rows, mismatches {len(bad)};"
                         f" [X_t,X_A0] = -(q/hbar)Xi and [X_xi,X_Aj] = (q/hbar)delta Xi: {special}")


# -- 5 ------------------------------------------------------------------------

def test_criterion_05_kernel_ranks(ge):
    free = characteristic_module(theta(closed_form_GE({**K, "q": 0}, degree=4)))
    used = set().union(*(set(cmb) for cmb in free.combinations))
    ok0 = (free.rank == 8 and free.quotient_dimension == 6 and free.verified
           and used == {"t", "eps1", "eps2", "eps3", "A1", "A2", "A3", "A0"})
    kb = characteristic_module(ge[3])
    combos = []
    for cmb in kb.combinations:
        lead = next(k for k in cmb if k.startswith(("A", "eps")))
        combos.append({k: v / cmb[lead] for k, v in cmb.items()})
    has_mc = all({f"A{i}": 1, f"v{i}": -Fraction(K["q"], K["m"])} in combos for i in (1, 2, 3))
    ok1 = kb.rank == 6 and kb.quotient_dimension == 8 and kb.verified and has_mc
    assert report(5, ok0 and ok1, f"q=0: rank {free.rank}, quotient {free.quotient_dimension};"
                                  f" q!=0: rank {kb.rank}, quotient {kb.quotient_dimension},"
                                  f" X_A - (q/m)X_v present: {has_mc}")


# -- 6 ------------------------------------------------------------------------

def test_criterion_06_noether(ge):
    law, _, right, th = ge
    c = law.chart
    inv = {k: p.truncate(2) for k, p in noether(th, right).items()}

    def P(text):
        return TruncatedPoly.from_text(text, c, 2)

    want = {"t": P("-v1^2 - v2^2 - v3^2 - 3*A0")}
    for i in (1, 2, 3):
        want[f"x{i}"] = P(f"2*v{i} + 3*A{i}")
        want[f"v{i}"] = P(f"-2*x{i} + 2*t*v{i} + 3*t*A{i}")
        want[f"A{i}"] = P(f"-3*x{i}")
    want["A0"] = P("3*t")
    bad = [k for k, w in want.items() if inv[k] != w]
    assert report(6, not bad, f"energy, P = mv + qA, boost, -qx, qt rows (m=2, q=3): mismatches {bad or 'none'}")


# -- 7 ------------------------------------------------------------------------

def test_criterion_07a_galilei_table():
    th = theta_pc(mass=2, dim=3)
    res = check_strict_invariance(th, galilei_fields(2, 3))
    strict = all(res[k].status == "strict" for k in ("b", "a1", "a2", "a3", "eps1", "eps2", "eps3"))
    boost = all(res[f"V{i}"].status == "semi"
                and res[f"V{i}"].g == TruncatedPoly.from_text(f"2*x{i}", th.chart, res[f"V{i}"].g.degree)
                for i in (1, 2, 3))
    assert report("7a", strict and boost, f"time/space translations and rotations strict: {strict};"
                                          f" boosts semi with g = m x: {boost}")


def test_criterion_07b_extended_current_strict():
    res = check_strict_invariance(theta_gravity(2, 3), extended_current_fields([1, 2, 0, 1], 2, 3))
    status = {k: r.status for k, r in res.items()}
    ok = all(s == "strict" for s in status.values())
    assert report("7b", ok, f"phase-completed current generators on Theta' + hbar dphi: {status}")


# -- 8 ------------------------------------------------------------------------

def _cyclotron(n, m=2.0, q=0.5, B=1.5, v=0.8):
    orb = cyclotron_oracle(m, q, B, v)
    spec = FieldSpec.from_strings({"A1": "-B0/2*x2", "A2": "B0/2*x1"}, {"B0": B})
    model = ForceModel("lorentz", {"m": m, "q": q})
    traj = integrate(make_rhs(model, spec), ParticleState(0, (0, 0, 0), (v, 0, 0)), orb["period"] / n, n)
    w = q * B / m
    exact = np.stack([v / w * np.sin(w * traj.times), v / w * (np.cos(w * traj.times) - 1), 0 * traj.times], 1)
    return traj, model, spec, orb, np.max(np.linalg.norm(traj.x - exact, axis=1))


def test_criterion_08_lorentz():
    t0 = time.perf_counter()
    traj, model, spec, orb, _ = _cyclotron(1000)
    dt = time.perf_counter() - t0
    closure = np.linalg.norm(traj.x[-1] - traj.x[0]) / orb["radius"]
    drift = monitor_invariants(traj, model, spec)["drift"]["energy"]
    ratio = _cyclotron(200)[4] / _cyclotron(400)[4]
    ok = closure < 1e-6 and drift < 1e-8 and 12 <= ratio <= 20 and dt < 1
    assert report(8, ok, f"closure {closure:.1e} r (< 1e-6), energy drift {drift:.1e} (< 1e-8),"
                         f" convergence ratio {ratio:.2f} in [12, 20], {dt:.2f}s (< 1 s)")


# -- 9 ------------------------------------------------------------------------

def test_criterion_09_free_phase():
    m, hbar = 2.0, 3.0
    model = ForceModel("lorentz", {"m": m, "hbar": hbar})
    s0 = ParticleState(0, (1, 0, -1), (0.3, -0.2, 0.1), 0.25)
    traj = integrate(make_rhs(model), s0, 0.01, 10_000)
    P2 = (m * 0.3) ** 2 + (m * 0.2) ** 2 + (m * 0.1) ** 2
    closed = 0.25 - P2 / (2 * m) * traj.times / hbar
    err = float(np.max(np.abs(traj.phase - closed)))
    assert report(9, err < 1e-10, f"max |phi - (phi0 - P^2 t/(2 m hbar))| over 1e4 steps {err:.1e} (< 1e-10)")


# -- 10 -----------------------------------------------------------------------

def test_criterion_10_reduction():
    rng = random.Random(10)
    specs = [load(n) for n in ("uniform_B", "electrostatic", "plane_wave")]
    bitwise = True
    for k in range(100):
        s = ParticleState(rng.uniform(-1, 1), [rng.uniform(0.5, 2) for _ in range(3)],
                          [rng.uniform(-0.15, 0.15) for _ in range(3)])
        spec = specs[k % 3]
        consts = {"m": rng.uniform(0.5, 2), "q": rng.uniform(-1, 1)}
        bitwise &= np.array_equal(lorentz_rhs(s, spec, consts),
                                  electrograv_rhs(s, spec, ForceModel("electrograv", {**consts, "kappa": 0})))
    worst = 0.0
    names = ("t", "x1", "x2", "x3")
    for name in ("gravitomagnetic", "mixed", "kepler_h00"):
        spec = load(name)
        cval = 2.0
        model = ForceModel("electrograv", {"m": 1.5, "q": 0.4, "c": cval, "kappa": 0, "g": "mc"},
                           toggles={2}, vmax_fraction=None)
        h = [spec.h[f"h0{i}"] for i in (1, 2, 3)]
        for _ in range(20):
            s = ParticleState(rng.uniform(-1, 1), [rng.uniform(0.5, 2) for _ in range(3)],
                              [rng.uniform(-0.2, 0.2) for _ in range(3)])
            pt = (s.t, *s.x)

            def d(e, var):
                return evaluate(differentiate(e, var), pt, spec.params)

            d0h = np.array([d(e, "t") / cval for e in h])
            grad = np.array([d(spec.h["h00"], v) for v in names[1:]])
            curl = np.array([d(h[2], "x2") - d(h[1], "x3"), d(h[0], "x3") - d(h[2], "x1"),
                             d(h[1], "x1") - d(h[0], "x2")])
            want = d0h + grad - np.cross(s.v, curl)
            got = electrograv_rhs(s, spec, model)[3:6]
            worst = max(worst, float(np.max(np.abs(got - want))))
    ok = bitwise and worst < 1e-12
    assert report(10, ok, f"kappa=0,h=0 bitwise equal on 100 states: {bitwise};"
                          f" line 2 vs d0 h + grad h00 - v x curl h: {worst:.1e} (< 1e-12)")


# -- 11 -----------------------------------------------------------------------

def test_criterion_11_mixing_force():
    spec = load("pure_gravity")
    rng = random.Random(11)
    worst = 0.0
    lorentz_zero = True
    for _ in range(5):
        s = ParticleState(rng.uniform(0, 1), [rng.uniform(-1, 1) for _ in range(3)],
                          [rng.uniform(-0.1, 0.1) for _ in range(3)])
        for which in ("kappa", "q"):
            xs = [rng.uniform(-1, 1) for _ in range(10)]
            ys, unit = [], None
            for x in xs + [1.0]:
                consts = {"m": 1, "q": x if which == "q" else 0.6, "kappa": x if which == "kappa" else 0.6}
                lines = electrograv_lines(s, spec, ForceModel("electrograv", consts, toggles={1, 5}))
                lorentz_zero &= not np.any(lines[1])
                ys.append(lines[5])
            unit = ys.pop()
            for comp in range(3):
                if abs(unit[comp]) < 1e-14:
                    continue
                slope = np.polyfit(xs, [y[comp] for y in ys], 1)[0]
                worst = max(worst, abs(slope / unit[comp] - 1))
    ok = worst < 1e-6 and lorentz_zero
    assert report(11, ok, f"A = 0, h != 0: line-5 slope rel error in kappa and q {worst:.1e} (< 1e-6);"
                          f" Lorentz line zero: {lorentz_zero}")


# -- 12 -----------------------------------------------------------------------

def test_criterion_12_mass_split():
    sc = Scenario(load("pure_gravity"), ParticleState(0, (0.5, 0, 1), (0.05, 0.02, 0)), 1.0, 10,
                  {"m": 1, "q": 1})
    rows = kappa_scan(sc, ["1e-8"])
    split = rows[0]["mass_split"]
    cell = scan_csv(rows).splitlines()[1].split(",")[3]
    ok = split == Fraction(2, 10 ** 8) and cell == "2e-08"
    assert report(12, ok, f"kappa q/m = 1e-8 -> split {split} (exact), table cell {cell}")


# -- 13 -----------------------------------------------------------------------

def test_criterion_13_parser():
    rng = random.Random(13)
    worst = 0.0
    for path in FIELD_CORPUS:
        spec = FieldSpec.load(path)
        for e in list(spec.A.values()) + list(spec.h.values()):
            for _ in range(10):
                pt = [rng.uniform(-1, 1), rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2)]
                for k, var in enumerate(("t", "x1", "x2", "x3")):
                    d = evaluate(differentiate(e, var), pt, spec.params)
                    hi, lo = list(pt), list(pt)
                    hi[k] += 1e-5
                    lo[k] -= 1e-5
                    fd = (evaluate(e, hi, spec.params) - evaluate(e, lo, spec.params)) / 2e-5
                    worst = max(worst, abs(d - fd) / max(1.0, abs(d)))
    gen = random.Random(2024)
    trips = 0
    for _ in range(100):
        e = parse(random_expr_text(gen))
        once = to_text(e)
        trips += parse(once) == e and to_text(parse(once)) == once
    ok = worst < 1e-6 and trips == 100
    assert report(13, ok, f"derivative vs central difference rel error {worst:.1e} (< 1e-6)"
                          f" on {len(FIELD_CORPUS)} field files; round trips {trips}/100")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
