import itertools
from fractions import Fraction

import pytest

from gaqkit.algebra import bracket
from gaqkit.catalog import catalog
from gaqkit.formal_group import LawError, closed_form_GE, exponentiate
from gaqkit.geometry import (
    NotLiftable,
    PolyField,
    characteristic_module,
    combination,
    differential,
    exterior_derivative,
    hamiltonian_lift,
    interior,
    left_invariant_fields,
    lie_derivative,
    noether,
    one_form,
    right_invariant_fields,
    theta,
)
from gaqkit.models import movement_chart, theta_canonical, theta_pc
from gaqkit.poly import TruncatedPoly

K = {"m": 2, "q": 1, "hbar": 3}


@pytest.fixture(scope="module")
def ge():
    law = closed_form_GE(K, degree=4)
    left = left_invariant_fields(law)
    right = right_invariant_fields(law)
    th = theta(law, left)
    return law, left, right, th


def poly(chart, text, degree=3):
    return TruncatedPoly.from_text(text, chart, degree)


def test_left_fields_at_identity(ge):
    law, left, right, _ = ge
    origin = {n: 0 for n in law.chart.names}
    for a in law.chart.names:
        for X in (left[a], right[a]):
            assert {n: v for n, v in X.at(origin).items() if v} == {a: 1}


def test_left_time_field(ge):
    law, left, _, _ = ge
    c = law.chart
    Xt = left["t"]
    assert Xt.component("t") == TruncatedPoly.const(c, 1, 3)
    assert Xt.component("x1") == poly(c, "v1")
    # -(1/hbar)[1/2 m v^2 + q(v.A - A0)] with m = 2, q = 1, hbar = 3
    want = poly(c, "-1/3*v1^2 - 1/3*v2^2 - 1/3*v3^2 - 1/3*v1*A1 - 1/3*v2*A2 - 1/3*v3*A3 + 1/3*A0")
    assert Xt.component("phi") == want


def test_left_brackets_reproduce_algebra(ge):
    law, left, _, _ = ge
    alg = law.algebra
    for a, b in itertools.combinations(alg.generators, 2):
        got = left[a].bracket(left[b]).truncate(2)
        want = combination(left, bracket(alg, a, b)).truncate(2)
        assert got == want, (a, b)


def test_right_brackets_have_opposite_sign(ge):
    law, _, right, _ = ge
    alg = law.algebra
    for a, b in [("t", "v1"), ("x1", "v1"), ("t", "A0"), ("eps1", "x2"), ("v2", "A0")]:
        got = right[a].bracket(right[b]).truncate(2)
        want = combination(right, {k: -c for k, c in bracket(alg, a, b).items()}).truncate(2)
        assert got == want, (a, b)


def test_left_and_right_commute(ge):
    law, left, right, _ = ge
    for a in law.chart.names:
        for b in law.chart.names:
            assert left[a].bracket(right[b]).truncate(2).is_zero(), (a, b)


def test_right_fields_rows(ge):
    law, _, right, _ = ge
    c = law.chart
    XA = right["A1"].truncate(1)
    assert XA.component("A1") == TruncatedPoly.const(c, 1, 1)
    # -(q/hbar) x1 on the phase, x1 the only other slot
    assert XA.component("phi") == poly(c, "-1/3*x1", 1)
    assert {n for n in c.names if not XA.component(n).is_zero()} == {"A1", "phi"}
    Xv = right["v1"].truncate(1)
    assert Xv.component("v1") == TruncatedPoly.const(c, 1, 1)
    assert Xv.component("x1") == poly(c, "t", 1)


def test_theta_closed_form(ge):
    law, _, _, th = ge
    c = law.chart
    assert th.coefficient("t") == poly(c, "-v1^2 - v2^2 - v3^2 - A0")
    for i in (1, 2, 3):
        assert th.coefficient(f"x{i}") == poly(c, f"2*v{i} + A{i}")
        assert th.coefficient(f"v{i}").is_zero()
        assert th.coefficient(f"eps{i}").is_zero()
    assert th.coefficient("phi") == TruncatedPoly.const(c, 3, 3)


def test_theta_free_particle():
    law = closed_form_GE({"m": 2, "q": 0, "hbar": 3}, degree=3)
    th = theta(law)
    c = law.chart
    assert th.coefficient("t") == poly(c, "-v1^2 - v2^2 - v3^2", 2)
    assert th.coefficient("x1") == poly(c, "2*v1", 2)
    assert all(th.coefficient(f"A{i}").is_zero() for i in range(4))


def test_theta_on_vertical_field(ge):
    law, left, _, th = ge
    assert interior(left["phi"], th) == TruncatedPoly.const(law.chart, 3, 3)


def test_theta_needs_phase():
    law = exponentiate(catalog("galilei_1p1_gauged", D=1), 2)
    with pytest.raises(LawError):
        theta(law)


def test_theta_is_right_invariant(ge):
    law, _, right, th = ge
    for a, X in right.items():
        assert lie_derivative(X, th).truncate(2).is_zero(), a


def test_d_squared_vanishes(ge):
    _, _, _, th = ge
    dth = exterior_derivative(th)
    assert exterior_derivative(dth).is_zero()
    c = movement_chart(1)
    f = poly(c, "t*x^2 - 3*p*x + p^3")
    assert exterior_derivative(differential(f)).is_zero()


def test_pc_two_form():
    th = theta_pc(mass=2, dim=1)
    om = exterior_derivative(th)
    c = th.chart
    # dp^dx - (p/m) dp^dt
    assert om.coefficient("p", "x") == TruncatedPoly.const(c, 1, om.poly_degree)
    assert om.coefficient("p", "t") == poly(c, "-1/2*p", om.poly_degree)
    assert om.coefficient("t", "x").is_zero()


def test_kernel_free_of_charge():
    law = closed_form_GE({"m": 2, "q": 0, "hbar": 3}, degree=4)
    kb = characteristic_module(theta(law))
    assert kb.rank == 8 and kb.verified
    assert kb.quotient_dimension == 6
    used = set().union(*(set(cmb) for cmb in kb.combinations))
    assert used == {"t", "eps1", "eps2", "eps3", "A1", "A2", "A3", "A0"}


def test_kernel_with_charge(ge):
    _, _, _, th = ge
    kb = characteristic_module(th)
    assert kb.rank == 6 and kb.verified
    assert kb.quotient_dimension == 8
    combos = []
    for cmb in kb.combinations:
        lead = next(k for k in cmb if k.startswith(("A", "eps")))
        combos.append({k: v / cmb[lead] for k, v in cmb.items()})
    # A_i - (q/m) v_i with q/m = 1/2
    for i in (1, 2, 3):
        assert {f"A{i}": 1, f"v{i}": Fraction(-1, 2)} in combos
    for i in (1, 2, 3):
        assert {f"eps{i}": 1} in combos


def test_kernel_pc_form():
    th = theta_pc(mass=2, dim=1)
    kb = characteristic_module(th)
    assert kb.rank == 1
    X = kb.generators[0]
    c = th.chart
    assert X.component("t") == TruncatedPoly.const(c, 1, X.degree)
    assert X.component("x") == poly(c, "1/2*p", X.degree)
    assert X.component("p").is_zero()


def test_noether_list(ge):
    law, _, right, th = ge
    c = law.chart
    inv = {k: p.truncate(2) for k, p in noether(th, right).items()}
    assert inv["x1"] == poly(c, "2*v1 + A1", 2)
    assert inv["A1"] == poly(c, "-x1", 2)
    assert inv["A0"] == poly(c, "t", 2)
    assert inv["phi"] == TruncatedPoly.const(c, 3, 2)


def test_noether_boost_is_hamilton_jacobi_chart():
    law = closed_form_GE({"m": 2, "q": 0, "hbar": 3}, degree=4)
    inv = noether(theta(law), right_invariant_fields(law))
    assert inv["v1"].truncate(2) == poly(law.chart, "-2*x1 + 2*t*v1", 2)


def test_noether_constant_along_kernel(ge):
    _, _, right, th = ge
    kb = characteristic_module(th)
    inv = noether(th, right)
    for X in kb.generators:
        for k, f in inv.items():
            assert X(f).truncate(1).is_zero(), k


def test_lift_of_constant_is_vertical():
    th = theta_canonical(hbar=3)
    c = th.chart
    X = hamiltonian_lift(TruncatedPoly.const(c, 3, 4), th)
    assert X == PolyField(c, {"phi": TruncatedPoly.const(c, 1, 4)}, X.degree)
    assert hamiltonian_lift(TruncatedPoly.zero(c, 4), th).is_zero()


def test_lift_bracket_mirrors_poisson():
    th = theta_canonical(hbar=3)
    c = th.chart
    XK = hamiltonian_lift(poly(c, "K", 4), th)
    XP = hamiltonian_lift(poly(c, "P", 4), th)
    br = XK.bracket(XP)
    assert br == PolyField(c, {"phi": TruncatedPoly.const(c, Fraction(-1, 3), 4)}, br.degree)
    for X in (XK, XP):
        assert lie_derivative(X, th).is_zero()


def test_lift_is_linear():
    th = theta_canonical(hbar=2)
    c = th.chart
    f, g = poly(c, "K*P", 4), poly(c, "P^2 - K", 4)
    lhs = hamiltonian_lift(f.scale(3) + g.scale(Fraction(-1, 2)), th)
    rhs = hamiltonian_lift(f, th).scale(3) + hamiltonian_lift(g, th).scale(Fraction(-1, 2))
    assert lhs == rhs


def test_lift_needs_contact_form():
    th = theta_pc(mass=1, dim=1)
    with pytest.raises(NotLiftable):
        hamiltonian_lift(poly(th.chart, "x"), th)


def test_interior_and_one_form_basics():
    c = movement_chart(1)
    om = one_form(c, {"x": poly(c, "p")}, 3)
    X = PolyField(c, {"x": TruncatedPoly.const(c, 2, 3), "t": poly(c, "p")}, 3)
    assert interior(X, om) == poly(c, "2*p")
