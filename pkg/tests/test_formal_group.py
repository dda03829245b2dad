import time
from fractions import Fraction

import pytest

from gaqkit.algebra import AlgebraError, AlgebraSpec
from gaqkit.catalog import catalog
from gaqkit.formal_group import (
    DomainError,
    GroupLaw,
    UnsupportedOrder,
    check_group_axioms,
    closed_form_GE,
    exponentiate,
    group_law_PEG,
    inverse,
    xi_m,
    xi_q,
)
from gaqkit.poly import TruncatedPoly

K = {"m": 3, "q": Fraction(1, 2), "hbar": 2}
ETA = [1, -1, -1, -1]


def law_poly(law, text):
    return TruncatedPoly.from_text(text, law.pair, law.degree)


def test_heisenberg_order_two():
    law = exponentiate(catalog("heisenberg"), 2)
    assert law.composition["z"] == law_poly(law, "z' + z + 1/2*x'*y - 1/2*y'*x")
    assert law.composition["x"] == law_poly(law, "x' + x")


def test_heisenberg_is_exact_at_higher_order():
    assert exponentiate(catalog("heisenberg"), 4).composition["z"].max_degree() == 2


def test_abelian_adds():
    law = exponentiate(catalog("abelian", n=3), 3)
    for n in law.chart.names:
        assert law.composition[n] == law_poly(law, f"{n}' + {n}")


def test_bargmann_sector():
    keep = {"t", "x1", "v1", "phi"}
    alg = catalog("GE", K)
    law = exponentiate(alg, 3, freeze=[g for g in alg.generators if g not in keep])
    xi = law.phase_cocycle()
    # -(m/hbar)(v1' x1 + 1/2 t v1'^2)
    assert xi == law_poly(law, "-3/2*v1'*x1 - 3/4*t*v1'^2")


def test_non_jacobi_algebra_rejected():
    bad = AlgebraSpec.build("bad", ["a", "b", "c"], {("a", "b"): {"c": 1}, ("b", "c"): {"a": 1},
                                                     ("a", "c"): {"a": 1}})
    with pytest.raises(AlgebraError):
        exponentiate(bad, 2)
    with pytest.raises(ValueError):
        exponentiate(catalog("heisenberg"), 0)


def test_closed_form_axioms_exact_trials():
    law = closed_form_GE(K, degree=3)
    rep = check_group_axioms(law, trials=100, seed=7)
    assert rep.ok, rep
    assert rep.trials == 100


def test_closed_form_axioms_with_rotations():
    rep = check_group_axioms(closed_form_GE(K, degree=3), trials=100, seed=3, rotations=True)
    assert not rep.trial_failures


def test_identity_composition():
    law = closed_form_GE(K)
    g = {"t": Fraction(1, 3), "x2": 2, "v1": -1, "A0": Fraction(5, 7), "phi": 1}
    e = {}
    assert {k: v for k, v in law.compose(g, e).items() if v} == {k: Fraction(v) for k, v in g.items()}
    assert {k: v for k, v in law.compose(e, g).items() if v} == {k: Fraction(v) for k, v in g.items()}
    zero = law.compose(e, e)
    assert all(v == 0 for v in zero.values())


def test_rotation_domain_error():
    law = closed_form_GE(K)
    with pytest.raises(DomainError):
        law.compose({"eps1": Fraction(19, 10)}, {"eps1": Fraction(19, 10)})


def test_charge_cocycle_symbolic():
    law = closed_form_GE(K, degree=3, rotations=False)
    xi = law.phase_cocycle()
    charge = law_poly(law, "-1/4*A1'*x1 - 1/4*A2'*x2 - 1/4*A3'*x3 + 1/4*t*A0'"
                           " - 1/4*t*v1'*A1' - 1/4*t*v2'*A2' - 1/4*t*v3'*A3'")
    mass = law_poly(law, "-3/2*v1'*x1 - 3/2*v2'*x2 - 3/2*v3'*x3"
                         " - 3/4*t*v1'^2 - 3/4*t*v2'^2 - 3/4*t*v3'^2")
    assert xi == charge + mass


def test_cocycle_functions_vanish_at_identity():
    g = {"t": 2, "x1": 1, "v2": 3, "A1": 5, "A0": 1}
    for f in (xi_m, xi_q):
        assert f({}, g, K) == 0
        assert f(g, {}, K) == 0


def test_corrupted_law_has_associativity_residual():
    law = exponentiate(catalog("heisenberg"), 3)
    comp = dict(law.composition)
    comp["z"] = comp["z"] + law_poly(law, "x'*x*y")
    bad = GroupLaw("corrupt", law.chart, comp, law.degree, law.kind)
    rep = check_group_axioms(bad)
    assert not rep.associativity_ok
    assert rep.lowest_residual_degree == 3
    assert check_group_axioms(law).ok


def test_order_stability():
    alg = catalog("GE", K)
    l3 = exponentiate(alg, 3)
    l2 = exponentiate(alg, 2)
    for n in alg.generators:
        assert l3.composition[n].truncate(2) == l2.composition[n]


def test_inverse_through_order():
    law = exponentiate(catalog("GE", K), 3)
    inv = inverse(law)
    ident = {n: TruncatedPoly.var(law.chart, n, 3) for n in law.chart.names}
    res = law.compose_poly(ident, inv)
    assert all(p.is_zero() for p in res.values())


def test_bch_matches_closed_form_without_rotations():
    t0 = time.perf_counter()
    alg = catalog("GE", K)
    bch = exponentiate(alg, 3, freeze=["eps1", "eps2", "eps3"])
    closed = closed_form_GE(K, degree=3, rotations=False)
    assert bch.chart == closed.chart
    for n in closed.chart.names:
        assert bch.composition[n] == closed.composition[n], n
    assert time.perf_counter() - t0 < 60


def test_bch_with_rotations_differs_only_in_rotation_chart():
    # exponential rotation coordinates vs the sqrt(1 - eps^2/4) chart: cubic eps terms only
    bch = exponentiate(catalog("GE", K), 3)
    closed = closed_form_GE(K, degree=3)
    for n in closed.chart.names:
        diff = bch.composition[n] - closed.composition[n]
        if not n.startswith("eps"):
            assert diff.is_zero(), n
            continue
        assert diff.min_degree() == 3
        assert all(diff.chart.names[i].startswith("eps") for m in diff.terms for i in m)


# -- P_EG ---------------------------------------------------------------------

PEG_K = {"m": 2, "q": 3, "kappa": 5, "c": 7}


@pytest.fixture(scope="module")
def peg_law():
    return group_law_PEG(PEG_K, order=2)


def _eps(a, b):
    return f"e{a}{b}" if a < b else f"e{b}{a}"


def _h(a, b):
    return f"h{min(a, b)}{max(a, b)}"


def _stored_pairs(kind):
    """Stored index pairs, each summed over once: e^{nu rho} with nu < rho, h with nu <= rho."""
    return [(a, b) for a in range(4) for b in range(4) if (a < b if kind == "e" else a <= b)]


def _reference_x(law, alpha):
    # eta_{mu[nu} delta_{rho]}^alpha e'^{nu rho} x^mu + eta_{mu(nu} delta_{rho)}^alpha h'^{nu rho} x^mu
    terms = {}
    for nu, rho in _stored_pairs("e"):
        for mu in range(4):
            c = ETA[mu] * ((mu == nu) * (rho == alpha) - (mu == rho) * (nu == alpha))
            if c:
                key = f"{_eps(nu, rho)}'*x{mu}"
                terms[key] = terms.get(key, 0) + c
    for nu, rho in _stored_pairs("h"):
        for mu in range(4):
            c = ETA[mu] * ((mu == nu) * (rho == alpha) + (mu == rho) * (nu == alpha))
            if c:
                key = f"{_h(nu, rho)}'*x{mu}"
                terms[key] = terms.get(key, 0) + c
    out = TruncatedPoly.zero(law.pair, law.degree)
    for mono, c in terms.items():
        out = out + law_poly(law, mono).scale(c)
    return out


def _reference_phi(law, k):
    # -(m+kq)c e'^{0i} x^i - mc eta_{mu(nu} delta_{rho)}^0 h'^{nu rho} x^mu + q eta_{nu mu} A'^nu x^mu
    m, q, kap, c = (Fraction(k[n]) for n in ("m", "q", "kappa", "c"))
    out = TruncatedPoly.zero(law.pair, law.degree)
    for i in (1, 2, 3):
        out = out + law_poly(law, f"e0{i}'*x{i}").scale(-(m + kap * q) * c)
    for nu, rho in _stored_pairs("h"):
        for mu in range(4):
            coef = ETA[mu] * ((mu == nu) * (rho == 0) + (mu == rho) * (nu == 0))
            if coef:
                out = out + law_poly(law, f"{_h(nu, rho)}'*x{mu}").scale(-m * c * coef)
    for mu in range(4):
        out = out + law_poly(law, f"A{mu}'*x{mu}").scale(q * ETA[mu])
    return out


def test_peg_x_bilinear_terms_match_reference(peg_law):
    for a in range(4):
        p = peg_law.composition[f"x{a}"]
        assert p.homogeneous(2) == _reference_x(peg_law, a)
        assert p.homogeneous(1) == law_poly(peg_law, f"x{a}' + x{a}")


def test_peg_phase_bilinear_terms_match_reference(peg_law):
    xi = peg_law.phase_cocycle()
    assert xi.homogeneous(2) == _reference_phi(peg_law, PEG_K)
    assert xi.coefficient("e01'*x1") == -(2 + 5 * 3) * 7


def test_peg_identity_law(peg_law):
    pc = peg_law.pair
    zero_primed = {n + "'": TruncatedPoly.zero(pc, 2) for n in peg_law.chart.names}
    for n in peg_law.chart.names:
        assert peg_law.composition[n].substitute(zero_primed) == TruncatedPoly.var(pc, n, 2)


def test_peg_mixing_enters_a_terms(peg_law):
    # kappa-dependent e'h couplings in A''
    assert peg_law.composition["A1"].coefficient("e01'*h11") != 0
    plain = group_law_PEG({**PEG_K, "kappa": 0}, order=2)
    assert plain.composition["A1"].coefficient("e01'*h11") == 0


def test_peg_order_guard():
    with pytest.raises(UnsupportedOrder):
        group_law_PEG(PEG_K, order=4)


def test_peg_order_three_axioms():
    law = group_law_PEG({"m": 1, "q": 1, "kappa": Fraction(1, 2)}, order=3)
    rep = check_group_axioms(law, order=3)
    assert rep.identity_ok and rep.inverse_ok and rep.associativity_ok and rep.cocycle_ok
