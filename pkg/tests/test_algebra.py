import itertools
import time
from fractions import Fraction

import pytest

from gaqkit.algebra import (
    AlgebraCocycle,
    AlgebraFormatError,
    AlgebraSpec,
    BasisError,
    CocycleError,
    TruncationError,
    algebra_from_text,
    algebra_to_text,
    apply_basis_shift,
    bracket,
    central_extend,
    check_cocycle,
    check_jacobi,
    coboundary_trivialization,
    current_bracket,
    make_constants,
)
from gaqkit.catalog import (
    catalog,
    current_algebra_1p1,
    galilei_cocycle,
    galilei_unextended,
    peg_deviations,
    peg_mixing_terms,
)

K = {"m": 3, "q": Fraction(1, 2), "hbar": 2}


def test_galilei_central_term():
    alg = catalog("galilei_extended", K)
    assert bracket(alg, "V1", "a1") == {"phi": Fraction(3, 2)}
    assert bracket(alg, "V1", "a2") == {}


def test_bracket_antisymmetric_and_bilinear():
    alg = catalog("GE", K)
    u = {"t": 2, "x1": Fraction(1, 3)}
    v = {"v1": 1, "A0": -1}
    assert bracket(alg, u, u) == {}
    uv, vu = bracket(alg, u, v), bracket(alg, v, u)
    assert {k: -c for k, c in vu.items()} == uv


def test_electromagnetic_rows():
    alg = catalog("GE", K)
    assert bracket(alg, "t", "A0") == {"phi": Fraction(-1, 4)}
    assert bracket(alg, "x1", "A1") == {"phi": Fraction(1, 4)}
    assert bracket(alg, "x1", "A2") == {}


def test_unknown_generator():
    with pytest.raises(BasisError):
        bracket(catalog("GE"), "t", "nope")


@pytest.mark.parametrize("name", ["galilei_extended", "GE", "PEG", "galilei_1p1_gauged", "abelian", "heisenberg"])
def test_catalog_jacobi(name):
    rep = check_jacobi(catalog(name, K))
    assert rep.ok, rep.summary()


def test_phase_is_central():
    for name in ("galilei_extended", "GE", "PEG"):
        alg = catalog(name, K)
        assert all(bracket(alg, alg.central, g) == {} for g in alg.generators)


def test_ge_has_fifteen_generators():
    assert len(catalog("GE").generators) == 15


def test_perturbed_cocycle_breaks_jacobi():
    alg = catalog("galilei_extended", K)
    br = alg.brackets()
    br[("a1", "V1")] = {"phi": br[("a1", "V1")]["phi"] + 1}
    bad = AlgebraSpec.build("perturbed", list(zip(alg.generators, alg.roles)), br, alg.constants, "phi")
    rep = check_jacobi(bad)
    assert not rep.ok
    assert set(rep.violating_triples) == {("a1", "V2", "eps3"), ("a1", "V3", "eps2"),
                                          ("a2", "V1", "eps3"), ("a3", "V1", "eps2")}


def test_central_extend_reproduces_galilei():
    ext = central_extend(galilei_unextended(K), galilei_cocycle(K))
    ref = catalog("galilei_extended", K)
    for a, b in itertools.combinations(ref.generators, 2):
        assert bracket(ext, a, b) == bracket(ref, a, b)


def test_zero_cocycle_is_direct_product():
    base = galilei_unextended(K)
    ext = central_extend(base, AlgebraCocycle({}))
    assert all(bracket(ext, "phi", g) == {} for g in ext.generators)
    for a, b in itertools.combinations(base.generators, 2):
        assert bracket(ext, a, b) == bracket(base, a, b)


def test_forgetting_phase_restores_structure():
    base = galilei_unextended(K)
    ext = central_extend(base, galilei_cocycle(K))
    for a, b in itertools.combinations(base.generators, 2):
        strip = {k: c for k, c in bracket(ext, a, b).items() if k != "phi"}
        assert strip == bracket(base, a, b)


def test_bad_cocycle_rejected():
    base = galilei_unextended(K)
    bad = AlgebraCocycle({("V1", "a1"): 1})
    assert check_cocycle(base, bad)
    with pytest.raises(CocycleError):
        central_extend(base, bad)


def test_coboundary_trivialised_by_basis_change():
    base = galilei_unextended(K)
    lam = {"a1": Fraction(2), "b": Fraction(-1, 3)}
    pairs = {}
    for a, b in itertools.combinations(base.generators, 2):
        val = sum(c * lam.get(g, 0) for g, c in bracket(base, a, b).items())
        if val:
            pairs[(a, b)] = val
    cob = AlgebraCocycle(pairs)
    ext = central_extend(base, cob)
    found = coboundary_trivialization(base, cob)
    assert found is not None
    flat = apply_basis_shift(ext, found)
    assert all("phi" not in bracket(flat, a, b) for a, b in itertools.combinations(flat.generators, 2))
    # the Bargmann cocycle is not a coboundary
    assert coboundary_trivialization(base, galilei_cocycle(K)) is None


def test_peg_decouples_without_mixing():
    alg = catalog("PEG", {"kappa": 0, "g": "mc"})
    assert peg_mixing_terms(alg) == {}
    assert peg_mixing_terms(catalog("PEG", {"kappa": 1, "q": 1})) != {}


def _gravity_central_terms(alg):
    pairs = {}
    for a, b in itertools.combinations(alg.generators, 2):
        v = bracket(alg, a, b).get("phi", 0)
        if v and not b.startswith("A"):
            pairs[(a, b)] = v
    return AlgebraCocycle(pairs)


def test_peg_gravity_terms_trivial_without_mixing():
    # x-A terms are the genuine electric cocycle; the rest is a coboundary at kappa = 0
    alg = catalog("PEG", {"kappa": 0, "g": "mc", "m": 2, "q": 3})
    lam = coboundary_trivialization(alg.without(["phi"]), _gravity_central_terms(alg))
    assert {k: v for k, v in lam.items() if v} == {"x0": -2}
    alg = catalog("PEG", {"kappa": 1, "g": "mc", "m": 2, "q": 3})
    assert coboundary_trivialization(alg.without(["phi"]), _gravity_central_terms(alg)) is None


def test_peg_deviation_readings():
    rep = peg_deviations({"m": 1, "q": 1, "kappa": Fraction(1, 3), "g": 2})
    assert rep["readings"]["forced"]["jacobi_ok"]
    assert rep["readings"]["corrected"]["jacobi_ok"]
    assert not rep["readings"]["literal"]["jacobi_ok"]
    assert not rep["readings"]["natural"]["jacobi_ok"]
    assert rep["assumptions"]


def test_gauged_d0_is_rigid():
    alg = catalog("galilei_1p1_gauged", D=0)
    assert alg.generators == ("b0", "a0", "V")
    assert bracket(alg, "b0", "V") == {"a0": 1}


def test_current_bracket_rows():
    cur = current_algebra_1p1(3)
    assert current_bracket(cur, ([0, 1], "b"), ([1], "b")) == {"b": [-1]}
    assert current_bracket(cur, ([1, 2, 3], "b"), ([1], "a")) == {}
    assert current_bracket(cur, ([0, 0, 1], "b"), ([1], "V")) == {"a": [0, 0, 1]}


def test_current_bracket_closure_and_overflow():
    cur = current_algebra_1p1(2, {"m": 2})
    assert current_bracket(cur, ([0, 0, 1], "a"), ([1], "V")) == {"h": [0, 4]}
    with pytest.raises(TruncationError):
        current_bracket(cur, ([0, 0, 0, 1], "b"), ([1], "b"))
    with pytest.raises(TruncationError):
        current_bracket(cur, ([0, 0, 1], "b"), ([0, 0, 1], "a"))


def test_text_round_trip():
    alg = catalog("GE", K)
    back = algebra_from_text(algebra_to_text(alg))
    assert back.generators == alg.generators
    assert back.brackets() == alg.brackets()
    assert back.central == alg.central


def test_malformed_text():
    with pytest.raises(AlgebraFormatError):
        algebra_from_text("generator x\nbracket x y\n")
    with pytest.raises(AlgebraFormatError):
        algebra_from_text("")


def test_unknown_constant():
    with pytest.raises(ValueError):
        make_constants({"mass": 1})
    assert make_constants({"m": 2, "c": 3})["g"] == 6


def test_jacobi_runtime():
    for name, opts in (("galilei_extended", {}), ("GE", {}), ("PEG", {}), ("galilei_1p1_gauged", {"D": 3})):
        t0 = time.perf_counter()
        check_jacobi(catalog(name, K, **opts))
        assert time.perf_counter() - t0 < 5
