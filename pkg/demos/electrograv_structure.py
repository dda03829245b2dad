"""Structure of the Poincaré-type algebra with electromagnetic and gravitational sectors.

Shows which reading of the A-term brackets satisfies Jacobi, that the
mixing brackets disappear at κ = 0, and the constant rows of dΘ that
carry the shifted inertial mass (m + κq)c.
"""

from gaqkit.catalog import catalog, peg_deviations, peg_mixing_terms
from gaqkit.formal_group import check_group_axioms, group_law_PEG
from gaqkit.geometry import characteristic_module, exterior_derivative, theta

K = {"m": 2, "q": 3, "kappa": 5, "c": 7}

dev = peg_deviations({**K, "g": 1})
for reading, info in dev["readings"].items():
    print(f"reading {reading:9s}: jacobi {'ok' if info['jacobi_ok'] else 'fails'}"
          f" ({info.get('violations', 0)} violating triples)")

print("mixing brackets at kappa = 5:", len(peg_mixing_terms(catalog("PEG", K))))
print("mixing brackets at kappa = 0:", len(peg_mixing_terms(catalog("PEG", {**K, "kappa": 0}))))

law = group_law_PEG(K, order=3)
rep = check_group_axioms(law)
print(f"\ngroup law through order 3: identity {rep.identity_ok}, inverse {rep.inverse_ok},"
      f" associativity {rep.associativity_ok}, cocycle {rep.cocycle_ok}")

th = theta(law)
dth = exterior_derivative(th)
print("\nconstant rows of dΘ:")
for a, b in (("h00", "x0"), ("e01", "x1"), ("h01", "x1"), ("A0", "x0"), ("A1", "x1")):
    print(f"  d{a}^d{b}: {dth.coefficient(a, b).constant()}")
print(f"(m + kappa q) c = {(K['m'] + K['kappa'] * K['q']) * K['c']}")

kb = characteristic_module(th)
print(f"\ncharacteristic module rank {kb.rank}, quotient dimension {kb.quotient_dimension}")
