"""From the electromagnetic Galilei algebra to the Lorentz force.

Builds the centrally extended algebra with a local U(1), exponentiates it,
extracts the quantization form Θ and its characteristic module, and reads
off the canonical momentum P = m v + q A among the Noether invariants.
"""

from gaqkit.catalog import catalog
from gaqkit.algebra import check_jacobi
from gaqkit.formal_group import closed_form_GE, exponentiate
from gaqkit.geometry import (
    characteristic_module,
    exterior_derivative,
    left_invariant_fields,
    noether,
    right_invariant_fields,
    theta,
)

K = {"m": 2, "q": 3, "hbar": 5}

alg = catalog("GE", K)
print(f"{alg.name}: {len(alg.generators)} generators, {check_jacobi(alg).summary()}")

# the BCH law (rotations frozen) and the closed form agree through degree 3
bch = exponentiate(alg, 3, freeze=["eps1", "eps2", "eps3"])
law = closed_form_GE(K, degree=4)
same = all(bch.composition[n] == law.truncate(3).composition[n] for n in bch.chart.names)
print("BCH law equals closed form through degree 3:", same)
print("phase cocycle:", law.truncate(2).phase_cocycle().to_text())

L = left_invariant_fields(law)
th = theta(law, L)
print("\nquantization form Θ:")
print(th.to_text())

kb = characteristic_module(th, L)
print(f"\ncharacteristic module: rank {kb.rank}, solution manifold dimension {kb.quotient_dimension}")
for cmb in kb.combinations:
    print("  ", " + ".join(f"{v}*X_{k}" for k, v in cmb.items()))

print("\nNoether invariants i_{X^R} Θ:")
inv = noether(th, right_invariant_fields(law))
for k in ("t", "x1", "v1", "A1", "A0"):
    print(f"  {k:>3}: {inv[k].truncate(2).to_text()}")

print("\ndΘ, first rows:")
for line in exterior_derivative(th).to_text().splitlines()[:6]:
    print("  ", line)
