"""A charge-dependent force from gravitational potentials alone.

With no electromagnetic potentials the Lorentz line vanishes, yet a nonzero
mixing constant κ separates the orbits of +q and -q.  The separation grows
linearly in κ while the particle/antiparticle mass split is 2|κq|/m.
"""

from gaqkit.dynamics import ParticleState, Scenario, kappa_scan, scan_csv
from gaqkit.fieldexpr import FieldSpec

fields = FieldSpec.from_strings(
    {"h00": "2*gz*x3", "h01": "-w*x2", "h02": "w*x1"}, {"gz": -0.01, "w": 0.05}, name="pure_gravity")
scenario = Scenario(fields, ParticleState(0, (0.5, 0, 1), (0.05, 0.02, 0)), duration=2.0, steps=200,
                    constants={"m": 1, "q": 1})
rows = kappa_scan(scenario, ["0", "1e-10", "1e-8", "0.01", "0.02", "0.04"])
print(scan_csv(rows), end="")

# deflection per unit κ should be flat once κ > 0
for r in rows[1:]:
    print(f"kappa {float(r['kappa']):.0e}: deflection/kappa = {r['deflection_difference'] / float(r['kappa']):.6f}")
