"""Cyclotron orbit: RK4 against the analytic circle.

Prints the closure error after one period, the energy drift and the
error ratio under step halving (close to 16 for a 4th-order method).
"""

import numpy as np

from gaqkit.dynamics import ForceModel, ParticleState, cyclotron_oracle, integrate, make_rhs, monitor_invariants
from gaqkit.fieldexpr import FieldSpec

m, q, B, v = 2.0, 0.5, 1.5, 0.8
orb = cyclotron_oracle(m, q, B, v)
spec = FieldSpec.from_strings({"A1": "-B0/2*x2", "A2": "B0/2*x1"}, {"B0": B})
model = ForceModel("lorentz", {"m": m, "q": q})
s0 = ParticleState(0, (0, 0, 0), (v, 0, 0))
print(f"radius {orb['radius']:.6f}, period {orb['period']:.6f}")

w = q * B / m
for n in (250, 500, 1000, 2000):
    traj = integrate(make_rhs(model, spec), s0, orb["period"] / n, n)
    exact = np.stack([v / w * np.sin(w * traj.times), v / w * (np.cos(w * traj.times) - 1), 0 * traj.times], 1)
    err = np.max(np.linalg.norm(traj.x - exact, axis=1))
    closure = np.linalg.norm(traj.x[-1] - traj.x[0]) / orb["radius"]
    drift = monitor_invariants(traj, model, spec)["drift"]["energy"]
    print(f"n = {n:5d}  max error {err:.3e}  closure/r {closure:.3e}  energy drift {drift:.3e}")
