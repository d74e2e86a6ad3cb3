"""Two qubit carriers and the maps that translate statistics between them.

The plain carrier is a pure spin pointing along n.  The flagged carrier
keeps a noisy copy of that spin, but half of the time it is flipped to -n,
and a second qubit (the flag) records which half.  Any single measurement
on the flagged carrier can be simulated on the plain one through a unital
map Lambda_delta, and we check here that this map is positive without being
completely positive.
"""

import numpy as np

from snqi import morphisms, qmat
from snqi.ensembles import tau_n_delta
from snqi.sphere import random_directions

rng = np.random.default_rng(1)
delta = 0.03
n = random_directions(1, rng)[0]

print("direction n =", np.round(n, 4))
print("flagged carrier at delta = 0.03, rounded:")
print(np.round(tau_n_delta(n, delta), 3))

lam = morphisms.lambda_delta(delta)
effects = [qmat.random_hermitian(4, rng) for _ in range(50)]
nodes = random_directions(20, rng)
print("\nworst |tr[Lambda(E) rho_n] - tr[E tau_n]| over 50 effects x 20 directions:",
      f"{morphisms.lambda_residual(lam, delta, effects, nodes):.1e}")

for d in (0.0, 0.03, 0.5, 1.0):
    rep = morphisms.positivity_report(morphisms.lambda_delta(d), samples=4000)
    print(f"delta = {d:<5g} Choi min eig = {rep.choi_min_eig:+.4f}  -> {rep.verdict}")

w = morphisms.entangled_witness()
print("\nsinglet input with flags |0>|1>: smallest output eigenvalue of Lambda (x) Lambda =",
      f"{morphisms.doubled_output_min_eig(lam, w):.4f}")
print("so two copies of the map do not send effects to effects.")
