"""Why nothing like this happens for classical carriers.

For commuting (classical) carriers a simulation map is a stochastic
matrix, and its tensor square is again stochastic, so doubling the
carriers preserves the order.  The quantum map fails exactly there.
"""

import numpy as np

from snqi import classical, morphisms

rng = np.random.default_rng(3)
ok = 0
for _ in range(50):
    t, r, m = classical.random_simulable_pair(rng)
    res = classical.classical_ensemble_map(t, r)
    ok += res.feasible and classical.classical_quantitativity_check(res, t, r)
print(f"classical pairs whose doubled statistics are reproduced by L (x) L: {ok}/50")

t = np.eye(3)
r = np.full((3, 3), 1 / 3)
res = classical.classical_ensemble_map(t, r)
print("a perfect carrier simulated by a useless one is feasible?", res.feasible,
      "| certificate:", np.round(res.certificate, 3))

lam = morphisms.lambda_delta(0.03)
print("quantum case, smallest eigenvalue of (Lambda (x) Lambda)(witness):",
      f"{morphisms.doubled_output_min_eig(lam, morphisms.entangled_witness()):.4f}")
