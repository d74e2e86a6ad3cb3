"""Averaged fidelity with one and with two carriers.

With one carrier the plain spin is at least as good as the flagged one.
With two carriers the flagged pair can be read with an entangled
tetrahedral measurement that beats the best two-copy strategy for plain
spins, as long as the noise stays below 7 - 4 sqrt(3).
"""

import numpy as np

from snqi import measures, strategies
from snqi.ensembles import rho_ensemble, tau_ensemble, two_copies
from snqi.sphere import gauss_legendre_product

q = gauss_legendre_product()
tetra = strategies.tetra_two_copy_tau_povm()

print(f"{'delta':>8} {'f rho':>9} {'f tau':>9} {'f2 rho':>9} {'f2 tau':>9} {'f2 tau quad':>12}")
for delta in (0.0, 0.03, 0.06, 7 - 4 * np.sqrt(3), 0.1):
    row = measures.snqi_verdict(delta, evidence=False)
    quad = measures.averaged_fidelity(two_copies(tau_ensemble(delta)), tetra, q).value
    print(f"{delta:8.5f} {row.f_single_rho:9.6f} {row.f_single_tau:9.6f} "
          f"{row.f_double_rho:9.6f} {row.f_double_tau_lb:9.6f} {quad:12.6f}  snqi={row.snqi}")

print("\nfidelity crossover found by root finding:", f"{measures.fidelity_crossover():.12f}")
print("7 - 4 sqrt(3)                             :", f"{7 - 4 * np.sqrt(3):.12f}")

f = measures.averaged_fidelity(rho_ensemble(), strategies.single_copy_covariant(1.0)).value
print("\ncovariant single-copy fidelity on the plain carrier by quadrature:", f"{f:.12f}")
