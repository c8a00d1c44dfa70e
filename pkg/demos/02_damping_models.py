"""
Three ways to damp a cavity mode
================================

The factorised exact solution, a brute-force RK4 integration of the master
equation, and the binomial map acting on photon statistics alone. All three
agree; the last one is why the reconstruction works, since it only ever needs
the diagonal.
"""

import numpy as np

from dampedwigner import (DecayParams, binomial_map, cat_state, dissipate, evolve_diagonals,
                          integrate_master_equation, photon_statistics)

rho = cat_state(2.0, 0.0, 60)
params = DecayParams(gamma=1.0, t=0.1)

exact = dissipate(rho, params)
numeric = integrate_master_equation(rho, params, steps=1000)
print("max |exact - RK4|             :", np.max(np.abs(exact - numeric)))
print("max |diag(exact) - binomial|  :",
      np.max(np.abs(photon_statistics(exact) - evolve_diagonals(photon_statistics(rho), params))))

# %%
# For (|0> + |4>)/sqrt(2) nothing feeds the coherence from above, so it fades
# as exp(-2 gamma t) while the populations merely shift downwards.
psi = np.zeros(61)
psi[0] = psi[4] = 1 / np.sqrt(2)
sup = np.outer(psi, psi).astype(complex)
for gamma_t in (0.0, 0.1, 0.3, 1.0):
    out = dissipate(sup, DecayParams(1.0, gamma_t))
    print(f"gamma t = {gamma_t:3.1f}: |<0|rho|4>| = {abs(out[0, 4]):.4f} "
          f"(0.5 exp(-2 gamma t) = {0.5 * np.exp(-2 * gamma_t):.4f})   "
          f"<n> = {np.dot(np.arange(61), photon_statistics(out)):.4f}")

# %%
# Each column of the binomial map is a probability distribution.
b = binomial_map(60, params)
print("column sums deviate from 1 by at most", np.max(np.abs(b.sum(axis=0) - 1)))
