"""
Other orderings: from Wigner to Husimi
======================================

Changing the weight to ``1 + 2 exp(gamma t) / (s - 1)`` recovers the
s-ordered quasiprobability instead. At ``s = -1`` and no decay only the vacuum
probability survives and the result is the Husimi function
``<-alpha|rho|-alpha> / pi``.
"""

import math

import numpy as np

from dampedwigner import (DecayParams, cat_state, dissipate, displace, photon_statistics,
                          reconstruct_point, wigner_direct)
from dampedwigner.fock import coherent_amplitudes

rho0 = cat_state(1.5, math.pi / 2, 50)
alpha = 0.4 - 0.3j

for s in (0.0, -0.5, -1.0):
    row = []
    for gamma_t in (0.0, 0.1, 0.3):
        params = DecayParams(1.0, gamma_t)
        p = photon_statistics(dissipate(displace(rho0, alpha), params))
        row.append(reconstruct_point(p, params, s=s, warn=False).value)
    print(f"s = {s:+.1f}: reconstructed {row[0]:.10f} {row[1]:.10f} {row[2]:.10f}   "
          f"direct {wigner_direct(rho0, alpha, s=s):.10f}")

c = coherent_amplitudes(-alpha, 50)
print("<-alpha|rho|-alpha>/pi =", np.vdot(c, rho0 @ c).real / math.pi)
