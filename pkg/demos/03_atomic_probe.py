"""
Reading photon statistics off probe atoms
=========================================

The photon-number distribution is not measured directly: atoms fly through
the cavity and their inversion ``W(tau)`` is recorded as a function of the
interaction time. This script simulates that signal, inverts it back to
``P_n``, adds finite-atom noise, and shows how the noise is amplified in the
reconstruction as the decay time grows.
"""

import math
import warnings

import numpy as np

from dampedwigner import (AtomProbeParams, DecayParams, cat_state, chi_weight, dissipate,
                          inversion_signal, invert_fourier, noise_amplification,
                          photon_statistics, population_inversion, reconstruct_point,
                          sample_inversion)
from dampedwigner.errors import TailAmplificationWarning
from dampedwigner.probe import statistics_uncertainty

lam = 1000.0
atom = AtomProbeParams(lam=lam, tau_points=4097)
rho0 = cat_state(2.0, 0.0, 30)
params = DecayParams(gamma=1.0, t=0.1)
p = photon_statistics(dissipate(rho0, params))

# %%
# The exact cascade model and its strong-field cosine series differ most for
# low photon numbers, which is where this cat lives.
tau = np.linspace(0, math.pi / lam, 9)
full = population_inversion(p, atom, tau)
strong = inversion_signal(p, atom).values[::512]
for t_, a, b in zip(tau, full, strong):
    print(f"lambda tau = {lam * t_:5.3f}   full W = {a:+.4f}   strong-field W = {b:+.4f}")

# %%
# Noise-free inversion is exact up to quadrature error.
signal = inversion_signal(p, atom)
print("\nmax |P_n error|, noiseless:", np.max(np.abs(invert_fourier(signal, lam, 16) - p[:17])))

# %%
# With 10^4 atoms per interaction time.
with warnings.catch_warnings():
    warnings.simplefilter("ignore", TailAmplificationWarning)
    for shots in (10**3, 10**4, 10**5):
        noisy = sample_inversion(signal, shots, seed=1)
        p_meas = invert_fourier(noisy, lam, 16)
        sigma = statistics_uncertainty(noisy, lam, 16, shots)
        f = reconstruct_point(p_meas, params).value
        err = noise_amplification(sigma, chi_weight(params, 0))
        print(f"shots {shots:>6}: F(0) = {f:.4f} +- {err:.4f}   (exact {2 / math.pi:.4f})")

# %%
# The same per-level uncertainty costs more the longer one waits.
sigma = np.full(17, 1e-4)
for gamma_t in (0.0, 0.1, 0.2, 0.3, 0.5):
    w = chi_weight(DecayParams(1.0, gamma_t), 0)
    print(f"gamma t = {gamma_t:.1f}: chi = {w.chi:+.3f}, sigma_F = {noise_amplification(sigma, w):.2e}")
