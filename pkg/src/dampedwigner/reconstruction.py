"""
Quasiprobabilities from damped photon statistics
================================================

If ``P_m`` are the photon-number probabilities of ``D(alpha) rho D^dag(alpha)``
after damping for a time ``t``, then

    F(alpha; s) = -2 / (pi (s - 1)) * sum_m chi^m P_m,
    chi = 1 + 2 e^{gamma t} / (s - 1),

equals the s-ordered quasiprobability of the *undamped* ``rho`` at ``alpha``
(``s = 0`` is the Wigner function, ``s = -1`` the Husimi function). The time
dependence cancels exactly, but ``|chi| > 1`` for ``t > 0`` so any error in the
high-``m`` probabilities is amplified by ``|chi|^m``. The helpers here report
that amplification instead of hiding it.

:func:`wigner_direct` evaluates the same quantity straight from the undamped
displaced state and is the reference the reconstruction is checked against.
It deliberately does not share the summation routine used by
:func:`reconstruct_point`.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .errors import SingularParameterError, TailAmplificationWarning
from .fock import DEFAULT_TAIL_BUDGET, displace

TAIL_WARN_LEVEL = 1e-6


def _check_s(s):
    if not s < 1:
        raise SingularParameterError(f"ordering parameter s must be < 1, got {s}")
    return float(s)


def prefactor(s):
    """``-2 / (pi (s - 1))``; exactly ``2/pi`` at ``s = 0``."""
    s = _check_s(s)
    return -2.0 / (math.pi * (s - 1.0))


@dataclass(frozen=True)
class ReconstructionWeight:
    chi: float
    gamma: float
    t: float
    s: float

    @property
    def prefactor(self):
        return prefactor(self.s)


@dataclass(frozen=True)
class QuasiProbPoint:
    alpha: complex
    value: float
    trunc_error_bound: float
    noise_amp: float
    sigma: float | None = None


def chi_weight(params, s=0.0):
    """Weight ``1 + 2 e^{gamma t} / (s - 1)`` applied to the m-th probability."""
    s = _check_s(s)
    chi = 1.0 + 2.0 * math.exp(params.gamma_t) / (s - 1.0)
    return ReconstructionWeight(chi=chi, gamma=params.gamma, t=params.t, s=s)


def _tail_estimate(p):
    # top-level mass, plus any normalisation deficit larger than roundoff
    deficit = 1.0 - math.fsum(p)
    return max(abs(float(p[-1])), deficit if deficit > 1e-12 else 0.0)


def tail_amplified(abs_chi, n_max, tail):
    return abs_chi**n_max * tail > TAIL_WARN_LEVEL


def reconstruct_point(p, params, s=0.0, alpha=0j, warn=True):
    """Quasiprobability at ``alpha`` from damped photon statistics ``p``.

    ``p`` must be the diagonal of the displaced state damped for exactly
    ``params.t``. The weighted sum is accumulated with :func:`math.fsum`, which
    is correctly rounded, so the only remaining error comes from ``p`` itself.

    Returns a :class:`QuasiProbPoint` carrying the value, a bound on the
    contribution of the truncated tail, and ``sum_m |chi|^m`` as a measure of
    how strongly input errors are amplified. A
    :class:`~dampedwigner.errors.TailAmplificationWarning` is issued when the
    amplified tail exceeds 1e-6, unless ``warn`` is false.
    """
    weight = chi_weight(params, s)
    p = np.asarray(p, dtype=float)
    n_max = len(p) - 1
    chi = weight.chi
    powers = [chi**m for m in range(n_max + 1)]
    value = weight.prefactor * math.fsum(c * x for c, x in zip(powers, p))

    tail = _tail_estimate(p)
    abs_chi = abs(chi)
    bound = weight.prefactor * abs_chi ** (n_max + 1) * tail
    noise_amp = math.fsum(abs(c) for c in powers)
    if warn and tail_amplified(abs_chi, n_max, tail):
        warnings.warn(
            f"tail mass {tail:.2e} amplified by |chi|^{n_max} = {abs_chi ** n_max:.2e} "
            f"at alpha={alpha}; reconstruction may be unreliable",
            TailAmplificationWarning,
            stacklevel=2,
        )
    return QuasiProbPoint(alpha=complex(alpha), value=value, trunc_error_bound=bound,
                          noise_amp=noise_amp)


def reconstruct_wigner(p, params, alpha=0j):
    """Wigner-function case of :func:`reconstruct_point`, written out with
    ``chi = 1 - 2 e^{gamma t}`` and prefactor ``2/pi``.

    Kept as a separate path so the general formula can be checked against it;
    the two agree bit for bit.
    """
    chi = 1.0 - 2.0 * math.exp(params.gamma_t)
    p = np.asarray(p, dtype=float)
    n_max = len(p) - 1
    powers = [chi**m for m in range(n_max + 1)]
    value = (2.0 / math.pi) * math.fsum(c * x for c, x in zip(powers, p))
    tail = _tail_estimate(p)
    bound = (2.0 / math.pi) * abs(chi) ** (n_max + 1) * tail
    return QuasiProbPoint(alpha=complex(alpha), value=value, trunc_error_bound=bound,
                          noise_amp=math.fsum(abs(c) for c in powers))


def wigner_direct(rho0, alpha, s=0.0, tail_budget=DEFAULT_TAIL_BUDGET):
    """s-ordered quasiprobability of ``rho0`` at ``alpha``, without any damping.

    Evaluates ``prefactor * sum_n r^n <n|D(alpha) rho0 D^dag(alpha)|n>`` with
    ``r = (s + 1) / (s - 1)``.
    """
    s = _check_s(s)
    diag = np.real(np.diagonal(displace(rho0, alpha, tail_budget)))
    r = (s + 1.0) / (s - 1.0)
    return prefactor(s) * float(np.dot(r ** np.arange(len(diag)), diag))


def noise_amplification(p_sigma, weight):
    """One-sigma uncertainty of the reconstruction for independent errors ``p_sigma``."""
    sigma = np.asarray(p_sigma, dtype=float)
    if np.any(sigma < 0):
        raise ValueError("uncertainties must be non-negative")
    m = np.arange(len(sigma))
    return weight.prefactor * math.sqrt(math.fsum((weight.chi ** (2 * m)) * sigma**2))

