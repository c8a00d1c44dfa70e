"""
Measuring photon statistics with probe atoms
============================================

Three-level cascade atoms crossing the cavity record a population inversion
``W(tau)`` whose Fourier content is the photon-number distribution. With the
detuning and Stark shift expressed in units of the coupling ``lambda``,

    W(tau) = sum_n P_n [G_n / d_n^2 + (n+1)(n+2) / d_n^2 cos(2 d_n lambda tau)],
    G_n = (delta + stark (n+1)) / 2,    d_n^2 = G_n^2 + (n+1)(n+2).

For zero detuning and Stark shift, and ``sqrt((n+1)(n+2)) ~ n + 3/2``, this
becomes the cosine series ``sum_n P_n cos((2n+3) lambda tau)``, which is
inverted by projecting onto each cosine over ``[0, pi/lambda]``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConfigurationError, ValidationError

TAU_RTOL = 1e-12


@dataclass(frozen=True)
class AtomProbeParams:
    """Coupling ``lam`` (rad/s); ``delta`` and ``stark`` in units of ``lam``."""

    lam: float
    delta: float = 0.0
    stark: float = 0.0
    tau_points: int = 4097

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValidationError(f"coupling lambda must be positive, got {self.lam}")
        if self.tau_points < 2:
            raise ValidationError(f"tau_points must be >= 2, got {self.tau_points}")

    @property
    def tau_max(self):
        return math.pi / self.lam

    def level_terms(self, n_max):
        """``(G_n, d_n)`` for ``n = 0..n_max``."""
        n = np.arange(n_max + 1, dtype=float)
        g = 0.5 * (self.delta + self.stark * (n + 1))
        d = np.sqrt(g**2 + (n + 1) * (n + 2))
        return g, d


@dataclass(frozen=True)
class InversionSignal:
    tau: np.ndarray
    values: np.ndarray


def tau_grid(lam, points):
    return np.linspace(0.0, math.pi / lam, points)


def _check_tau(tau, lam):
    tau = np.asarray(tau, dtype=float)
    tau_max = math.pi / lam
    if np.any(tau < 0) or np.any(tau > tau_max * (1 + TAU_RTOL)):
        raise ValidationError(f"interaction time outside [0, pi/lambda = {tau_max}]")
    return tau


def population_inversion(p, params, tau):
    """Cascade-atom inversion after interaction time ``tau`` (scalar or array)."""
    tau = _check_tau(tau, params.lam)
    p = np.asarray(p, dtype=float)
    g, d = params.level_terms(len(p) - 1)
    n = np.arange(len(p), dtype=float)
    rabi = (n + 1) * (n + 2) / d**2
    phases = 2.0 * np.multiply.outer(tau, d) * params.lam
    return (np.cos(phases) * rabi) @ p + np.dot(p, g / d**2)


def inversion_strongfield(p, lam, tau):
    """Strong-field inversion ``sum_n P_n cos((2n + 3) lam tau)``."""
    tau = _check_tau(tau, lam)
    p = np.asarray(p, dtype=float)
    freq = 2.0 * np.arange(len(p)) + 3.0
    return np.cos(lam * np.multiply.outer(tau, freq)) @ p


def inversion_signal(p, params, model="strongfield"):
    """Sample ``W`` on the uniform grid of ``params.tau_points`` times."""
    tau = tau_grid(params.lam, params.tau_points)
    if model == "strongfield":
        w = inversion_strongfield(p, params.lam, tau)
    elif model == "full":
        w = population_inversion(p, params, tau)
    else:
        raise ValidationError(f"unknown inversion model {model!r}")
    return InversionSignal(tau=tau, values=np.asarray(w, dtype=float))


def simpson_weights(points, h):
    """Composite Simpson weights for an odd number of uniformly spaced points."""
    if points < 3 or points % 2 == 0:
        raise ConfigurationError(f"Simpson's rule needs an odd point count >= 3, got {points}")
    w = np.full(points, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (h / 3.0)


def _validated_grid(signal, lam, n_max):
    tau = np.asarray(signal.tau, dtype=float)
    tau_max = math.pi / lam
    if tau[0] != 0.0 or abs(tau[-1] - tau_max) > TAU_RTOL * tau_max:
        raise ConfigurationError(f"signal must span [0, pi/lambda = {tau_max}]")
    need = 8 * (n_max + 2)
    if len(tau) < need:
        raise ConfigurationError(
            f"{len(tau)} time points cannot resolve n_max={n_max}; need >= {need}"
        )
    h = tau_max / (len(tau) - 1)
    if np.max(np.abs(np.diff(tau) - h)) > 1e-9 * h:
        raise ConfigurationError("time grid must be uniform")
    return tau, simpson_weights(len(tau), h)


def _cosine_basis(tau, lam, n_max):
    freq = 2.0 * np.arange(n_max + 1) + 3.0
    return np.cos(lam * np.multiply.outer(freq, tau))


def invert_fourier(signal, lam, n_max):
    """Recover ``P_0..P_n_max`` from a strong-field inversion signal.

    ``P_n = (2 lam / pi) * integral_0^{pi/lam} W(tau) cos((2n+3) lam tau) dtau``
    by composite Simpson quadrature on the signal's own grid.
    """
    tau, w = _validated_grid(signal, lam, n_max)
    basis = _cosine_basis(tau, lam, n_max)
    return (2.0 * lam / math.pi) * (basis @ (w * np.asarray(signal.values, dtype=float)))


def statistics_uncertainty(signal, lam, n_max, shots):
    """Binomial one-sigma errors of :func:`invert_fourier` output.

    Each time point's inversion is an average of ``shots`` +-1 outcomes, so
    ``var W = (1 - W^2) / shots``; this is propagated linearly through the
    quadrature.
    """
    tau, w = _validated_grid(signal, lam, n_max)
    values = np.clip(np.asarray(signal.values, dtype=float), -1.0, 1.0)
    var_w = (1.0 - values**2) / shots
    basis = _cosine_basis(tau, lam, n_max)
    return (2.0 * lam / math.pi) * np.sqrt((basis**2) @ (w**2 * var_w))


def sample_inversion(signal, shots, seed):
    """Replace each ``W(tau)`` by the inversion measured with ``shots`` atoms.

    Each atom is found up with probability ``(1 + W) / 2``. Deterministic for a
    given ``seed``.
    """
    if shots < 1 or int(shots) != shots:
        raise ValidationError(f"shots must be a positive integer, got {shots}")
    values = np.asarray(signal.values, dtype=float)
    if np.any(np.abs(values) > 1 + 1e-9):
        raise ValidationError("inversion outside [-1, 1] cannot be sampled")
    p_up = 0.5 * (1.0 + np.clip(values, -1.0, 1.0))
    rng = np.random.default_rng(seed)
    ups = rng.binomial(int(shots), p_up)
    return InversionSignal(tau=np.array(signal.tau), values=2.0 * ups / shots - 1.0)


def check_strong_coupling(lam, gamma, min_ratio=100.0):
    """Require ``lam / gamma >= min_ratio`` so the field barely decays during a sweep."""
    if lam / gamma < min_ratio:
        raise ConfigurationError(
            f"lambda/gamma = {lam / gamma:.3g} is below the strong-coupling ratio {min_ratio}"
        )
