"""
Zero-temperature damping of the cavity mode
===========================================

The damped master equation ``d rho/dt = (J + L) rho`` with jump part
``J rho = gamma a rho a^dag`` and drift part
``L rho = -gamma/2 (a^dag a rho + rho a^dag a)`` has the exact factorised
solution ``exp(L t) exp(J q / gamma) rho`` with ``q = 1 - exp(-gamma t)``.

:func:`dissipate` evaluates that solution, :func:`evolve_diagonals` is its
restriction to photon statistics, and :func:`integrate_master_equation` is a
fixed-step RK4 integrator kept around as an independent check.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConfigurationError, ValidationError

SERIES_CUTOFF = 1e-18
MAX_STEP = 1e-2


@dataclass(frozen=True)
class DecayParams:
    """Decay constant ``gamma`` and elapsed time ``t``."""

    gamma: float
    t: float

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValidationError(f"gamma must be positive and finite, got {self.gamma}")
        if not (self.t >= 0 and math.isfinite(self.t)):
            raise ValidationError(f"t must be non-negative and finite, got {self.t}")

    @property
    def gamma_t(self):
        return self.gamma * self.t

    @property
    def q(self):
        """``1 - exp(-gamma t)``, the probability a photon has leaked out."""
        return -math.expm1(-self.gamma_t)

    @property
    def survival(self):
        """``exp(-gamma t)``, the probability a photon is still there."""
        return math.exp(-self.gamma_t)


def _lowered_weights(dim):
    # sqrt((m+1)(n+1)) for the (m, n) element of a rho a^dag
    k = np.sqrt(np.arange(1, dim, dtype=float))
    return np.outer(k, k)


def apply_J(rho, gamma):
    """Jump part ``gamma a rho a^dag`` in the truncated basis."""
    rho = np.asarray(rho)
    out = np.zeros_like(rho, dtype=complex)
    out[:-1, :-1] = gamma * _lowered_weights(rho.shape[0]) * rho[1:, 1:]
    return out


def apply_L(rho, gamma):
    """Drift part ``-gamma/2 (a^dag a rho + rho a^dag a)``."""
    rho = np.asarray(rho)
    n = np.arange(rho.shape[0])
    return -0.5 * gamma * (n[:, None] + n[None, :]) * rho


def dissipate(rho, params):
    """Exact damped state ``exp(L t) exp(J q / gamma) rho``.

    The jump series ``sum_k q^k / k! a^k rho a^dag^k`` is built by term
    recurrence; it terminates at ``k = n_max`` in the truncated basis and is
    cut short once a term drops below 1e-18.
    """
    rho = np.array(rho, dtype=complex)
    q = params.q
    if q == 0.0:
        return rho
    dim = rho.shape[0]
    weights = _lowered_weights(dim)
    total = rho.copy()
    term = rho
    for k in range(1, dim):
        nxt = np.zeros_like(term)
        nxt[:-1, :-1] = (q / k) * weights * term[1:, 1:]
        term = nxt
        total += term
        if np.max(np.abs(term)) < SERIES_CUTOFF:
            break
    n = np.arange(dim)
    scale = np.exp(-0.5 * params.gamma_t * (n[:, None] + n[None, :]))
    return total * scale


def binomial_map(n_max, params):
    """Stochastic matrix ``B[m, n] = C(n, m) e^{-m gamma t} q^{n-m}`` for ``m <= n``.

    Binomial coefficients come from the multiplicative recurrence
    ``C(n, m+1) = C(n, m) (n - m) / (m + 1)`` so large cutoffs do not overflow
    factorials.
    """
    dim = n_max + 1
    p, q = params.survival, params.q
    b = np.zeros((dim, dim))
    n = np.arange(dim, dtype=float)
    coeff = np.ones(dim)  # C(n, m) for the current m, all n
    for m in range(dim):
        if m > 0:
            coeff = coeff * (n - m + 1) / m
        cols = n[m:]
        b[m, m:] = coeff[m:] * p**m * q ** (cols - m)
    return b


def evolve_diagonals(p0, params):
    """Photon statistics after damping for time ``params.t``.

    Uses the ``q^(n-m)`` form so ``t = 0`` is the identity rather than 0/0.
    """
    p0 = np.asarray(p0, dtype=float)
    if params.q == 0.0:
        return p0.copy()
    return binomial_map(len(p0) - 1, params) @ p0


def _generator(rho, gamma):
    return apply_J(rho, gamma) + apply_L(rho, gamma)


def integrate_master_equation(rho, params, steps):
    """Integrate the damped master equation with fixed-step classical RK4.

    ``steps`` must keep ``gamma * dt <= 1e-2``.
    """
    if steps < 1 or int(steps) != steps:
        raise ConfigurationError(f"steps must be a positive integer, got {steps}")
    rho = np.array(rho, dtype=complex)
    if params.t == 0:
        return rho
    dt = params.t / steps
    if params.gamma * dt > MAX_STEP:
        need = math.ceil(params.gamma_t / MAX_STEP)
        raise ConfigurationError(
            f"gamma*dt = {params.gamma * dt:.3e} exceeds {MAX_STEP}; use steps >= {need}"
        )
    g = params.gamma
    for _ in range(int(steps)):
        k1 = _generator(rho, g)
        k2 = _generator(rho + 0.5 * dt * k1, g)
        k3 = _generator(rho + 0.5 * dt * k2, g)
        k4 = _generator(rho + dt * k3, g)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return rho
