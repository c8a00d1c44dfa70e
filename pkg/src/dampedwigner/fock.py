"""
Truncated Fock-space states of a single field mode
==================================================

Density matrices are plain complex ``numpy`` arrays of shape
``(n_max + 1, n_max + 1)`` with ``rho[m, n] = <m|rho|n>``. Photon statistics
are real 1-d arrays of the diagonal. Phase-space points are Python complex
numbers.

Every preparation checks that the truncated basis is large enough: the
probability held by the top 10% of levels (plus anything beyond the cutoff)
has to stay below ``tail_budget``. This turns a silently wrong "infinite
Fock space" into a :class:`~dampedwigner.errors.TruncationError`.
"""

import math
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.stats import poisson

from .errors import CutoffError, TruncationError, ValidationError

DEFAULT_TAIL_BUDGET = 1e-10
TOP_FRACTION = 0.1


def check_cutoff(n_max):
    """Return ``n_max`` as an int, raising if it is not a usable cutoff."""
    if isinstance(n_max, bool) or int(n_max) != n_max:
        raise CutoffError(f"cutoff must be an integer, got {n_max!r}")
    n_max = int(n_max)
    if n_max < 1:
        raise CutoffError(f"cutoff n_max must be >= 1, got {n_max}")
    return n_max


def cutoff_of(rho):
    """Largest Fock index represented by ``rho``."""
    return rho.shape[0] - 1


def first_top_level(n_max):
    """Index of the first level in the top 10% of ``0..n_max``."""
    dim = n_max + 1
    return dim - max(1, math.ceil(TOP_FRACTION * dim))


def annihilation(n_max):
    """Truncated lowering operator ``a`` with ``a[n-1, n] = sqrt(n)``."""
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1).astype(complex)


def photon_statistics(rho):
    """Diagonal of ``rho`` as real photon-number probabilities."""
    return np.real(np.diagonal(rho)).copy()


def tail_mass(probs):
    """Probability held by the top 10% of the levels in ``probs``."""
    probs = np.asarray(probs, dtype=float)
    return float(np.sum(probs[first_top_level(len(probs) - 1):]))


def _suggest_cutoff(probs, tail_budget):
    # crude: mean + enough standard deviations, scaled out of the top 10%
    n = np.arange(len(probs))
    total = max(float(np.sum(probs)), 1e-300)
    mean = float(np.dot(n, probs)) / total
    var = max(float(np.dot(n**2, probs)) / total - mean**2, 0.0)
    width = math.sqrt(-2.0 * math.log(tail_budget)) if tail_budget < 1 else 1.0
    return math.ceil((mean + 2.0 * width * math.sqrt(var + mean + 1.0)) / (1 - TOP_FRACTION))


def check_adequate(probs, tail_budget=DEFAULT_TAIL_BUDGET, what="state", beyond=0.0):
    """Raise :class:`TruncationError` if too much mass sits near the cutoff.

    ``beyond`` is any mass known to lie past the cutoff (e.g. the lost Poisson
    tail of a coherent state before renormalisation).
    """
    n_max = len(probs) - 1
    mass = tail_mass(probs) + beyond
    if mass > tail_budget:
        need = max(_suggest_cutoff(probs, tail_budget), n_max + 1)
        raise TruncationError(
            f"{what}: mass {mass:.3e} in the top 10% of levels exceeds the tail "
            f"budget {tail_budget:.1e} at n_max={n_max}; try n_max >= {need}",
            required_n_max=need,
        )


def _pure(amplitudes):
    psi = amplitudes / np.linalg.norm(amplitudes)
    return np.outer(psi, psi.conj())


def fock_state(n, n_max):
    """Number state ``|n><n|`` in a basis truncated at ``n_max``."""
    n_max = check_cutoff(n_max)
    if n < 0 or n > n_max:
        raise CutoffError(f"Fock level {n} outside 0..{n_max}")
    rho = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    rho[n, n] = 1.0
    return rho


def coherent_amplitudes(beta, n_max):
    """Unnormalised-by-truncation amplitudes ``exp(-|b|^2/2) b^n / sqrt(n!)``."""
    c = np.empty(n_max + 1, dtype=complex)
    c[0] = math.exp(-abs(beta) ** 2 / 2)
    for k in range(1, n_max + 1):
        c[k] = c[k - 1] * beta / math.sqrt(k)
    return c


def _required_poisson_cutoff(mean, tail_budget):
    n_max = 1
    while poisson.sf(first_top_level(n_max) - 1, mean) > tail_budget:
        n_max += max(1, n_max // 8)
    return n_max


def coherent_state(beta, n_max, tail_budget=DEFAULT_TAIL_BUDGET):
    """Coherent state ``|beta><beta|`` renormalised over the truncated basis."""
    n_max = check_cutoff(n_max)
    beta = complex(beta)
    mean = abs(beta) ** 2
    # untruncated Poisson mass from the first top level onwards
    tail = poisson.sf(first_top_level(n_max) - 1, mean) if mean > 0 else 0.0
    if tail > tail_budget:
        need = _required_poisson_cutoff(mean, tail_budget)
        raise TruncationError(
            f"coherent state beta={beta}: Poisson tail {tail:.3e} exceeds budget "
            f"{tail_budget:.1e} at n_max={n_max}; need n_max >= {need}",
            required_n_max=need,
        )
    return _pure(coherent_amplitudes(beta, n_max))


def cat_state(beta, phase, n_max, tail_budget=DEFAULT_TAIL_BUDGET):
    """Superposition ``|beta> + exp(i phase)|-beta>``, normalised after truncation."""
    n_max = check_cutoff(n_max)
    beta = complex(beta)
    mean = abs(beta) ** 2
    c = coherent_amplitudes(beta, n_max)
    amps = c + np.exp(1j * phase) * coherent_amplitudes(-beta, n_max)
    norm = float(np.vdot(amps, amps).real)
    if norm < 1e-24:
        raise ValidationError(f"cat state with beta={beta}, phase={phase} has zero norm")
    # each branch carries Poisson weight, the superposition at most 4x that
    tail = 4.0 * poisson.sf(first_top_level(n_max) - 1, mean) / norm if mean > 0 else 0.0
    if tail > tail_budget:
        need = _required_poisson_cutoff(mean, tail_budget * norm / 4.0)
        raise TruncationError(
            f"cat state beta={beta}: tail {tail:.3e} exceeds budget "
            f"{tail_budget:.1e} at n_max={n_max}; need n_max >= {need}",
            required_n_max=need,
        )
    return _pure(amps)


@lru_cache(maxsize=8192)
def _displacement(alpha, n_max):
    a = annihilation(n_max)
    d = expm(alpha * a.conj().T - alpha.conjugate() * a)
    d.setflags(write=False)
    return d


def displacement_matrix(alpha, n_max):
    """Truncated ``D(alpha) = exp(alpha a^dag - conj(alpha) a)``.

    The result is cached per ``(alpha, n_max)`` and returned read-only.
    """
    return _displacement(complex(alpha), check_cutoff(n_max))


def hermitize(rho):
    return 0.5 * (rho + rho.conj().T)


def displace(rho, alpha, tail_budget=DEFAULT_TAIL_BUDGET):
    """Return ``D(alpha) rho D(alpha)^dag``.

    Raises :class:`TruncationError` when the displaced state pushes more than
    ``tail_budget`` into the top levels of the basis.
    """
    alpha = complex(alpha)
    if alpha == 0:
        return np.array(rho, dtype=complex)
    d = displacement_matrix(alpha, cutoff_of(rho))
    out = hermitize(d @ rho @ d.conj().T)
    check_adequate(photon_statistics(out), tail_budget, what=f"displaced state at alpha={alpha}")
    return out


def parity_expectation(rho):
    """``sum_n (-1)^n <n|rho|n>``."""
    p = np.real(np.diagonal(rho))
    signs = (-1.0) ** np.arange(len(p))
    return float(np.dot(signs, p))


def check_density_matrix(rho, trace_tol=1e-9, herm_tol=1e-12):
    """Raise :class:`ValidationError` unless ``rho`` is a plausible density matrix.

    Positivity is not checked here; it costs an eigendecomposition.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 2:
        raise ValidationError(f"density matrix must be square with n_max >= 1, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) >= herm_tol:
        raise ValidationError("density matrix is not Hermitian")
    diag = np.diagonal(rho)
    if np.max(np.abs(diag.imag)) >= herm_tol:
        raise ValidationError("diagonal has an imaginary part")
    if np.any(diag.real < -herm_tol) or np.any(diag.real > 1 + herm_tol):
        raise ValidationError("diagonal entries outside [0, 1]")
    if abs(np.sum(diag.real) - 1.0) >= trace_tol:
        raise ValidationError(f"trace {np.sum(diag.real)} differs from 1")
    return rho
