"""Exit criteria for the package. Each test prints one PASS/FAIL line, collected
in the terminal summary."""

from itertools import combinations
import math
import warnings

import numpy as np
import pytest

from dampedwigner.dissipation import (DecayParams, binomial_map, dissipate, evolve_diagonals,
                                      integrate_master_equation)
from dampedwigner.errors import TailAmplificationWarning
from dampedwigner.fock import coherent_amplitudes, displace, photon_statistics
from dampedwigner.pipeline import (ScanConfig, StateSpec, compare_with_oracle, prepare_state,
                                   run_scan, scan_point)
from dampedwigner.probe import (AtomProbeParams, inversion_signal, invert_fourier,
                                sample_inversion)
from dampedwigner.reconstruction import reconstruct_point, reconstruct_wigner

from conftest import ACCEPTANCE_LINES

STATES = {
    "vacuum": {"kind": "fock", "n": 0},
    "fock1": {"kind": "fock", "n": 1},
    "coherent1.5": {"kind": "coherent", "beta": 1.5},
    "evencat2": {"kind": "cat", "beta": 2.0, "phase": 0.0},
}
GRID = {"re_min": -3, "re_max": 3, "re_count": 41, "im_min": -3, "im_max": 3, "im_count": 41}
# at cutoff 60 the displaced cat at alpha = 3+3i keeps ~3e-4 in the top levels
TAIL_BUDGET = 1e-3
TIMES = (0.02, 0.1, 0.3)
TWO_OVER_PI = 2 / math.pi


def record(number, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def scan_config(state, gamma_t, **extra):
    return ScanConfig.from_dict({"state": state, "cutoff": 60, "gamma": 1.0, "t": gamma_t,
                                 "grid": GRID, "tail_budget": TAIL_BUDGET, **extra})


@pytest.fixture(scope="module")
def scans():
    out = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailAmplificationWarning)
        for name, state in STATES.items():
            for gamma_t in TIMES:
                out[name, gamma_t] = run_scan(scan_config(state, gamma_t), threads=0)
    return out


def test_1_time_cancellation_identity(scans):
    worst = 0.0
    for name, state in STATES.items():
        grid = scans[name, 0.1]
        rho0 = prepare_state(grid.config.state, 60, TAIL_BUDGET)
        worst = max(worst, compare_with_oracle(grid, rho0).max_deviation)
    runtime = sum(scans[name, 0.1].wall_time for name in STATES)
    ok = worst < 1e-8 and runtime < 60
    record(1, "reconstruction equals direct Wigner", ok,
           f"max |dF| = {worst:.2e} < 1e-8, runtime {runtime:.1f} s < 60 s")
    assert worst < 1e-8
    assert runtime < 60


def test_2_time_independence(scans):
    worst = 0.0
    for name in STATES:
        for a, b in combinations(TIMES, 2):
            worst = max(worst, np.max(np.abs(scans[name, a].values - scans[name, b].values)))
    record(2, "t-independence over gamma t in {0.02, 0.1, 0.3}", worst < 1e-6,
           f"max pairwise |dF| = {worst:.2e} < 1e-6")
    assert worst < 1e-6


def test_3_dissipation_oracle():
    rho = prepare_state(StateSpec.from_dict(STATES["evencat2"]), 60)
    params = DecayParams(1.0, 0.1)
    exact = dissipate(rho, params)
    numeric = integrate_master_equation(rho, params, steps=1000)  # gamma dt = 1e-4
    dev = np.max(np.abs(exact - numeric))
    diag_dev = np.max(np.abs(photon_statistics(exact)
                             - evolve_diagonals(photon_statistics(rho), params)))
    ok = dev < 1e-6 and diag_dev < 1e-10
    record(3, "factorised solution vs RK4, diagonal vs binomial map", ok,
           f"{dev:.2e} < 1e-6, {diag_dev:.2e} < 1e-10")
    assert dev < 1e-6
    assert diag_dev < 1e-10


def test_4_fourier_round_trip():
    p = photon_statistics(prepare_state(StateSpec(kind="coherent", beta=1.0), 40))
    lam = 1000.0
    signal = inversion_signal(p, AtomProbeParams(lam=lam, tau_points=4097))
    recovered = invert_fourier(signal, lam, 30)
    dev = np.max(np.abs(recovered - p[:31]))
    record(4, "strong-field signal -> cosine inversion round trip", dev < 1e-6,
           f"max |dP_n| = {dev:.2e} < 1e-6 for n <= 30")
    assert dev < 1e-6


def test_5_s_parametrisation(scans):
    params = DecayParams(1.0, 0.0)
    alphas = scans["vacuum", 0.1].alphas[::7]
    worst = 0.0
    for state in STATES.values():
        rho0 = prepare_state(StateSpec.from_dict(state), 60, TAIL_BUDGET)
        for alpha in alphas:
            p = photon_statistics(dissipate(displace(rho0, alpha, TAIL_BUDGET), params))
            value = reconstruct_point(p, params, s=-1, warn=False).value
            c = coherent_amplitudes(-alpha, 60)
            husimi = np.vdot(c, rho0 @ c).real / math.pi
            worst = max(worst, abs(value - husimi))

    identical = True
    rng = np.random.default_rng(5)
    for gamma_t in TIMES:
        decay = DecayParams(1.0, gamma_t)
        for _ in range(50):
            p = rng.dirichlet(np.ones(61))
            general = reconstruct_point(p, decay, s=0.0, warn=False)
            identical &= general.value == reconstruct_wigner(p, decay).value
    ok = worst < 1e-8 and identical
    record(5, "Husimi at t=0 and bit-identical s=0 path", ok,
           f"max |pi F(s=-1) - <-a|rho|-a>|/pi = {worst:.2e} < 1e-8, bit-identical={identical}")
    assert worst < 1e-8
    assert identical


def test_6_physicality(scans):
    rng = np.random.default_rng(6)
    trace_dev = herm_dev = 0.0
    for state in STATES.values():
        rho0 = prepare_state(StateSpec.from_dict(state), 60, TAIL_BUDGET)
        for alpha in rng.uniform(-3, 3, size=(5, 2)) @ np.array([1, 1j]):
            rho_a = displace(rho0, alpha, TAIL_BUDGET)
            for gamma_t in TIMES:
                rho_t = dissipate(rho_a, DecayParams(1.0, gamma_t))
                for r in (rho0, rho_a, rho_t):
                    trace_dev = max(trace_dev, abs(np.trace(r).real - 1))
                    herm_dev = max(herm_dev, np.max(np.abs(r - r.conj().T)))

    bound = max(np.max(np.abs(g.values)) for g in scans.values())

    # normalisation needs a grid that contains the whole distribution
    norm_dev = 0.0
    wide = {"re_min": -5, "re_max": 5, "re_count": 81, "im_min": -3.5, "im_max": 3.5,
            "im_count": 57}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailAmplificationWarning)
        for state in STATES.values():
            grid = run_scan(ScanConfig.from_dict({
                "state": state, "cutoff": 100, "gamma": 1.0, "t": 0.1, "grid": wide,
                "tail_budget": TAIL_BUDGET}), threads=0)
            cell = (10 / 80) * (7 / 56)
            norm_dev = max(norm_dev, abs(grid.values.sum() * cell - 1))
            bound = max(bound, np.max(np.abs(grid.values)))

    column_dev = max(np.max(np.abs(binomial_map(60, DecayParams(1.0, g)).sum(axis=0) - 1))
                     for g in (0.0,) + TIMES + (0.5,))

    checks = {
        "trace": trace_dev < 1e-9,
        "hermiticity": herm_dev < 1e-12,
        "wigner bound": bound <= TWO_OVER_PI + 1e-9,
        "normalisation": norm_dev < 1e-2,
        "column sums": column_dev < 1e-12,
    }
    record(6, "physicality suite", all(checks.values()),
           f"trace {trace_dev:.1e}, herm {herm_dev:.1e}, max|F|-2/pi {bound - TWO_OVER_PI:.1e}, "
           f"norm {norm_dev:.1e}, columns {column_dev:.1e}")
    assert all(checks.values()), checks


def test_7_stochastic_robustness():
    base = {"state": STATES["evencat2"], "cutoff": 30, "gamma": 1.0, "t": 0.1}
    probe = {"mode": "sampled", "lambda": 1000.0, "tau_points": 4097, "n_probe": 16}
    config = ScanConfig.from_dict({**base, "probe": {**probe, "shots": 10**4, "seed": 2026}})
    rho0 = prepare_state(config.state, config.cutoff)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailAmplificationWarning)
        value = scan_point(config, rho0, 0j).value
    err0 = abs(value - TWO_OVER_PI)

    p_true = photon_statistics(dissipate(rho0, config.decay))
    atom = config.probe.atom_params()
    signal = inversion_signal(p_true, atom)
    rms = {}
    for shots in (10**3, 10**5):
        sq = [(invert_fourier(sample_inversion(signal, shots, seed), atom.lam, 16)
               - p_true[:17]) ** 2 for seed in range(4)]
        rms[shots] = math.sqrt(np.mean(sq))
    ratio = rms[10**3] / rms[10**5]
    ok = err0 < 0.1 and 5 <= ratio <= 20
    record(7, "sampled probe, 1e4 shots per time point", ok,
           f"|F(0) - 2/pi| = {err0:.2e} < 0.1, RMS ratio 1e3/1e5 shots = {ratio:.2f} in [5, 20]")
    assert err0 < 0.1
    assert 5 <= ratio <= 20
