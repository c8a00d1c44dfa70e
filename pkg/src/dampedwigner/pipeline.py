"""
End-to-end reconstruction scans
===============================

A scan prepares an initial state, and for every phase-space point ``alpha``
on a rectangular grid: displaces it, lets it decay for the configured time,
obtains the photon statistics through the chosen probe model and turns them
back into a quasiprobability value. Grid points are independent and may be
evaluated in parallel; results are always returned in row-major order
(imaginary part indexes rows, real part indexes columns).
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import asdict, dataclass, field, fields, replace
import json
import math
import os
from pathlib import Path
import time
import warnings

import numpy as np

from ._version import __version__
from .dissipation import DecayParams, dissipate
from .errors import (ConfigurationError, DescriptorMismatchError, TailAmplificationWarning,
                     ValidationError)
from .fock import (DEFAULT_TAIL_BUDGET, cat_state, check_cutoff, coherent_state,
                   displace, fock_state, photon_statistics)
from .probe import (AtomProbeParams, check_strong_coupling, inversion_signal,
                    invert_fourier, sample_inversion, statistics_uncertainty)
from .reconstruction import (TAIL_WARN_LEVEL, QuasiProbPoint, chi_weight, noise_amplification,
                             reconstruct_point, wigner_direct)

CSV_HEADER = ["re_alpha", "im_alpha", "F", "trunc_bound", "noise_amp"]
STATE_KINDS = ("fock", "coherent", "cat")
PROBE_MODES = ("ideal", "strongfield", "full", "sampled")


def _complex_from_json(value, name):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValidationError(f"{name} must be a number or a [re, im] pair")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise ValidationError(f"{name} must be a number or a [re, im] pair, got {value!r}")


def _take(cls, data, section):
    if not isinstance(data, dict):
        raise ValidationError(f"{section} must be a JSON object")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown key(s) in {section}: {', '.join(sorted(unknown))}")
    return dict(data)


@dataclass(frozen=True)
class StateSpec:
    kind: str
    beta: complex = 0j
    phase: float = 0.0
    n: int = 0

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ValidationError(f"state kind must be one of {STATE_KINDS}, got {self.kind!r}")
        if int(self.n) != self.n or self.n < 0:
            raise ValidationError(f"Fock level must be a non-negative integer, got {self.n}")
        if not math.isfinite(self.phase) or not math.isfinite(abs(self.beta)):
            raise ValidationError("state parameters must be finite")

    @classmethod
    def from_dict(cls, data):
        d = _take(cls, data, "state")
        if "beta" in d:
            d["beta"] = _complex_from_json(d["beta"], "state.beta")
        if "kind" not in d:
            raise ValidationError("state.kind is required")
        return cls(**d)

    def to_dict(self):
        return {"kind": self.kind, "beta": [self.beta.real, self.beta.imag],
                "phase": self.phase, "n": self.n}


@dataclass(frozen=True)
class GridSpec:
    re_min: float = 0.0
    re_max: float = 0.0
    re_count: int = 1
    im_min: float = 0.0
    im_max: float = 0.0
    im_count: int = 1

    def __post_init__(self):
        for name in ("re_min", "re_max", "im_min", "im_max"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"grid.{name} must be finite")
        for name in ("re_count", "im_count"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ValidationError(f"grid.{name} must be a positive integer")

    @classmethod
    def from_dict(cls, data):
        return cls(**_take(cls, data, "grid"))

    def axes(self):
        return (np.linspace(self.re_min, self.re_max, self.re_count),
                np.linspace(self.im_min, self.im_max, self.im_count))

    def alphas(self):
        """Grid points in row-major order."""
        re, im = self.axes()
        return [complex(x, y) for y in im for x in re]


@dataclass(frozen=True)
class ProbeSpec:
    mode: str = "ideal"
    lam: float = 1000.0
    delta: float = 0.0
    stark: float = 0.0
    tau_points: int = 4097
    shots: int | None = None
    seed: int = 0
    n_probe: int | None = None

    def __post_init__(self):
        if self.mode not in PROBE_MODES:
            raise ValidationError(f"probe mode must be one of {PROBE_MODES}, got {self.mode!r}")
        if self.mode == "sampled" and (self.shots is None or self.shots < 1):
            raise ValidationError("sampled probe mode needs a positive shot count")
        if self.n_probe is not None and self.n_probe < 0:
            raise ValidationError("probe.n_probe must be non-negative")

    @classmethod
    def from_dict(cls, data):
        d = _take(cls, {("lam" if k == "lambda" else k): v for k, v in data.items()}, "probe")
        return cls(**d)

    def to_dict(self):
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d

    def atom_params(self):
        return AtomProbeParams(lam=self.lam, delta=self.delta, stark=self.stark,
                               tau_points=self.tau_points)


@dataclass(frozen=True)
class ScanConfig:
    """Everything a scan depends on; a scan is a pure function of this."""

    state: StateSpec
    cutoff: int
    gamma: float
    t: float
    s: float = 0.0
    grid: GridSpec = field(default_factory=GridSpec)
    probe: ProbeSpec = field(default_factory=ProbeSpec)
    output: str | None = None
    reflect_axes: bool = False
    tail_budget: float = DEFAULT_TAIL_BUDGET
    max_gamma_t: float = 0.5
    min_coupling_ratio: float = 100.0
    min_mean_photons: float = 10.0

    def __post_init__(self):
        check_cutoff(self.cutoff)
        self.decay  # validates gamma and t
        if not self.s < 1:
            raise ValidationError(f"s must be < 1, got {self.s}")
        if not self.tail_budget > 0:
            raise ValidationError("tail_budget must be positive")
        if self.gamma * self.t > self.max_gamma_t:
            raise ConfigurationError(
                f"gamma*t = {self.gamma * self.t} exceeds the protocol limit "
                f"max_gamma_t = {self.max_gamma_t}"
            )

    @property
    def decay(self):
        return DecayParams(self.gamma, self.t)

    @classmethod
    def from_dict(cls, data):
        d = _take(cls, data, "config")
        for key in ("state", "cutoff", "gamma", "t"):
            if key not in d:
                raise ValidationError(f"config.{key} is required")
        d["state"] = StateSpec.from_dict(d["state"])
        if "grid" in d:
            d["grid"] = GridSpec.from_dict(d["grid"])
        if "probe" in d:
            d["probe"] = ProbeSpec.from_dict(d["probe"])
        try:
            return cls(**d)
        except TypeError as exc:
            raise ValidationError(str(exc)) from exc

    def to_dict(self):
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["state"] = self.state.to_dict()
        d["grid"] = asdict(self.grid)
        d["probe"] = self.probe.to_dict()
        return d


def load_config(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return ScanConfig.from_dict(data)


def prepare_state(spec, cutoff, tail_budget=DEFAULT_TAIL_BUDGET):
    """Initial density matrix described by a :class:`StateSpec`."""
    if spec.kind == "fock":
        return fock_state(int(spec.n), cutoff)
    if spec.kind == "coherent":
        return coherent_state(spec.beta, cutoff, tail_budget)
    return cat_state(spec.beta, spec.phase, cutoff, tail_budget)


@dataclass
class QuasiProbGrid:
    """Row-major scan result plus the configuration that produced it."""

    points: list
    config: ScanConfig
    version: str = __version__
    wall_time: float = 0.0
    tail_warnings: int = 0

    @property
    def alphas(self):
        return np.array([p.alpha for p in self.points])

    @property
    def values(self):
        return np.array([p.value for p in self.points])

    def as_array(self):
        """Values shaped ``(im_count, re_count)``."""
        return self.values.reshape(self.config.grid.im_count, self.config.grid.re_count)

    def metadata(self):
        return {
            "config": self.config.to_dict(),
            "version": self.version,
            "wall_time_s": self.wall_time,
            "tail_warnings": self.tail_warnings,
            "points": len(self.points),
        }


def _measure(p_true, config, index):
    """Photon statistics as delivered by the configured probe, and their sigma."""
    probe = config.probe
    if probe.mode == "ideal":
        return p_true, None
    atom = probe.atom_params()
    n_probe = config.cutoff if probe.n_probe is None else probe.n_probe
    if probe.mode == "full":
        signal = inversion_signal(p_true, atom, model="full")
    else:
        signal = inversion_signal(p_true, atom, model="strongfield")
    if probe.mode != "sampled":
        return invert_fourier(signal, atom.lam, n_probe), None
    seed = np.random.SeedSequence(probe.seed, spawn_key=(index,))
    noisy = sample_inversion(signal, probe.shots, seed)
    p = invert_fourier(noisy, atom.lam, n_probe)
    return p, statistics_uncertainty(noisy, atom.lam, n_probe, probe.shots)


def scan_point(config, rho0, alpha, index=0):
    """Run the full protocol for one phase-space point."""
    try:
        rho_t = dissipate(displace(rho0, alpha, config.tail_budget), config.decay)
        p, sigma = _measure(photon_statistics(rho_t), config, index)
        point = reconstruct_point(p, config.decay, config.s, alpha=alpha, warn=False)
    except ValidationError as exc:
        raise type(exc)(f"grid point {index} (alpha={alpha}): {exc}") from exc
    if sigma is not None:
        point = replace(point, sigma=noise_amplification(sigma, chi_weight(config.decay, config.s)))
    return point


def _resolve_threads(threads):
    if threads is None or threads == 1:
        return 1
    if threads == 0:
        return os.cpu_count() or 1
    if threads < 0:
        raise ConfigurationError(f"thread count must be >= 0, got {threads}")
    return int(threads)


def _check_probe_realism(config, rho0):
    if config.probe.mode == "ideal":
        return
    check_strong_coupling(config.probe.lam, config.gamma, config.min_coupling_ratio)
    if config.probe.mode == "full":
        mean = float(np.dot(np.arange(config.cutoff + 1), photon_statistics(rho0)))
        if mean < config.min_mean_photons:
            warnings.warn(
                f"mean photon number {mean:.3g} is below {config.min_mean_photons}; "
                "the strong-field inversion formula will be biased",
                RuntimeWarning,
                stacklevel=3,
            )


def run_scan(config, threads=1):
    """Evaluate the reconstruction over the configured phase-space grid."""
    start = time.perf_counter()
    rho0 = prepare_state(config.state, config.cutoff, config.tail_budget)
    _check_probe_realism(config, rho0)
    alphas = config.grid.alphas()

    def work(item):
        return scan_point(config, rho0, item[1], item[0])

    n_threads = _resolve_threads(threads)
    if n_threads == 1:
        points = [work(item) for item in enumerate(alphas)]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            points = list(pool.map(work, enumerate(alphas)))

    weight = chi_weight(config.decay, config.s)
    # bound = prefactor |chi|^(n+1) tail, so this is the reconstruct_point warning test
    flagged = sum(p.trunc_error_bound > weight.prefactor * abs(weight.chi) * TAIL_WARN_LEVEL
                  for p in points)
    if flagged:
        warnings.warn(f"{flagged} grid point(s) have a strongly amplified truncation tail",
                      TailAmplificationWarning, stacklevel=2)
    return QuasiProbGrid(points=points, config=config,
                         wall_time=time.perf_counter() - start, tail_warnings=int(flagged))


@dataclass
class OracleReport:
    deviations: np.ndarray
    max_deviation: float
    tolerance: float

    @property
    def passed(self):
        return self.max_deviation <= self.tolerance


def compare_with_oracle(grid, rho0, tolerance=1e-8):
    """Deviation of every grid value from the direct (undamped) evaluation."""
    if not grid.points:
        raise ValidationError("cannot compare an empty grid")
    config = grid.config
    expected = prepare_state(config.state, config.cutoff, config.tail_budget)
    rho0 = np.asarray(rho0)
    if rho0.shape != expected.shape or np.max(np.abs(rho0 - expected)) > 1e-12:
        raise DescriptorMismatchError("density matrix does not match the grid's state descriptor")
    oracle = np.array([wigner_direct(rho0, p.alpha, config.s, config.tail_budget)
                       for p in grid.points])
    dev = np.abs(grid.values - oracle)
    return OracleReport(deviations=dev, max_deviation=float(np.max(dev)), tolerance=tolerance)


def oracle_grid(config):
    """Direct evaluation of the initial state's quasiprobability on the scan grid."""
    start = time.perf_counter()
    rho0 = prepare_state(config.state, config.cutoff, config.tail_budget)
    r = abs((config.s + 1.0) / (config.s - 1.0))
    amp = math.fsum(r**n for n in range(config.cutoff + 1))
    points = [QuasiProbPoint(alpha=a, value=wigner_direct(rho0, a, config.s, config.tail_budget),
                             trunc_error_bound=0.0, noise_amp=amp)
              for a in config.grid.alphas()]
    return QuasiProbGrid(points=points, config=config, wall_time=time.perf_counter() - start)


def sidecar_path(path):
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_grid(grid, path, reflect_axes=None):
    """Write ``path`` as CSV and the metadata to ``path.json`` next to it.

    With ``reflect_axes`` the coordinates are written as ``-alpha``, which
    puts a coherent state's peak at its own amplitude.
    """
    reflect = grid.config.reflect_axes if reflect_axes is None else reflect_axes
    sign = -1.0 if reflect else 1.0
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for p in grid.points:
            a = sign * p.alpha
            writer.writerow([f"{x:.16e}" for x in (a.real + 0.0, a.imag + 0.0, p.value,
                                                   p.trunc_error_bound, p.noise_amp)])
    meta = grid.metadata()
    meta["reflect_axes"] = reflect
    with open(sidecar_path(path), "w") as fh:
        json.dump(meta, fh, indent=2)
    return path


def read_grid_csv(path):
    """Load a grid CSV as a ``(n_points, 5)`` float array."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ValidationError(f"{path}: unexpected header {header}")
        rows = [[float(x) for x in row] for row in reader if row]
    return np.array(rows, dtype=float).reshape(-1, len(CSV_HEADER))


def diff_grids(a, b):
    """Maximum ``|F_a - F_b|`` between two grid arrays on identical coordinates."""
    if a.shape != b.shape or len(a) == 0:
        raise ValidationError(f"grids have incompatible shapes {a.shape} and {b.shape}")
    if np.max(np.abs(a[:, :2] - b[:, :2])) > 1e-12:
        raise ValidationError("grids are sampled at different phase-space points")
    return float(np.max(np.abs(a[:, 2] - b[:, 2])))
