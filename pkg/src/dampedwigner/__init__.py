"""Wigner-function reconstruction of a cavity field from photon statistics
measured after zero-temperature damping."""

from ._version import __version__
from .dissipation import (DecayParams, apply_J, apply_L, binomial_map, dissipate,
                          evolve_diagonals, integrate_master_equation)
from .errors import (ConfigurationError, CutoffError, DescriptorMismatchError,
                     SingularParameterError, TailAmplificationWarning, TruncationError,
                     ValidationError)
from .fock import (cat_state, coherent_state, displace, displacement_matrix, fock_state,
                   parity_expectation, photon_statistics)
from .pipeline import (QuasiProbGrid, ScanConfig, compare_with_oracle, prepare_state,
                       run_scan)
from .probe import (AtomProbeParams, InversionSignal, inversion_signal, inversion_strongfield,
                    invert_fourier, population_inversion, sample_inversion)
from .reconstruction import (QuasiProbPoint, chi_weight, noise_amplification, reconstruct_point,
                             reconstruct_wigner, wigner_direct)
