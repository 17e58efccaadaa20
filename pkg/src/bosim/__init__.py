"""Classical simulation, sampling and validation of boson sampling with photon loss."""

from .distributions import (
    Distribution,
    distinguishable_distribution,
    lossy_both_distribution,
    lossy_detector_distribution,
    lossy_source_distribution,
    pattern_weights,
    similarity,
    standard_distribution,
    tvd,
    uniform_distribution,
)
from .interferometer import MeshCell, MeshSpec, compose_mesh, decompose_mesh, haar_random
from .loss import LossProfile, input_weight, output_weight, uniform_profile
from .patterns import (
    InputPattern,
    OutputPattern,
    enumerate_multisets,
    enumerate_no_collision,
    lost_port_completions,
)
from .permanent import perm_naive, perm_ryser, perm_ryser_batch, submatrix
from .rates import RateParams, projected_rate, speedup_factor
from .sampler import EventLog, empirical_distribution, sample
from .validation import CounterTrace, lr_test, rne_test

__version__ = "0.1.0"
