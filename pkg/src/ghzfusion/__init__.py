"""Loss thresholds of GHZ-measurement fusion architectures.

The package models encoded Bell and GHZ measurements under photon loss,
builds the primal/dual syndrome graphs of the fusion network, runs an
erasure-percolation Monte Carlo over them, and estimates loss thresholds as
curve crossings.  A stabilizer-algebra oracle independently verifies the
measurement/check structure on small instances.
"""

__version__ = "0.1.0"

from .bsm import (
    BlockProbs,
    BsmModel,
    BsmOutcomeProbs,
    Convention,
    Protocol,
    active_block_probs,
    gamma_from_loss,
    joint_distribution,
    qpc_probs,
    static_block_probs,
)
from .errors import (
    DegenerateCrossingError,
    InconsistencyError,
    NoCrossingError,
    ValidationError,
)
from .gsm import (
    Architecture,
    GsmErasureProbs,
    GsmSpec,
    Objective,
    efficiency_table,
    gsm_efficiency,
    gsm_erasure_probs,
    optimize_j,
    preset_table,
)
from .lattice import FusionNetwork, build_network
from .syndrome import GraphBundle, SyndromeGraph, build_syndrome_graphs
from .erasure import (
    CorrelationMode,
    ErasureModel,
    UnionFind,
    percolates,
    run_batch,
    sample_erasures,
)
from .threshold import (
    SweepConfig,
    ThresholdCurve,
    estimate_crossing,
    estimate_threshold,
    eta_grid,
    photons_per_resource_state,
    sweep,
)
from .pauli import PauliOperator, StabilizerGroup, group_contains, multiply
from .verify import (
    run_verification,
    verify_check_operator,
    verify_gsm_reconstruction,
)

__all__ = [name for name in dir() if not name.startswith("_")]
