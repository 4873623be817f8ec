"""Globally optimal discrete phase configuration for RIS-aided SISO links."""

from .baselines import (
    BaselineKind,
    branch_and_bound,
    exhaustive,
    quantized_alignment,
    trivial_codebook,
)
from .channels import (
    FarFieldScene,
    Model1Params,
    build_model2_objective,
    sample_gaussian_cascade,
    sample_model1,
    snr_db,
    steering_entry,
)
from .das import build_coder, enumerate_candidates, solve_binary, solve_das, subproblem_best
from .reduce import (
    CascadedChannel,
    RankOneMatrix,
    build_phi,
    channel_objective,
    dehomogenize,
    homogenize,
    principal_vector,
)
from .types import (
    PhaseConfig,
    QuantizationScheme,
    RankOneObjective,
    Solution,
    continuous_bound,
    evaluate,
)

__version__ = "0.1.0"
