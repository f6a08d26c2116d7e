"""Successive jump and mode decomposition of nonstationary signals."""

from .decompose import (
    AdmmState,
    MaxItersExceeded,
    decompose,
    decompose_channelwise,
    decompose_multivariate,
    run_admm_stage,
    run_alpha_schedule,
)
from .jump import (
    DifferenceOperator,
    PenaltyParams,
    penalty_phi,
    update_auxiliary,
    update_jump,
    update_multiplier,
)
from .metrics import EvalReport, correlation_coefficient, match_components, mse, score_decomposition
from .signal import (
    ChannelMismatchError,
    ConfigError,
    DecompositionResult,
    LengthMismatchError,
    MultichannelSignal,
    NonFiniteError,
    Signal,
    SolverConfig,
    StageDiagnostics,
    TooShortError,
    ValidationError,
    crop,
    mirror_extend,
    validate,
)
from .spectral import (
    HalfSpectrum,
    forward_half_spectrum,
    inverse_real,
    update_center_frequency,
    update_mode,
    update_residual,
)
from .synthetic import GroundTruth, JumpSpec, edr_surrogate, make_jump, three_channel_benchmark

__version__ = "0.1.0"
