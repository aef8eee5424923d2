from ._base import (
    Equalizer,
    EqualizerReport,
    LinearEqualizer,
    TrainingData,
    apply_equalizer,
    mse_objective,
)
from .linear import (
    SampleMmse,
    TheoreticalMmse,
    mmse_sample,
    mmse_theoretical,
    sample_statistics,
    select_delta,
    select_delta_by_training,
)
from .lr_tmmse import (
    InitStrategy,
    LrTmmse,
    LrTmmseConfig,
    block_input,
    lr_tmmse_train,
    reshape_frame,
)
from .solve import hermitian_solve

__all__ = [
    "Equalizer",
    "EqualizerReport",
    "InitStrategy",
    "LinearEqualizer",
    "LrTmmse",
    "LrTmmseConfig",
    "SampleMmse",
    "TheoreticalMmse",
    "TrainingData",
    "apply_equalizer",
    "block_input",
    "hermitian_solve",
    "lr_tmmse_train",
    "mmse_sample",
    "mmse_theoretical",
    "mse_objective",
    "reshape_frame",
    "sample_statistics",
    "select_delta",
    "select_delta_by_training",
]
