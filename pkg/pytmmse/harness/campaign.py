"""One seeded trial and the aggregation of many."""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, fields
from typing import Any

import numpy as np

from pytmmse.equalizers import (
    Equalizer,
    EqualizerReport,
    TrainingData,
    select_delta,
    select_delta_by_training,
)
from pytmmse.exceptions import PyTMMSEException
from pytmmse.helper import to_db
from pytmmse.metrics import sinr
from pytmmse.sysmodel import (
    Covariances,
    draw_channel,
    synthesize_frame,
    theoretical_covariances,
)

from .config import TrialConfig

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialSeed:
    """Random streams of one trial.

    The scenario stream (channel, symbols, noise) depends on the trial index
    only, so trial t sees the same draw at every point of a sweep. The init
    stream also depends on the sweep point.
    """

    master: int
    sweep_index: int
    trial_index: int

    @property
    def scenario(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.master, spawn_key=(self.trial_index,))

    @property
    def init(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(
            self.master, spawn_key=(self.trial_index, self.sweep_index)
        )


def trial_seed(master: int, sweep_index: int, trial_index: int) -> TrialSeed:
    return TrialSeed(master, sweep_index, trial_index)


@dataclass(frozen=True)
class EqualizerOutcome:
    equalizer_id: str
    sinr: float
    mse: float
    iterations: int
    converged: bool
    formula_products: int
    instrumented_products: int | None
    metadata: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class TrialResult:
    checksum: str
    delta: int
    outcomes: dict[str, EqualizerOutcome]


@dataclass(frozen=True)
class ResultRow:
    sweep_value: float
    equalizer: str
    sinr_db: float
    sinr_linear: float
    sinr_db_mean: float
    sinr_std_db: float
    mse: float
    formula_products: int
    instrumented_products: int
    iterations: float
    convergence_rate: float
    seed: int
    init: str = ""
    canonical_init: bool = False

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in self.field_names()}


def _equalizer_options(
    config: TrialConfig, equalizer_id: str, rng: np.random.Generator
) -> dict[str, Any]:
    match equalizer_id:
        case "mmse-sample":
            return {"loading": config.sample_loading, "count_products": config.count_products}
        case "lr-tmmse":
            return {"config": config.filter, "rng": rng, "count_products": config.count_products}
        case _:
            return {}


def _outcome(
    report: EqualizerReport, data: TrainingData, covariances: Covariances
) -> EqualizerOutcome:
    counter = report.counter
    return EqualizerOutcome(
        report.equalizer_id,
        sinr=sinr(
            report.w_vec, covariances.received, covariances.interference, covariances.noise
        ),
        mse=report.mse_trace[-1] if report.mse_trace else report.mse(data),
        iterations=report.iterations,
        converged=report.converged,
        formula_products=report.formula_products,
        instrumented_products=None if counter is None else counter.total,
        metadata=dict(report.metadata),
    )


def run_trial(config: TrialConfig, seed: TrialSeed) -> TrialResult:
    """Draw one channel and frame, then train and score every equalizer on it."""
    rng = np.random.default_rng(seed.scenario)
    init_rng = np.random.default_rng(seed.init)
    params, user = config.scenario, config.user

    channel = draw_channel(params, rng)
    frame = synthesize_frame(params, channel, rng)
    covariances = theoretical_covariances(params, channel, user)
    if config.delta_rule == "training":
        delta = select_delta_by_training(
            frame.received, frame.stacked_symbols(user), config.sample_loading
        )
    else:
        delta = select_delta(covariances.symbols, channel[user], covariances.received)

    checksum = frame.checksum()
    _LOGGER.debug(
        "Trial %d at point %d: frame %s, lag %d",
        seed.trial_index,
        seed.sweep_index,
        checksum[:16],
        delta,
    )
    data = TrainingData(frame.received, frame.training(user, delta), delta, covariances)

    outcomes = {}
    for equalizer_id in config.equalizers:
        options = _equalizer_options(config, equalizer_id, init_rng)
        report = Equalizer.create(equalizer_id, **options).train(data)
        if frame.checksum() != checksum:
            raise PyTMMSEException(f"{equalizer_id} modified the shared frame")
        outcomes[equalizer_id] = _outcome(report, data, covariances)
    return TrialResult(checksum, delta, outcomes)


def aggregate(
    sweep_value: float,
    results: Sequence[TrialResult],
    seed: int,
    equalizers: Iterable[str] | None = None,
) -> list[ResultRow]:
    """One row per equalizer; SINR is averaged linearly, then converted to dB."""
    if not results:
        raise ValueError("Cannot aggregate zero trials")
    ids = list(equalizers) if equalizers is not None else list(results[0].outcomes)
    rows = []
    for equalizer_id in sorted(ids):
        outcomes = [result.outcomes[equalizer_id] for result in results]
        linear = np.array([o.sinr for o in outcomes])
        per_trial_db = 10 * np.log10(linear)
        instrumented = [o.instrumented_products for o in outcomes]
        rows.append(
            ResultRow(
                sweep_value=float(sweep_value),
                equalizer=equalizer_id,
                sinr_db=to_db(float(np.mean(linear))),
                sinr_linear=float(np.mean(linear)),
                sinr_db_mean=float(np.mean(per_trial_db)),
                sinr_std_db=float(np.std(per_trial_db)),
                mse=float(np.mean([o.mse for o in outcomes])),
                formula_products=int(np.rint(np.mean([o.formula_products for o in outcomes]))),
                instrumented_products=(
                    0
                    if None in instrumented
                    else int(np.rint(np.mean(np.asarray(instrumented, dtype=np.float64))))
                ),
                iterations=float(np.mean([o.iterations for o in outcomes])),
                convergence_rate=float(np.mean([o.converged for o in outcomes])),
                seed=seed,
                init=str(outcomes[0].metadata.get("init", "")),
                canonical_init=any(o.metadata.get("canonical_init", False) for o in outcomes),
            )
        )
    return rows
