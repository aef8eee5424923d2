"""Low-rank tensor MMSE equalizer.

The filter is kept as a rank-R CP tensor and trained by alternating
closed-form updates: with every mode but d frozen, the output is linear in
the stacked block w_d, so each block update is a small MMSE problem of
size R N_d.
"""

import logging
from dataclasses import dataclass
from enum import StrEnum
from math import prod

import numpy as np
import numpy.typing as npt

from pytmmse import const
from pytmmse.exceptions import ConfigurationError, DimensionError, SingularCovarianceError
from pytmmse.metrics import ProductCounter, count_lr_tmmse, sample_mse
from pytmmse.tensor import (
    ComplexArray,
    ComplexTensor,
    CpFilter,
    contraction_products,
    mode_contract,
    reshape_vector_to_tensor,
    vectorize_cp,
)

from ._base import Equalizer, EqualizerReport, TrainingData
from .linear import sample_statistics
from .solve import hermitian_solve

_LOGGER = logging.getLogger(__name__)


class InitStrategy(StrEnum):
    CANONICAL = "canonical"
    CANONICAL_PERTURBED = "canonical-perturbed"
    RANDOM = "random"
    MATCHED = "matched"


@dataclass(frozen=True)
class LrTmmseConfig:
    dims: tuple[int, ...]
    rank: int = 3
    max_iters: int = const.MAX_ITERATIONS
    epsilon: float = const.EPSILON
    loading: float = const.LOADING
    relative_loading: bool = True
    init: InitStrategy = InitStrategy.CANONICAL_PERTURBED
    perturbation: float = const.PERTURBATION

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        try:
            object.__setattr__(self, "init", InitStrategy(self.init))
        except ValueError as error:
            raise ConfigurationError(
                f"Allowed init: {[s.value for s in InitStrategy]} But was: {self.init}"
            ) from error
        if not self.dims or min(self.dims) < 1:
            raise ConfigurationError(f"Filter dims must be positive, got {self.dims}")
        if self.rank < 1 or self.max_iters < 1:
            raise ConfigurationError(
                f"Rank and max_iters must be positive, got R={self.rank}"
                f" max_iters={self.max_iters}"
            )
        if self.epsilon <= 0 or self.loading < 0:
            raise ConfigurationError(
                f"Need epsilon > 0 and loading >= 0, got {self.epsilon}, {self.loading}"
            )

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def antennas(self) -> int:
        return prod(self.dims)

    def block_loading(self, covariance: ComplexArray) -> float:
        if not self.relative_loading:
            return self.loading
        return self.loading * float(np.real(np.trace(covariance))) / covariance.shape[0]

    def initial_filter(
        self,
        rng: np.random.Generator | None = None,
        reference: ComplexTensor | None = None,
    ) -> CpFilter:
        """Starting factors; the matched init needs the cross-correlation tensor."""
        if self.init is InitStrategy.CANONICAL:
            return CpFilter.canonical(self.dims, self.rank)
        if self.init is InitStrategy.MATCHED:
            if reference is None:
                raise ConfigurationError("Matched init needs a reference tensor")
            return CpFilter.matched(reference, self.rank, rng, self.perturbation)
        if rng is None:
            raise ConfigurationError(f"Init strategy {self.init} needs a random generator")
        if self.init is InitStrategy.RANDOM:
            return CpFilter.random(self.dims, self.rank, rng)
        return CpFilter.perturbed(self.dims, self.rank, rng, self.perturbation)


def reshape_frame(received: npt.ArrayLike, dims: tuple[int, ...]) -> ComplexTensor:
    """(D+1)-way tensor of dims (N_1, ..., N_D, K) from an N x K frame."""
    x = np.asarray(received, dtype=np.complex128)
    if x.ndim != 2 or x.shape[0] != prod(dims):
        raise DimensionError(f"Frame of shape {x.shape} does not factor as {dims}")
    return ComplexTensor((*dims, x.shape[1]), x.reshape(-1, order="F"))


def block_input(
    tensor: ComplexTensor,
    cp_filter: CpFilter,
    d: int,
    counter: ProductCounter | None = None,
) -> ComplexArray:
    """U_d: the R N_d x K stack of U_{d,r} = X x_{j != d} w_{j,r}^H."""
    if tensor.dims[:-1] != cp_filter.dims:
        raise DimensionError(f"Filter dims {cp_filter.dims} vs tensor dims {tensor.dims}")
    blocks = []
    for r in range(1, cp_filter.rank + 1):
        vectors = [cp_filter.factor(j, r) for j in range(1, cp_filter.order + 1)]
        blocks.append(mode_contract(tensor, d, vectors))
        if counter is not None:
            counter.add(
                "contraction", contraction_products(cp_filter.dims, d, tensor.dims[-1])
            )
    return np.vstack(blocks)


def lr_tmmse_train(
    received: npt.ArrayLike,
    training: npt.ArrayLike,
    config: LrTmmseConfig,
    *,
    rng: np.random.Generator | None = None,
    counter: ProductCounter | None = None,
    delta: int = 0,
) -> EqualizerReport:
    x = np.asarray(received, dtype=np.complex128)
    s = np.asarray(training, dtype=np.complex128)
    if x.shape[0] != config.antennas:
        raise DimensionError(
            f"Filter dims {config.dims} need {config.antennas} antennas, frame has {x.shape[0]}"
        )
    if s.shape != (x.shape[1],):
        raise DimensionError(f"Training of shape {s.shape} does not match {x.shape}")

    k = x.shape[1]
    tensor = reshape_frame(x, config.dims)
    reference: ComplexTensor | None = None
    if config.init is InitStrategy.MATCHED:
        reference = reshape_vector_to_tensor(x @ s.conj() / k, config.dims)
        if counter is not None:
            counter.matched_init(config.dims, k)
    cp_filter = config.initial_filter(rng, reference)
    if config.init is InitStrategy.CANONICAL and config.rank > 1 and not config.loading:
        _LOGGER.warning(
            "Canonical init with rank %d and no loading gives identical blocks;"
            " the first block covariance is singular",
            config.rank,
        )
    remedy = (
        "identical canonical-init blocks make the first block covariance singular"
        " for rank > 1; use the matched init or diagonal loading"
        if config.init is InitStrategy.CANONICAL
        else "raise the diagonal loading or the training length K"
    )

    w_vec = vectorize_cp(cp_filter)
    mse_trace: list[float] = []
    converged = False
    iteration = 0
    for iteration in range(1, config.max_iters + 1):
        previous = w_vec
        for d in range(1, config.order + 1):
            u_d = block_input(tensor, cp_filter, d, counter)
            r_u, p_u = sample_statistics(u_d, s)
            rows = u_d.shape[0]
            if counter is not None:
                counter.statistics(rows, k)
            if not np.any(p_u):
                # zero is the exact minimizer when the block input misses s
                _LOGGER.debug("Block %d is uncorrelated with the training", d)
                w_d = np.zeros(rows, dtype=np.complex128)
            else:
                loading = config.block_loading(r_u)
                _LOGGER.debug("Block %d loading %.3e", d, loading)
                if loading:
                    r_u = r_u + loading * np.eye(rows)
                try:
                    w_d = hermitian_solve(r_u, p_u, remedy=remedy)
                except SingularCovarianceError:
                    _LOGGER.error("Block %d solve failed at iteration %d", d, iteration)
                    raise
                if counter is not None:
                    counter.solve(rows)
            cp_filter = cp_filter.with_block(d, w_d)
            mse_trace.append(sample_mse(vectorize_cp(cp_filter), x, s))

        w_vec = vectorize_cp(cp_filter)
        distance = float(np.sum(np.abs(w_vec - previous) ** 2))
        _LOGGER.debug("Iteration %d: |w_i+1 - w_i|^2 = %.3e", iteration, distance)
        if distance < config.epsilon:
            converged = True
            break

    if not converged:
        _LOGGER.warning("LR-TMMSE stopped at max_iters=%d before converging", iteration)

    return EqualizerReport(
        LrTmmse.equalizer_id,
        cp_filter,
        w_vec,
        delta=delta,
        iterations=iteration,
        mse_trace=tuple(mse_trace),
        converged=converged,
        counter=counter,
        formula_products=count_lr_tmmse(
            config.dims, config.order, config.rank, iteration, k
        ),
        metadata={
            "init": str(config.init),
            "loading": config.loading,
            "relative_loading": config.relative_loading,
            "canonical_init": config.init is InitStrategy.CANONICAL,
        },
    )


class LrTmmse(Equalizer):
    equalizer_id = "lr-tmmse"

    def __init__(
        self,
        config: LrTmmseConfig,
        *,
        rng: np.random.Generator | None = None,
        count_products: bool = False,
    ) -> None:
        super().__init__(count_products=count_products)
        self.config = config
        self._rng = rng

    def train(self, data: TrainingData) -> EqualizerReport:
        return lr_tmmse_train(
            data.received,
            data.training,
            self.config,
            rng=self._rng,
            counter=self.new_counter(),
            delta=data.delta,
        )
