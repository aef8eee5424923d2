import logging

import numpy as np
import numpy.typing as npt

from pytmmse.exceptions import ConfigurationError, DimensionError
from pytmmse.metrics import ProductCounter, count_mmse, sample_mse
from pytmmse.tensor import ComplexArray

from ._base import Equalizer, EqualizerReport, LinearEqualizer, TrainingData
from .solve import hermitian_solve

_LOGGER = logging.getLogger(__name__)

_SAMPLE_REMEDY = "raise the diagonal loading or the training length K"


def sample_statistics(
    received: npt.ArrayLike, training: npt.ArrayLike, loading: float = 0.0
) -> tuple[ComplexArray, ComplexArray]:
    """R = (1/K) X X^H + loading I and p = (1/K) X s*."""
    x = np.asarray(received, dtype=np.complex128)
    s = np.asarray(training, dtype=np.complex128)
    if x.ndim != 2 or s.shape != (x.shape[1],):
        raise DimensionError(f"Training of shape {s.shape} does not match {x.shape}")
    if loading < 0:
        raise DimensionError(f"Loading must be non-negative, was {loading}")
    k = x.shape[1]
    r = x @ x.conj().T / k
    if loading:
        r = r + loading * np.eye(x.shape[0])
    return r, x @ s.conj() / k


def mmse_theoretical(
    r_xx: npt.ArrayLike, p: npt.ArrayLike, delta: int = 0, loading: float = 0.0
) -> LinearEqualizer:
    """w = R_xx^{-1} p."""
    r_xx = np.asarray(r_xx, dtype=np.complex128)
    if loading:
        r_xx = r_xx + loading * np.eye(r_xx.shape[0])
    return LinearEqualizer(hermitian_solve(r_xx, p), delta)


def select_delta(
    r_ss: npt.ArrayLike, h_u: npt.ArrayLike, r_xx: npt.ArrayLike
) -> int:
    """Lag with the largest diagonal entry of R_ss H^H R_xx^{-1} H R_ss.

    Returned as a 0-based lag; ties go to the smallest lag.
    """
    r_ss = np.asarray(r_ss, dtype=np.complex128)
    h_u = np.asarray(h_u, dtype=np.complex128)
    if h_u.ndim != 2 or r_ss.shape != (h_u.shape[1], h_u.shape[1]):
        raise DimensionError(f"R_ss {r_ss.shape} does not match H_u {h_u.shape}")
    g = h_u @ r_ss
    gain = np.real(np.einsum("nq,nq->q", g.conj(), hermitian_solve(r_xx, g)))
    return int(np.argmax(gain))


def mmse_sample(
    received: npt.ArrayLike,
    training: npt.ArrayLike,
    loading: float = 0.0,
    *,
    delta: int = 0,
    counter: ProductCounter | None = None,
) -> LinearEqualizer:
    r, p = sample_statistics(received, training, loading)
    n, k = np.shape(received)
    if counter is not None:
        counter.statistics(n, k)
    w = hermitian_solve(r, p, remedy=_SAMPLE_REMEDY)
    if counter is not None:
        counter.solve(n)
    return LinearEqualizer(w, delta)


def select_delta_by_training(
    received: npt.ArrayLike, lagged_training: npt.ArrayLike, loading: float = 0.0
) -> int:
    """Lag whose sample-MMSE filter reaches the lowest training MSE.

    ``lagged_training`` is Q x K; row q is s_u[k - q].
    """
    candidates = np.asarray(lagged_training, dtype=np.complex128)
    errors = [
        sample_mse(mmse_sample(received, s, loading).w, received, s) for s in candidates
    ]
    _LOGGER.debug("Training MSE per lag: %s", np.round(errors, 6))
    return int(np.argmin(errors))


class TheoreticalMmse(Equalizer):
    equalizer_id = "mmse-theoretical"

    def train(self, data: TrainingData) -> EqualizerReport:
        if data.covariances is None:
            raise ConfigurationError(f"{self.equalizer_id} needs channel covariances")
        covariances = data.covariances
        eq = mmse_theoretical(covariances.received, covariances.p(data.delta), data.delta)
        return EqualizerReport(
            self.equalizer_id,
            eq,
            eq.w,
            delta=data.delta,
            mse_trace=(sample_mse(eq.w, data.received, data.training),),
        )


class SampleMmse(Equalizer):
    equalizer_id = "mmse-sample"

    def __init__(self, *, loading: float = 0.0, count_products: bool = False) -> None:
        super().__init__(count_products=count_products)
        self._loading = loading

    def train(self, data: TrainingData) -> EqualizerReport:
        counter = self.new_counter()
        eq = mmse_sample(
            data.received, data.training, self._loading, delta=data.delta, counter=counter
        )
        return EqualizerReport(
            self.equalizer_id,
            eq,
            eq.w,
            delta=data.delta,
            iterations=1,
            mse_trace=(sample_mse(eq.w, data.received, data.training),),
            counter=counter,
            formula_products=count_mmse(data.antennas, data.frame_length),
            metadata={"loading": self._loading},
        )
