"""Multi-user frequency-selective uplink seen by a half-wavelength ULA.

Symbol histories are stored with Q - 1 genuine pre-frame symbols so that
s_u[k - q] exists for every frame column k = 0..K-1: column m of
``SignalFrame.symbols`` holds s_u[m - (Q - 1)].
"""

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Self

import numpy as np
import numpy.typing as npt

from pytmmse import const
from pytmmse.exceptions import DimensionError
from pytmmse.helper import complex_normal, from_db
from pytmmse.tensor import ComplexArray

_LOGGER = logging.getLogger(__name__)

RealArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class ScenarioParams:
    antennas: int
    users: int = const.USERS
    taps: int = const.TAPS
    paths: int = const.PATHS
    frame_length: int = const.FRAME_LENGTH
    symbol_variance: float = const.SYMBOL_VARIANCE
    snr_db: float = 20.0
    symbol_period: float = const.SYMBOL_PERIOD
    max_delay: float | None = None
    normalize_gains: bool = False

    def __post_init__(self) -> None:
        for name in ("antennas", "users", "taps", "paths", "frame_length"):
            if getattr(self, name) < 1:
                raise DimensionError(f"{name} must be positive, was {getattr(self, name)}")
        if self.symbol_variance <= 0:
            raise DimensionError(
                f"symbol_variance must be positive, was {self.symbol_variance}"
            )

    @property
    def noise_variance(self) -> float:
        return self.symbol_variance / from_db(self.snr_db)

    @property
    def delay_spread(self) -> float:
        """Upper end of the uniform path-delay draw, in symbol periods."""
        if self.max_delay is not None:
            return self.max_delay
        return (self.taps - 1) * self.symbol_period


@dataclass(frozen=True)
class ChannelRealization:
    gains: ComplexArray  # (U, L)
    angles: RealArray  # (U, L), degrees
    delays: RealArray  # (U, L), symbol periods
    matrices: ComplexArray  # (U, N, Q)

    @property
    def users(self) -> int:
        return int(self.matrices.shape[0])

    @property
    def antennas(self) -> int:
        return int(self.matrices.shape[1])

    @property
    def taps(self) -> int:
        return int(self.matrices.shape[2])

    def __getitem__(self, user: int) -> ComplexArray:
        return self.matrices[user]

    @classmethod
    def assemble(
        cls,
        gains: npt.ArrayLike,
        angles: npt.ArrayLike,
        delays: npt.ArrayLike,
        antennas: int,
        taps: int,
        symbol_period: float = const.SYMBOL_PERIOD,
    ) -> Self:
        """H_u = sum_l alpha_{u,l} a(theta_{u,l}) g(tau_{u,l})^T."""
        gains = np.atleast_2d(np.asarray(gains, dtype=np.complex128))
        angles = np.atleast_2d(np.asarray(angles, dtype=np.float64))
        delays = np.atleast_2d(np.asarray(delays, dtype=np.float64))
        if not gains.shape == angles.shape == delays.shape:
            raise DimensionError(
                f"Path parameters disagree: {gains.shape}, {angles.shape}, {delays.shape}"
            )
        steering = steering_vector(angles[..., np.newaxis], antennas)
        pulses = pulse_vector(delays[..., np.newaxis], taps, symbol_period)
        matrices = np.einsum("ul,uln,ulq->unq", gains, steering, pulses)
        return cls(gains, angles, delays, matrices)

    def reconstruction_error(self, symbol_period: float = const.SYMBOL_PERIOD) -> float:
        rebuilt = self.assemble(
            self.gains,
            self.angles,
            self.delays,
            self.antennas,
            self.taps,
            symbol_period,
        )
        return float(np.max(np.abs(rebuilt.matrices - self.matrices)))


@dataclass(frozen=True)
class SignalFrame:
    received: ComplexArray  # X, (N, K)
    symbols: ComplexArray  # (U, K + Q - 1)
    noise: ComplexArray = field(repr=False)  # B, (N, K)

    @property
    def frame_length(self) -> int:
        return int(self.received.shape[1])

    @property
    def taps(self) -> int:
        return int(self.symbols.shape[1] - self.frame_length + 1)

    def training(self, user: int, delta: int) -> ComplexArray:
        """s_u[k - delta] for k = 0..K-1."""
        if not 0 <= delta < self.taps:
            raise DimensionError(f"Lag must be within 0..{self.taps - 1} But was: {delta}")
        return lagged_symbols(self.symbols[user], delta, self.frame_length)

    def stacked_symbols(self, user: int) -> ComplexArray:
        """Q x K matrix whose column k is s_u[k] = [s_u[k], ..., s_u[k-Q+1]]."""
        return stack_symbols(self.symbols[user], self.frame_length)

    def checksum(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.received).tobytes()).hexdigest()


@dataclass(frozen=True)
class Covariances:
    desired: ComplexArray  # R_dd
    interference: ComplexArray  # R_ii
    noise: ComplexArray  # R_bb
    received: ComplexArray  # R_xx
    cross: ComplexArray  # (N, Q), column delta is p(delta)
    symbols: ComplexArray  # R_ss

    def p(self, delta: int) -> ComplexArray:
        return self.cross[:, delta]


def lagged_symbols(history: ComplexArray, delta: int, frame_length: int) -> ComplexArray:
    """Slice s[k - delta], k = 0..K-1, out of a history with Q - 1 pre-frame symbols."""
    start = history.shape[-1] - frame_length - delta
    if start < 0:
        raise DimensionError(f"History too short for lag {delta}")
    return history[..., start : start + frame_length]


def stack_symbols(history: ComplexArray, frame_length: int) -> ComplexArray:
    taps = history.shape[-1] - frame_length + 1
    return np.stack([lagged_symbols(history, q, frame_length) for q in range(taps)])


def steering_vector(theta: float | RealArray, antennas: int) -> ComplexArray:
    """ULA response exp(-j pi (n-1) cos theta), theta in degrees.

    Broadcasts over array-valued ``theta``; the antenna index is the last axis.
    """
    if antennas < 1:
        raise DimensionError(f"antennas must be positive, was {antennas}")
    n = np.arange(antennas)
    phase = np.cos(np.deg2rad(np.asarray(theta, dtype=np.float64)))
    return np.exp(-1j * np.pi * n * phase)


def pulse_vector(
    tau: float | RealArray, taps: int, symbol_period: float = const.SYMBOL_PERIOD
) -> RealArray:
    """Sinc pulse sampled at the tap instants, g(qT - tau) for q = 0..Q-1."""
    if taps < 1:
        raise DimensionError(f"taps must be positive, was {taps}")
    q = np.arange(taps) * symbol_period
    return np.sinc((q - np.asarray(tau, dtype=np.float64)) / symbol_period)


def draw_channel(params: ScenarioParams, rng: np.random.Generator) -> ChannelRealization:
    shape = (params.users, params.paths)
    gains = complex_normal(rng, shape)
    if params.normalize_gains:
        gains /= np.sqrt(params.paths)
    angles = rng.uniform(*const.ANGLE_RANGE_DEG, size=shape)
    delays = rng.uniform(0.0, params.delay_spread, size=shape)
    _LOGGER.debug(
        "Channel draw: %d users x %d paths, delays within [0, %s]",
        params.users,
        params.paths,
        params.delay_spread,
    )
    return ChannelRealization.assemble(
        gains, angles, delays, params.antennas, params.taps, params.symbol_period
    )


def qpsk_symbols(
    count: int | tuple[int, ...], symbol_variance: float, rng: np.random.Generator
) -> ComplexArray:
    """Uniform draws from {(±1 ± j)/√2}, scaled to ``symbol_variance``."""
    shape = (count,) if isinstance(count, int) else count
    bits = rng.integers(0, 2, size=(2, *shape))
    signs = 1 - 2 * bits
    return np.sqrt(symbol_variance / 2) * (signs[0] + 1j * signs[1])


def synthesize_frame(
    params: ScenarioParams, channel: ChannelRealization, rng: np.random.Generator
) -> SignalFrame:
    k, q = params.frame_length, channel.taps
    symbols = qpsk_symbols((channel.users, k + q - 1), params.symbol_variance, rng)
    noise = complex_normal(rng, (channel.antennas, k), params.noise_variance)

    received = noise.copy()
    for user in range(channel.users):
        received += channel[user] @ stack_symbols(symbols[user], k)
    return SignalFrame(received, symbols, noise)


def theoretical_covariances(
    params: ScenarioParams, channel: ChannelRealization, user: int
) -> Covariances:
    if not 0 <= user < channel.users:
        raise DimensionError(f"User must be within 0..{channel.users - 1} But was: {user}")
    r_ss = params.symbol_variance * np.eye(channel.taps)
    per_user = np.einsum("unq,qp,ump->unm", channel.matrices, r_ss, channel.matrices.conj())

    desired = per_user[user]
    interference = np.delete(per_user, user, axis=0).sum(axis=0)
    noise = params.noise_variance * np.eye(channel.antennas)
    return Covariances(
        desired=desired,
        interference=interference,
        noise=noise,
        received=desired + interference + noise,
        cross=channel[user] @ r_ss,
        symbols=r_ss,
    )
