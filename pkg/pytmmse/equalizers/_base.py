from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, ClassVar

import numpy as np
import numpy.typing as npt

from pytmmse.exceptions import ConfigurationError, DimensionError
from pytmmse.metrics import ProductCounter, sample_mse
from pytmmse.tensor import ComplexArray, CpFilter

if TYPE_CHECKING:
    from pytmmse.sysmodel import Covariances


@dataclass(frozen=True)
class LinearEqualizer:
    w: ComplexArray
    delta: int = 0

    @property
    def antennas(self) -> int:
        return int(self.w.size)


@dataclass(frozen=True)
class TrainingData:
    """One frame as seen by every equalizer of a trial.

    ``training`` is already lag-aligned: entry k is s_u[k - delta].
    """

    received: ComplexArray
    training: ComplexArray
    delta: int = 0
    covariances: "Covariances | None" = None

    def __post_init__(self) -> None:
        if self.received.ndim != 2 or self.training.shape != (self.received.shape[1],):
            raise DimensionError(
                f"Training of shape {self.training.shape} does not match"
                f" frame of shape {self.received.shape}"
            )

    @property
    def antennas(self) -> int:
        return int(self.received.shape[0])

    @property
    def frame_length(self) -> int:
        return int(self.received.shape[1])


@dataclass(frozen=True)
class EqualizerReport:
    equalizer_id: str
    filter: CpFilter | LinearEqualizer
    w_vec: ComplexArray
    delta: int = 0
    iterations: int = 0
    mse_trace: tuple[float, ...] = ()
    converged: bool = True
    counter: ProductCounter | None = None
    formula_products: int = 0
    metadata: dict[str, Any] = field(default_factory=dict)

    def output(self, received: npt.ArrayLike) -> ComplexArray:
        return apply_equalizer(self.w_vec, received)

    def mse(self, data: TrainingData) -> float:
        return sample_mse(self.w_vec, data.received, data.training)


class Equalizer:
    equalizer_id: ClassVar[str] = ""

    def __init__(self, *, count_products: bool = False) -> None:
        self._count_products = count_products

    @classmethod
    def registry(cls) -> dict[str, type["Equalizer"]]:
        found: dict[str, type[Equalizer]] = {}
        for subclass in cls.__subclasses__():
            if subclass.equalizer_id:
                found[subclass.equalizer_id] = subclass
            found |= subclass.registry()
        return found

    @classmethod
    def create(cls, equalizer_id: str, **options: Any) -> "Equalizer":
        """Instantiate the equalizer registered under ``equalizer_id``."""
        registry = cls.registry()
        if (target_cls := registry.get(equalizer_id)) is None:
            raise ConfigurationError(
                f"Allowed equalizers: {sorted(registry)} But was: {equalizer_id}"
            )
        return target_cls(**options)

    def new_counter(self) -> ProductCounter | None:
        return ProductCounter() if self._count_products else None

    def train(self, data: TrainingData) -> EqualizerReport:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(<{self.equalizer_id}>)"


def mse_objective(
    w: npt.ArrayLike, r_xx: npt.ArrayLike, p: npt.ArrayLike, sigma_s2: float
) -> float:
    """J(w) = sigma_s^2 - p^H w - w^H p + w^H R_xx w."""
    w = np.asarray(w, dtype=np.complex128)
    r_xx = np.asarray(r_xx, dtype=np.complex128)
    p = np.asarray(p, dtype=np.complex128)
    if w.ndim != 1 or p.shape != w.shape or r_xx.shape != (w.size, w.size):
        raise DimensionError(
            f"Inconsistent shapes: w {w.shape}, R_xx {r_xx.shape}, p {p.shape}"
        )
    value = sigma_s2 - np.vdot(p, w) - np.vdot(w, p) + np.vdot(w, r_xx @ w)
    return float(np.real(value))


def apply_equalizer(w_vec: npt.ArrayLike, received: npt.ArrayLike) -> ComplexArray:
    """y[k] = w^H x[k] for every column of ``received``."""
    w = np.asarray(w_vec, dtype=np.complex128)
    x = np.asarray(received, dtype=np.complex128)
    if w.ndim != 1 or x.ndim != 2 or x.shape[0] != w.size:
        raise DimensionError(f"Filter of shape {w.shape} cannot filter {x.shape}")
    return w.conj() @ x
