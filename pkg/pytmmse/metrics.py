"""SINR scoring and product-count accounting.

An N x N Hermitian solve is charged N^3 products for the factorization plus
N^2 for the two triangular sweeps. The LR-TMMSE closed form charges each
block in N_d units with a linear trailing term (quadratic with
``quadratic_solve_term``), while the counter records the R N_d systems it
actually solves, so the two are reported side by side. The matched init is
charged to its own phase, which the closed form has no term for.
"""

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from math import prod
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from pytmmse.exceptions import DimensionError

if TYPE_CHECKING:
    from pytmmse.equalizers import EqualizerReport

PHASES = ("statistics", "solve", "contraction", "init")


@dataclass
class ProductCounter:
    """Per-trial accumulator of complex products, split by phase."""

    phases: Counter[str] = field(default_factory=Counter)

    def add(self, phase: str, products: int) -> None:
        if phase not in PHASES:
            raise ValueError(f"Allowed phases: {PHASES} But was: {phase}")
        self.phases[phase] += int(products)

    def statistics(self, rows: int, samples: int) -> None:
        """R = U U^H / K and p = U s* / K for a rows x samples U."""
        self.add("statistics", rows * rows * samples + rows * samples)

    def solve(self, size: int) -> None:
        self.add("solve", size**3 + size**2)

    def matched_init(self, dims: Sequence[int], samples: int) -> None:
        """Cross-correlation p = X s* / K plus one mode-d Gram and eigensolve per mode."""
        n = prod(dims)
        self.add("init", n * samples + sum(n_d * n + n_d**3 for n_d in dims))

    @property
    def total(self) -> int:
        return sum(self.phases.values())

    def as_dict(self) -> dict[str, int]:
        return {phase: self.phases[phase] for phase in PHASES}


@dataclass(frozen=True)
class ComplexityModel:
    """Closed-form product counts of the sample MMSE and LR-TMMSE equalizers.

    ``quadratic_solve_term`` swaps the trailing N_d of the LR-TMMSE count for
    N_d^2, the per-block solve cost quoted next to the printed formula.
    """

    quadratic_solve_term: bool = False

    @staticmethod
    def solve(size: int) -> int:
        return size**3

    def mmse(self, antennas: int, samples: int) -> int:
        n, k = antennas, samples
        if n < 1 or k < 1:
            raise DimensionError(f"N and K must be positive, got N={n} K={k}")
        return n * n * k + n * k + self.solve(n) + n * n

    def lr_tmmse(
        self,
        dims: Sequence[int],
        order: int,
        rank: int,
        iterations: int,
        samples: int,
    ) -> int:
        if len(dims) != order:
            raise DimensionError(f"{len(dims)} dims given for order {order}")
        if min(dims, default=0) < 1 or rank < 1 or samples < 1 or iterations < 0:
            raise DimensionError(
                f"Invalid arguments: dims={tuple(dims)} R={rank} I={iterations} K={samples}"
            )
        n, k = prod(dims), samples
        per_iteration = sum(
            rank * (order - 1) * n * k
            + n_d * n_d * k
            + n_d * k
            + self.solve(n_d)
            + (n_d * n_d if self.quadratic_solve_term else n_d)
            for n_d in dims
        )
        return iterations * per_iteration


@dataclass(frozen=True)
class CountComparison:
    phases: dict[str, int]
    formula: int

    @property
    def instrumented(self) -> int:
        return sum(self.phases.values())

    @property
    def ratio(self) -> float:
        """Instrumented over formula products; nan when no formula applies."""
        return self.instrumented / self.formula if self.formula else float("nan")


def count_mmse(antennas: int, samples: int) -> int:
    return ComplexityModel().mmse(antennas, samples)


def count_lr_tmmse(
    dims: Sequence[int],
    order: int,
    rank: int,
    iterations: int,
    samples: int,
    *,
    quadratic_solve_term: bool = False,
) -> int:
    return ComplexityModel(quadratic_solve_term).lr_tmmse(
        dims, order, rank, iterations, samples
    )


def instrumented_count(report: "EqualizerReport") -> CountComparison | None:
    if report.counter is None:
        return None
    return CountComparison(report.counter.as_dict(), report.formula_products)


def sinr(
    w: npt.ArrayLike,
    r_xx: npt.ArrayLike,
    r_ii: npt.ArrayLike,
    r_bb: npt.ArrayLike,
) -> float:
    """(w^H R_xx w) / (w^H (R_ii + R_bb) w), as a linear power ratio."""
    w = np.asarray(w, dtype=np.complex128)
    r_xx = np.asarray(r_xx, dtype=np.complex128)
    r_in = np.asarray(r_ii, dtype=np.complex128) + np.asarray(r_bb, dtype=np.complex128)
    if w.ndim != 1 or r_xx.shape != (w.size, w.size) or r_in.shape != r_xx.shape:
        raise DimensionError(
            f"Filter of shape {w.shape} does not match covariances {r_xx.shape}"
        )
    if not np.any(w):
        raise DimensionError("SINR is undefined for an all-zero filter")
    denominator = np.real(np.vdot(w, r_in @ w))
    if denominator <= 0:
        raise DimensionError("Interference-plus-noise power of the filter output is zero")
    return float(np.real(np.vdot(w, r_xx @ w)) / denominator)


def sample_mse(w: npt.ArrayLike, received: npt.ArrayLike, training: npt.ArrayLike) -> float:
    """(1/K) ||s - w^H X||^2 over the frame."""
    y = np.asarray(w, dtype=np.complex128).conj() @ np.asarray(received)
    return float(np.mean(np.abs(np.asarray(training) - y) ** 2))
