from collections.abc import Sequence
from dataclasses import dataclass
from functools import reduce
from math import prod
from typing import Self

import numpy as np
import numpy.typing as npt

from pytmmse.exceptions import DimensionError
from pytmmse.helper import complex_normal

from .dense import ComplexArray, ComplexTensor, leading_vectors


def kron_factors(vectors: Sequence[npt.ArrayLike]) -> ComplexArray:
    """Kronecker product of ``vectors`` taken last-to-first.

    For (w_1, ..., w_D) this is w_D ⊗ ... ⊗ w_1, which puts w_1 on the
    fastest-varying position of the column-major index map.
    """
    arrays = [np.asarray(v, dtype=np.complex128) for v in reversed(vectors)]
    return reduce(np.kron, arrays, np.ones(1, dtype=np.complex128))


def khatri_rao(matrices: Sequence[npt.ArrayLike]) -> ComplexArray:
    """Column-wise Kronecker product of N_d x R matrices, taken last-to-first.

    Column r equals ``kron_factors`` of the column-r vectors, so the result is
    prod(N_d) x R with the first matrix varying fastest.
    """
    arrays = [np.asarray(m, dtype=np.complex128) for m in matrices]
    if not arrays or any(a.ndim != 2 for a in arrays):
        raise DimensionError("Khatri-Rao product needs one or more 2-D matrices")
    if len({a.shape[1] for a in arrays}) != 1:
        raise DimensionError(f"Column counts differ: {[a.shape[1] for a in arrays]}")
    product = arrays[0]
    for a in arrays[1:]:
        product = (a[:, None, :] * product[None, :, :]).reshape(-1, a.shape[1])
    return product


@dataclass(frozen=True)
class CpFilter:
    """Rank-R CP filter: one N_d x R factor matrix per mode.

    Column r of ``factors[d - 1]`` is the factor vector w_{d,r}.
    """

    factors: tuple[ComplexArray, ...]

    def __post_init__(self) -> None:
        factors = tuple(np.array(f, dtype=np.complex128) for f in self.factors)
        if not factors:
            raise DimensionError("CP filter needs at least one mode")
        if any(f.ndim != 2 or 0 in f.shape for f in factors):
            raise DimensionError("Factor matrices must be non-empty N_d x R arrays")
        if len({f.shape[1] for f in factors}) != 1:
            raise DimensionError(
                f"All modes must share one rank, got {[f.shape[1] for f in factors]}"
            )
        for f in factors:
            f.setflags(write=False)
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_vectors(cls, grid: Sequence[Sequence[npt.ArrayLike]]) -> Self:
        """Build from a D x R grid of factor vectors, ``grid[d][r]``."""
        try:
            return cls(
                tuple(
                    np.stack([np.asarray(v, dtype=np.complex128) for v in row], axis=1)
                    for row in grid
                )
            )
        except ValueError as error:
            raise DimensionError(f"Ragged factor row: {error}") from error

    @classmethod
    def canonical(cls, dims: Sequence[int], rank: int) -> Self:
        """Every factor equal to [1, 0, ..., 0]."""
        factors = []
        for n in dims:
            f = np.zeros((n, rank), dtype=np.complex128)
            f[0, :] = 1
            factors.append(f)
        return cls(tuple(factors))

    @classmethod
    def perturbed(
        cls,
        dims: Sequence[int],
        rank: int,
        rng: np.random.Generator,
        scale: float,
    ) -> Self:
        """Canonical factors plus i.i.d. complex perturbations of size ``scale``."""
        base = cls.canonical(dims, rank)
        return cls(
            tuple(
                f + scale * complex_normal(rng, f.shape) for f in base.factors
            )
        )

    @classmethod
    def random(cls, dims: Sequence[int], rank: int, rng: np.random.Generator) -> Self:
        return cls(
            tuple(complex_normal(rng, (n, rank), 1 / n) for n in dims)
        )

    @classmethod
    def matched(
        cls,
        reference: ComplexTensor,
        rank: int,
        rng: np.random.Generator | None = None,
        scale: float = 0.0,
    ) -> Self:
        """Factors from the leading mode-d subspaces of ``reference``.

        Column r of mode d is the r-th eigenvector of the mode-d Gram matrix.
        With ``rng`` every factor also gets a complex perturbation of size
        ``scale``, which separates columns repeated on short modes.
        """
        factors = [
            leading_vectors(reference, d, rank) for d in range(1, reference.order + 1)
        ]
        if rng is not None and scale:
            factors = [f + scale * complex_normal(rng, f.shape) for f in factors]
        return cls(tuple(factors))

    @property
    def rank(self) -> int:
        return int(self.factors[0].shape[1])

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(int(f.shape[0]) for f in self.factors)

    @property
    def size(self) -> int:
        return prod(self.dims)

    def factor(self, d: int, r: int) -> ComplexArray:
        """w_{d,r}, 1-based."""
        if not (1 <= d <= self.order and 1 <= r <= self.rank):
            raise DimensionError(f"No factor ({d}, {r}) in a {self.order}x{self.rank} filter")
        return self.factors[d - 1][:, r - 1]

    def block(self, d: int) -> ComplexArray:
        """Stacked w_d = [w_{d,1}; ...; w_{d,R}] of length R N_d."""
        return self.factors[d - 1].reshape(-1, order="F")

    def with_block(self, d: int, w_d: npt.ArrayLike) -> "CpFilter":
        n_d = self.dims[d - 1]
        block = np.asarray(w_d, dtype=np.complex128)
        if block.shape != (self.rank * n_d,):
            raise DimensionError(
                f"Block {d} must have length {self.rank * n_d}, got shape {block.shape}"
            )
        factors = list(self.factors)
        factors[d - 1] = block.reshape(n_d, self.rank, order="F")
        return CpFilter(tuple(factors))

    def rank_one_term(self, r: int) -> ComplexArray:
        return kron_factors([self.factor(d, r) for d in range(1, self.order + 1)])


def cp_element(f: CpFilter, index: Sequence[int]) -> complex:
    """w_{n_1..n_D} = sum_r prod_d [w_{d,r}]_{n_d} for a 1-based index."""
    if len(index) != f.order or any(
        not 1 <= n <= size for n, size in zip(index, f.dims)
    ):
        raise DimensionError(f"Index {tuple(index)} outside dims {f.dims}")
    rows = np.stack([factor[n - 1, :] for factor, n in zip(f.factors, index)])
    return complex(np.sum(np.prod(rows, axis=0)))


def vectorize_cp(f: CpFilter) -> ComplexArray:
    return khatri_rao(f.factors).sum(axis=1)
