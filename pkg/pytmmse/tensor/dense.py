"""Dense complex tensors stored in the column-major index map.

Element (n_1, ..., n_D) of a tensor with dims (N_1, ..., N_D) sits at flat
position n = n_1 + (n_2 - 1) N_1 + ... + (n_D - 1) N_1 ... N_{D-1}. Every
public index and mode number in this package is 1-based; numpy axes are
the same numbers shifted down by one.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from math import prod
from typing import Any

import numpy as np
import numpy.typing as npt
import scipy.linalg

from pytmmse.exceptions import DimensionError

ComplexArray = npt.NDArray[np.complex128]


def _check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(n) for n in dims)
    if not dims or any(n < 1 for n in dims):
        raise DimensionError(f"Dimensions must be positive integers, got {dims}")
    return dims


def _check_mode(d: int, order: int) -> None:
    if not 1 <= d <= order:
        raise DimensionError(f"Mode must be within 1..{order} But was: {d}")


@dataclass(frozen=True)
class ComplexTensor:
    dims: tuple[int, ...]
    data: ComplexArray = field(repr=False)

    def __post_init__(self) -> None:
        dims = _check_dims(self.dims)
        data = np.array(self.data, dtype=np.complex128).reshape(-1)
        if data.size != prod(dims):
            raise DimensionError(
                f"Data length {data.size} does not match product of dims {dims}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data)

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def array(self) -> ComplexArray:
        """D-way read-only view in the package index map."""
        return self.data.reshape(self.dims, order="F")

    def __getitem__(self, index: Sequence[int]) -> complex:
        if len(index) != self.order or any(
            not 1 <= n <= size for n, size in zip(index, self.dims)
        ):
            raise DimensionError(f"Index {tuple(index)} outside dims {self.dims}")
        return complex(self.array[tuple(n - 1 for n in index)])

    def flat_index(self, index: Sequence[int]) -> int:
        """1-based flat position of a 1-based element index."""
        return 1 + int(
            np.ravel_multi_index(
                tuple(n - 1 for n in index), self.dims, order="F"
            )
        )


def reshape_vector_to_tensor(v: npt.ArrayLike, dims: Sequence[int]) -> ComplexTensor:
    vector = np.asarray(v, dtype=np.complex128)
    if vector.ndim != 1:
        raise DimensionError(f"Expected a vector, got shape {vector.shape}")
    dims = _check_dims(dims)
    if vector.size != prod(dims):
        raise DimensionError(
            f"Vector of length {vector.size} cannot be reshaped to {dims}"
        )
    return ComplexTensor(dims, vector)


def vectorize_tensor(t: ComplexTensor) -> ComplexArray:
    return t.data.copy()


def unfold(t: ComplexTensor, d: int) -> ComplexArray:
    """Mode-d unfolding, N_d rows by prod(N_q, q != d) columns.

    The remaining modes enumerate columns with the lowest mode varying
    fastest. The result is a fresh array.
    """
    _check_mode(d, t.order)
    moved = np.moveaxis(t.array, d - 1, 0)
    return np.array(moved.reshape(t.dims[d - 1], -1, order="F"), copy=True)


def mode_contract(
    t: ComplexTensor, d: int, vectors: Sequence[npt.ArrayLike | None]
) -> ComplexArray:
    """Contract every mode but ``d`` against conjugated vectors.

    ``t`` carries a trailing sample axis: dims (N_1, ..., N_D, K). ``vectors``
    holds one entry per mode 1..D; entry ``d`` is ignored. Returns the
    N_d x K matrix whose (n_d, k) entry is the sum over all other indices of
    t[n_1, ..., n_D, k] times the product of conj(vectors[j][n_j]).
    """
    order = t.order - 1
    _check_mode(d, order)
    if len(vectors) != order:
        raise DimensionError(f"Expected {order} contraction vectors, got {len(vectors)}")

    result: Any = t.array
    # highest mode first keeps the lower axis numbers in place
    for j in range(order, 0, -1):
        if j == d:
            continue
        w = np.asarray(vectors[j - 1], dtype=np.complex128)
        if w.shape != (t.dims[j - 1],):
            raise DimensionError(
                f"Vector for mode {j} must have length {t.dims[j - 1]},"
                f" got shape {w.shape}"
            )
        result = np.tensordot(result, w.conj(), axes=(j - 1, 0))
    return np.asarray(result, dtype=np.complex128)


def contraction_products(dims: Sequence[int], d: int, samples: int) -> int:
    """Complex products spent by one ``mode_contract`` call on dims x samples."""
    _check_mode(d, len(dims))
    size = prod(dims) * samples
    products = 0
    for j in range(len(dims), 0, -1):
        if j == d:
            continue
        products += size
        size //= dims[j - 1]
    return products


def leading_vectors(t: ComplexTensor, d: int, count: int) -> ComplexArray:
    """Top ``count`` eigenvectors of the mode-d Gram matrix, strongest first.

    Columns are the left singular vectors of ``unfold(t, d)``. When ``count``
    exceeds N_d the available vectors repeat cyclically.
    """
    if count < 1:
        raise DimensionError(f"Need at least one vector, got {count}")
    x_d = unfold(t, d)
    _, vectors = scipy.linalg.eigh(x_d @ x_d.conj().T)
    strongest = vectors[:, ::-1]
    columns = [index % strongest.shape[1] for index in range(count)]
    return np.array(strongest[:, columns], dtype=np.complex128)
