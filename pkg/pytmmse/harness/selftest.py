"""Fast oracle checks behind the ``selftest`` subcommand."""

import itertools
import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from pytmmse.equalizers import InitStrategy, LrTmmseConfig, lr_tmmse_train, mmse_sample
from pytmmse.helper import complex_normal
from pytmmse.metrics import count_lr_tmmse, count_mmse
from pytmmse.tensor import (
    ComplexTensor,
    CpFilter,
    cp_element,
    mode_contract,
    unfold,
    vectorize_cp,
)

_LOGGER = logging.getLogger(__name__)

TOLERANCE = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_tensor(rng: np.random.Generator, dims: tuple[int, ...]) -> ComplexTensor:
    return ComplexTensor(dims, complex_normal(rng, int(np.prod(dims))))


def _brute_unfold(t: ComplexTensor, d: int) -> np.ndarray:
    rest = [n for j, n in enumerate(t.dims, 1) if j != d]
    out = np.zeros((t.dims[d - 1], int(np.prod(rest))), dtype=np.complex128)
    for index in itertools.product(*(range(1, n + 1) for n in t.dims)):
        others = [i - 1 for j, i in enumerate(index, 1) if j != d]
        column = int(np.ravel_multi_index(others, rest, order="F")) if rest else 0
        out[index[d - 1] - 1, column] = t[index]
    return out


def check_unfold(rng: np.random.Generator) -> float:
    t = _random_tensor(rng, (3, 4, 5))
    return max(
        float(np.max(np.abs(unfold(t, d) - _brute_unfold(t, d))))
        for d in range(1, t.order + 1)
    )


def check_contraction(rng: np.random.Generator) -> float:
    dims, samples = (3, 4, 5), 6
    t = _random_tensor(rng, (*dims, samples))
    vectors = [complex_normal(rng, n) for n in dims]
    error = 0.0
    for d in range(1, len(dims) + 1):
        expected = np.zeros((dims[d - 1], samples), dtype=np.complex128)
        for index in itertools.product(*(range(n) for n in dims)):
            weight = np.prod(
                [vectors[j][i].conjugate() for j, i in enumerate(index) if j != d - 1]
            )
            expected[index[d - 1]] += weight * t.array[index]
        error = max(error, float(np.max(np.abs(mode_contract(t, d, vectors) - expected))))
    return error


def check_cp_consistency(rng: np.random.Generator) -> float:
    f = CpFilter(tuple(complex_normal(rng, (n, 3)) for n in (2, 3, 4)))
    w = vectorize_cp(f)
    error = 0.0
    for index in itertools.product(*(range(1, n + 1) for n in f.dims)):
        flat = int(np.ravel_multi_index([i - 1 for i in index], f.dims, order="F"))
        error = max(error, abs(w[flat] - cp_element(f, index)) / max(abs(w[flat]), 1.0))
    return error


def check_reduction(rng: np.random.Generator) -> float:
    x = complex_normal(rng, (16, 64))
    s = complex_normal(rng, 64)
    config = LrTmmseConfig(
        dims=(16,), rank=1, max_iters=1, loading=0.0, init=InitStrategy.CANONICAL
    )
    w_tensor = lr_tmmse_train(x, s, config).w_vec
    w_mmse = mmse_sample(x, s).w
    return float(np.linalg.norm(w_tensor - w_mmse) / np.linalg.norm(w_mmse))


def check_formula_constants(_: np.random.Generator) -> float:
    return float(
        abs(count_mmse(512, 600) - 292_073_472)
        + abs(count_lr_tmmse((8, 8, 8), 3, 3, 2, 600) - 11_321_520)
    )


CHECKS: dict[str, tuple[Callable[[np.random.Generator], float], float]] = {
    "unfold": (check_unfold, TOLERANCE),
    "mode-contract": (check_contraction, 1e-10),
    "cp-consistency": (check_cp_consistency, TOLERANCE),
    "single-mode-reduction": (check_reduction, 1e-9),
    "formula-constants": (check_formula_constants, 0.0),
}


def run_selftest(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    for name, (check, tolerance) in CHECKS.items():
        error = check(rng)
        passed = error <= tolerance
        _LOGGER.log(
            logging.INFO if passed else logging.ERROR,
            "%s: error %.3e (tolerance %.0e)",
            name,
            error,
            tolerance,
        )
        results.append(CheckResult(name, passed, f"error {error:.3e}"))
    return results
