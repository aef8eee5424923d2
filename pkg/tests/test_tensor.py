import itertools
from math import prod

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pytmmse.exceptions import DimensionError
from pytmmse.helper import complex_normal
from pytmmse.tensor import (
    ComplexTensor,
    CpFilter,
    contraction_products,
    cp_element,
    khatri_rao,
    kron_factors,
    leading_vectors,
    mode_contract,
    reshape_vector_to_tensor,
    unfold,
    vectorize_cp,
    vectorize_tensor,
)


def random_tensor(rng, dims):
    return ComplexTensor(dims, complex_normal(rng, prod(dims)))


def enumerate_unfold(t, d):
    """Place every element by the index map directly."""
    rest = [n for j, n in enumerate(t.dims, 1) if j != d]
    out = np.zeros((t.dims[d - 1], prod(rest)), dtype=np.complex128)
    for index in itertools.product(*(range(1, n + 1) for n in t.dims)):
        column, stride = 0, 1
        for j, i in enumerate(index, 1):
            if j != d:
                column += (i - 1) * stride
                stride *= t.dims[j - 1]
        out[index[d - 1] - 1, column] = t[index]
    return out


@pytest.mark.parametrize(
    ("dims", "index", "expected"),
    (
        ((2, 3, 4), (1, 1, 1), 1),
        ((2, 3, 4), (2, 1, 1), 2),
        ((2, 3, 4), (1, 2, 1), 3),
        ((2, 3, 4), (1, 1, 2), 7),
        ((2, 3, 4), (2, 3, 4), 24),
        ((5,), (4,), 4),
    ),
)
def test_flat_index(dims, index, expected):
    t = reshape_vector_to_tensor(np.arange(1, prod(dims) + 1), dims)
    assert t.flat_index(index) == expected
    assert t[index] == expected


@pytest.mark.parametrize("dims", ((3,), (3, 4), (3, 4, 5), (2, 1, 3), (2, 2, 2, 2)))
def test_unfold_matches_index_map(rng, dims):
    t = random_tensor(rng, dims)
    for d in range(1, len(dims) + 1):
        assert np.abs(unfold(t, d) - enumerate_unfold(t, d)).max() <= 1e-12


def test_unfold_returns_copy(rng):
    t = random_tensor(rng, (2, 3))
    unfolded = unfold(t, 1)
    unfolded[:] = 0
    assert np.any(t.data != 0)


@pytest.mark.parametrize("d", (0, 4))
def test_unfold_rejects_mode(rng, d):
    with pytest.raises(DimensionError):
        unfold(random_tensor(rng, (2, 3, 4)), d)


def test_reshape_rejects_length():
    with pytest.raises(DimensionError):
        reshape_vector_to_tensor(np.ones(7), (2, 4))


def test_vectorize_inverts_reshape(rng):
    v = complex_normal(rng, 24)
    assert np.array_equal(vectorize_tensor(reshape_vector_to_tensor(v, (2, 3, 4))), v)


@pytest.mark.parametrize("dims", ((3, 4, 5), (4, 4), (2, 3, 2, 2)))
def test_mode_contract_matches_enumeration(rng, dims):
    samples = 3
    t = random_tensor(rng, (*dims, samples))
    vectors = [complex_normal(rng, n) for n in dims]
    for d in range(1, len(dims) + 1):
        expected = np.zeros((dims[d - 1], samples), dtype=np.complex128)
        for index in itertools.product(*(range(n) for n in dims)):
            weight = 1 + 0j
            for j, i in enumerate(index):
                if j != d - 1:
                    weight *= np.conj(vectors[j][i])
            expected[index[d - 1]] += weight * t.array[index]
        assert np.abs(mode_contract(t, d, vectors) - expected).max() <= 1e-12


def test_mode_contract_ignores_own_vector(rng):
    t = random_tensor(rng, (2, 3, 5))
    vectors = [complex_normal(rng, 2), complex_normal(rng, 3)]
    assert np.array_equal(
        mode_contract(t, 1, [None, vectors[1]]), mode_contract(t, 1, vectors)
    )


def test_mode_contract_rejects_vector_length(rng):
    t = random_tensor(rng, (2, 3, 5))
    with pytest.raises(DimensionError):
        mode_contract(t, 1, [None, np.ones(4)])


@pytest.mark.parametrize(
    ("dims", "d", "samples", "expected"),
    (
        ((4, 4, 4), 1, 10, 800),
        ((4, 4, 4), 3, 10, 800),
        ((2, 3, 4), 2, 1, 30),
        ((7,), 1, 5, 0),
    ),
)
def test_contraction_products(dims, d, samples, expected):
    assert contraction_products(dims, d, samples) == expected


@settings(deadline=None, max_examples=50)
@given(
    dims=st.lists(st.integers(1, 4), min_size=1, max_size=4),
    rank=st.integers(1, 4),
    seed=st.integers(0, 2**32 - 1),
)
def test_vectorize_cp_agrees_with_elements(dims, rank, seed):
    rng = np.random.default_rng(seed)
    f = CpFilter(tuple(complex_normal(rng, (n, rank)) for n in dims))
    w = vectorize_cp(f)
    assert w.shape == (prod(dims),)
    for index in itertools.product(*(range(1, n + 1) for n in dims)):
        t = reshape_vector_to_tensor(w, dims)
        element = cp_element(f, index)
        assert abs(t[index] - element) <= 1e-12 * max(1.0, abs(element))


def test_kron_factors_puts_first_mode_fastest(rng):
    a, b = complex_normal(rng, 2), complex_normal(rng, 3)
    outer = np.multiply.outer(a, b)
    assert np.allclose(kron_factors([a, b]), outer.reshape(-1, order="F"))


def test_canonical_filter():
    f = CpFilter.canonical((2, 3), rank=3)
    w = vectorize_cp(f)
    assert w[0] == 3
    assert not np.any(w[1:])


def test_block_round_trip(rng):
    f = CpFilter.random((2, 3, 4), 2, rng)
    for d in (1, 2, 3):
        assert f.block(d).shape == (2 * f.dims[d - 1],)
        rebuilt = f.with_block(d, f.block(d))
        assert np.array_equal(vectorize_cp(rebuilt), vectorize_cp(f))
    assert np.array_equal(f.block(2)[:3], f.factor(2, 1))


def test_with_block_rejects_length(rng):
    f = CpFilter.random((2, 3), 2, rng)
    with pytest.raises(DimensionError):
        f.with_block(1, np.ones(5))


def test_ragged_factors_rejected():
    with pytest.raises(DimensionError):
        CpFilter((np.ones((2, 2)), np.ones((3, 1))))


def test_cp_element_rejects_index(rng):
    f = CpFilter.random((2, 3), 1, rng)
    with pytest.raises(DimensionError):
        cp_element(f, (3, 1))


def ordered_factorizations(n):
    if n == 1:
        return [()]
    found = []
    for head in range(2, n + 1):
        if n % head == 0:
            found.extend((head, *rest) for rest in ordered_factorizations(n // head))
    return found


def test_reshape_round_trip_over_every_factorization(rng):
    for n in range(1, 65):
        v = complex_normal(rng, n)
        for dims in ordered_factorizations(n) if n > 1 else [(1,)]:
            t = reshape_vector_to_tensor(v, dims)
            assert np.array_equal(vectorize_tensor(t), v)
            last = tuple(dims)
            assert t.flat_index(last) == n and t[last] == v[-1]


@pytest.mark.parametrize("dims", ((3, 4), (2, 3, 4), (2, 2, 3, 2)))
def test_mode_contract_is_bilinear(rng, dims):
    samples = 4
    t1, t2 = random_tensor(rng, (*dims, samples)), random_tensor(rng, (*dims, samples))
    vectors = [complex_normal(rng, n) for n in dims]
    a, b, c = 2 - 1j, 0.5j, 3 + 2j
    mixed = ComplexTensor(t1.dims, a * t1.data + b * t2.data)
    for d in range(1, len(dims) + 1):
        expected = a * mode_contract(t1, d, vectors) + b * mode_contract(t2, d, vectors)
        assert np.allclose(mode_contract(mixed, d, vectors), expected)

        j = d % len(dims)
        scaled = list(vectors)
        scaled[j] = c * vectors[j]
        assert np.allclose(
            mode_contract(t1, d, scaled), np.conj(c) * mode_contract(t1, d, vectors)
        )

        other = complex_normal(rng, dims[j])
        summed = list(vectors)
        summed[j] = vectors[j] + other
        swapped = list(vectors)
        swapped[j] = other
        assert np.allclose(
            mode_contract(t1, d, summed),
            mode_contract(t1, d, vectors) + mode_contract(t1, d, swapped),
        )


@pytest.mark.parametrize("dims", ((3, 4), (2, 3, 4), (2, 2, 3, 2)))
def test_mode_contract_is_unfolding_times_kron(rng, dims):
    samples = 3
    t = random_tensor(rng, (*dims, samples))
    vectors = [complex_normal(rng, n) for n in dims]
    for d in range(1, len(dims) + 1):
        others = kron_factors([v for j, v in enumerate(vectors, 1) if j != d])
        result = mode_contract(t, d, vectors)
        for k in range(samples):
            frame = ComplexTensor(dims, t.array[..., k].reshape(-1, order="F"))
            assert np.allclose(result[:, k], unfold(frame, d) @ others.conj())


def test_khatri_rao_columns_are_kron_factors(rng):
    matrices = [complex_normal(rng, (n, 3)) for n in (2, 4, 3)]
    product = khatri_rao(matrices)
    assert product.shape == (24, 3)
    for r in range(3):
        assert np.allclose(product[:, r], kron_factors([m[:, r] for m in matrices]))


def test_vectorize_cp_sums_rank_one_terms(rng):
    f = CpFilter.random((3, 2, 4), 3, rng)
    assert np.allclose(vectorize_cp(f), sum(f.rank_one_term(r) for r in (1, 2, 3)))


@pytest.mark.parametrize("matrices", ([], [np.ones((2, 2)), np.ones((3, 1))], [np.ones(3)]))
def test_khatri_rao_rejects(matrices):
    with pytest.raises(DimensionError):
        khatri_rao(matrices)


def test_leading_vectors_find_rank_one_factors(rng):
    a, b, c = complex_normal(rng, 3), complex_normal(rng, 4), complex_normal(rng, 2)
    t = reshape_vector_to_tensor(kron_factors([a, b, c]), (3, 4, 2))
    for d, factor in enumerate((a, b, c), 1):
        (top,) = leading_vectors(t, d, 1).T
        assert abs(np.vdot(top, factor)) == pytest.approx(np.linalg.norm(factor))


def test_leading_vectors_are_orthonormal_and_repeat(rng):
    t = random_tensor(rng, (3, 5))
    vectors = leading_vectors(t, 1, 3)
    assert np.allclose(vectors.conj().T @ vectors, np.eye(3))
    repeated = leading_vectors(t, 1, 5)
    assert np.array_equal(repeated[:, 3:], repeated[:, :2])
    with pytest.raises(DimensionError):
        leading_vectors(t, 1, 0)


def test_matched_filter_shape(rng):
    t = random_tensor(rng, (2, 3, 4))
    plain = CpFilter.matched(t, 3)
    assert plain.dims == (2, 3, 4) and plain.rank == 3
    assert np.array_equal(vectorize_cp(plain), vectorize_cp(CpFilter.matched(t, 3)))
    nudged = CpFilter.matched(t, 3, rng, 1e-3)
    assert 0 < np.abs(vectorize_cp(nudged) - vectorize_cp(plain)).max() < 1e-1
