import numpy as np
import numpy.typing as npt
import scipy.linalg

from pytmmse.exceptions import DimensionError, SingularCovarianceError
from pytmmse.tensor import ComplexArray

# smallest accepted (pivot / largest pivot)^2 of the Cholesky factor
PIVOT_RTOL = 1e-13


def hermitian_solve(
    a: npt.ArrayLike, b: npt.ArrayLike, *, remedy: str = "add diagonal loading"
) -> ComplexArray:
    """Solve A x = b for Hermitian positive definite A via Cholesky."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.shape[0] != a.shape[0]:
        raise DimensionError(f"Cannot solve a {a.shape} system for {b.shape}")
    try:
        factor = scipy.linalg.cho_factor((a + a.conj().T) / 2, lower=True)
    except np.linalg.LinAlgError as error:
        raise SingularCovarianceError(
            f"Covariance of size {a.shape[0]} is not positive definite; {remedy}"
        ) from error

    pivots = np.abs(np.diag(factor[0]))
    if pivots.min() ** 2 < PIVOT_RTOL * pivots.max() ** 2:
        raise SingularCovarianceError(
            f"Covariance of size {a.shape[0]} is numerically singular"
            f" (pivot ratio {pivots.min() / pivots.max():.2e}); {remedy}"
        )
    return np.asarray(scipy.linalg.cho_solve(factor, b), dtype=np.complex128)
