import numpy as np
import numpy.typing as npt


def str_to_float(string: str | float | int) -> float | int:
    try:
        return int(string)
    except ValueError:
        return float(str(string).replace(",", "."))


def to_db(ratio: float) -> float:
    """Power ratio to decibels."""
    return float(10 * np.log10(ratio))


def from_db(value_db: float) -> float:
    """Decibels to power ratio."""
    return float(10 ** (value_db / 10))


def complex_normal(
    rng: np.random.Generator, shape: int | tuple[int, ...], variance: float = 1.0
) -> npt.NDArray[np.complex128]:
    """Circularly-symmetric complex Gaussian samples of the given total variance."""
    scale = np.sqrt(variance / 2)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def prime_factors(number: int) -> list[int]:
    """Prime factors of ``number`` with multiplicity, largest first."""
    factors = []
    candidate = 2
    while candidate * candidate <= number:
        while number % candidate == 0:
            factors.append(candidate)
            number //= candidate
        candidate += 1
    if number > 1:
        factors.append(number)
    return sorted(factors, reverse=True)
