import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def dft_magnitude_oracle(x: np.ndarray) -> np.ndarray:
    """Direct O(N^2) one-sided DFT magnitude, independent of any FFT."""
    n = x.size
    k = np.arange(n // 2 + 1)
    angles = -2j * np.pi * np.outer(k, np.arange(n)) / n
    return np.abs(np.exp(angles) @ x.astype(complex))
