import math

import numpy as np
import pytest

from aural.errors import InconsistentDecomposition, TooShallow
from aural.spectral import TimeSeries
from aural.wavelets import (WaveletDecomposition, dwt, idwt, list_bank,
                            load_filter_bank)


def roundtrip_error(x: np.ndarray, name: str, level: int) -> float:
    fb = load_filter_bank(name)
    ts = TimeSeries(x, 1.0)
    rec = idwt(dwt(ts, fb, level), fb, 1.0)
    return float(np.max(np.abs(rec.samples - x)) / np.max(np.abs(x)))


def test_haar_constant_hand_computed():
    # hand evaluation of one Haar analysis step on [1, 1, 1, 1]
    fb = load_filter_bank("db1")
    d = dwt(TimeSeries(np.ones(4), 1.0), fb, 1)
    assert d.approx == pytest.approx([math.sqrt(2)] * 2, abs=1e-12)
    assert d.details[0] == pytest.approx([0.0, 0.0], abs=1e-12)
    assert d.original_length == 4
    assert d.levels == 1


def test_constant_annihilated_by_vanishing_moment():
    for name in ("db1", "db4", "sym5", "coif2", "bior2.2"):
        fb = load_filter_bank(name)
        d = dwt(TimeSeries(np.full(256, 3.0), 1.0), fb, 3)
        for det in d.details:
            assert np.max(np.abs(det)) < 1e-8 * 3.0, name


def test_zeroed_decomposition_reconstructs_zero():
    fb = load_filter_bank("db3")
    d = dwt(TimeSeries(np.random.default_rng(0).standard_normal(128), 1.0),
            fb, 2)
    zeroed = WaveletDecomposition(
        approx=np.zeros_like(d.approx),
        details=tuple(np.zeros_like(v) for v in d.details),
        original_length=d.original_length)
    rec = idwt(zeroed, fb, 1.0)
    assert len(rec) == 128
    assert np.max(np.abs(rec.samples)) == 0.0


def test_linearity(rng):
    fb = load_filter_bank("sym6")
    x1 = rng.standard_normal(200)
    x2 = rng.standard_normal(200)
    d1 = dwt(TimeSeries(x1, 1.0), fb, 3)
    d2 = dwt(TimeSeries(x2, 1.0), fb, 3)
    summed = WaveletDecomposition(
        approx=d1.approx + d2.approx,
        details=tuple(a + b for a, b in zip(d1.details, d2.details)),
        original_length=200)
    lhs = idwt(summed, fb, 1.0).samples
    rhs = idwt(d1, fb, 1.0).samples + idwt(d2, fb, 1.0).samples
    scale = np.max(np.abs(rhs))
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * scale


def test_too_shallow():
    fb = load_filter_bank("db1")
    with pytest.raises(TooShallow):
        dwt(TimeSeries(np.ones(4), 1.0), fb, 3)


def test_inconsistent_decomposition_rejected(rng):
    fb = load_filter_bank("db2")
    d = dwt(TimeSeries(rng.standard_normal(64), 1.0), fb, 2)
    broken = WaveletDecomposition(
        approx=d.approx[:-1], details=d.details, original_length=64)
    with pytest.raises(InconsistentDecomposition):
        idwt(broken, fb, 1.0)


@pytest.mark.parametrize("name", ["db1", "db7", "db38", "sym13", "coif5",
                                  "bior3.1", "rbio2.8", "bior6.8"])
@pytest.mark.parametrize("n", [64, 999, 1000])
@pytest.mark.parametrize("level", [1, 3, 5])
def test_perfect_reconstruction_spot(name, n, level, rng):
    assert roundtrip_error(rng.standard_normal(n), name, level) < 1e-6


def test_perfect_reconstruction_full_bank_51200(rng):
    # every registry wavelet on a long pseudo-random signal
    x = rng.standard_normal(51200)
    for name in list_bank():
        assert roundtrip_error(x, name, 5) < 1e-6, name


def test_lengths_follow_halving_rule(rng):
    fb = load_filter_bank("db5")   # filter length 10
    d = dwt(TimeSeries(rng.standard_normal(1000), 1.0), fb, 3)
    n = 1000
    for det in d.details:
        n = (n + fb.filter_length - 1) // 2
        assert det.size == n
    assert d.approx.size == n
