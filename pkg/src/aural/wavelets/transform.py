"""Mallat pyramid: multi-level DWT and inverse with symmetric padding.

Boundary handling uses half-sample symmetric extension (the edge sample is
repeated) with extension length F - 1 per side, so every level produces
(n + F - 1) // 2 coefficients.  The decomposition records the original
length, which makes reconstruction trim exact at every level.

The per-level kernels operate on 2-D batches (one signal per row); the
public API wraps single signals as one-row batches, so batched sweeps and
single calls share one code path and agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import InconsistentDecomposition, TooShallow
from ..spectral import TimeSeries
from .bank import FilterBank


class PaddingMode(str, Enum):
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class WaveletDecomposition:
    """Approximation at the deepest level plus per-level details.

    ``details[0]`` is the finest level (level 1); ``details[-1]`` the
    coarsest.  ``original_length`` lets the inverse transform trim each
    synthesis step back to the exact input length.
    """

    approx: np.ndarray
    details: tuple[np.ndarray, ...]
    original_length: int
    padding_mode: PaddingMode = PaddingMode.SYMMETRIC

    def __post_init__(self):
        if len(self.details) < 1:
            raise ValueError("decomposition needs at least one detail level")
        object.__setattr__(self, "approx", np.asarray(self.approx, dtype=np.float64))
        object.__setattr__(
            self, "details",
            tuple(np.asarray(d, dtype=np.float64) for d in self.details))

    @property
    def levels(self) -> int:
        return len(self.details)


def coefficient_length(n: int, filter_len: int) -> int:
    """Coefficient count one level below a signal of length ``n``."""
    return (n + filter_len - 1) // 2


def level_lengths(n: int, filter_len: int, levels: int) -> list[int]:
    """Lengths [n, n_1, ..., n_levels] of the pyramid, top down."""
    out = [n]
    for _ in range(levels):
        out.append(coefficient_length(out[-1], filter_len))
    return out


def _sym_ext_indices(n: int, pad: int) -> np.ndarray:
    """Gather indices realizing half-sample symmetric extension.

    Positions -pad .. n-1+pad are folded onto 0..n-1 by the period-2n
    tent map, which also covers pads longer than the signal.
    """
    t = np.arange(-pad, n + pad)
    m = np.mod(t, 2 * n)
    return np.where(m < n, m, 2 * n - 1 - m)


def analysis_step(x: np.ndarray, rec_lo: np.ndarray,
                  rec_hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One filter-and-downsample step on a batch of rows.

    Correlates the symmetric extension with the reconstruction filters
    (equivalently: convolves with the decomposition filters) and keeps
    every second output, starting one sample into the extension.  The
    convolution runs in polyphase form so every slice is contiguous:
    output[k] = sum_m lo[2m] odd[k+m] + sum_m lo[2m+1] even[k+m+1].
    """
    batch, n = x.shape
    flen = rec_lo.size
    ext = x[:, _sym_ext_indices(n, flen - 1)]
    even = np.ascontiguousarray(ext[:, 0::2])
    odd = np.ascontiguousarray(ext[:, 1::2])
    out_len = coefficient_length(n, flen)
    approx = np.zeros((batch, out_len))
    detail = np.zeros((batch, out_len))
    for m in range(flen // 2):
        seg = odd[:, m : m + out_len]
        approx += rec_lo[2 * m] * seg
        detail += rec_hi[2 * m] * seg
        seg = even[:, m + 1 : m + 1 + out_len]
        approx += rec_lo[2 * m + 1] * seg
        detail += rec_hi[2 * m + 1] * seg
    return approx, detail


def synthesis_step(approx: np.ndarray, detail: np.ndarray, rec_lo: np.ndarray,
                   rec_hi: np.ndarray, child_length: int) -> np.ndarray:
    """Upsample-filter-sum inverse of :func:`analysis_step`.

    Polyphase accumulation: the upsampled-convolution output at position
    u = 2k + j receives rec[j] * coeff[k], so even and odd phases are
    accumulated in contiguous buffers and interleaved at the end.
    """
    batch, m = approx.shape
    flen = rec_lo.size
    half = flen // 2
    acc_even = np.zeros((batch, m + half))
    acc_odd = np.zeros((batch, m + half))
    for j in range(half):
        acc_even[:, j : j + m] += rec_lo[2 * j] * approx + \
            rec_hi[2 * j] * detail
        acc_odd[:, j : j + m] += rec_lo[2 * j + 1] * approx + \
            rec_hi[2 * j + 1] * detail
    acc = np.empty((batch, 2 * (m + half)))
    acc[:, 0::2] = acc_even
    acc[:, 1::2] = acc_odd
    start = flen - 2
    return acc[:, start : start + child_length]


def dwt_batch(x: np.ndarray, fb: FilterBank,
              level: int) -> tuple[np.ndarray, list[np.ndarray]]:
    """Depth-``level`` pyramid on a (batch, n) array.

    Returns the deepest approximation and the detail arrays ordered
    finest first.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    n = x.shape[1]
    if n < 2 ** level:
        raise TooShallow(
            f"signal of {n} samples cannot support a depth-{level} decomposition")
    # analysis = correlation with the *dual* filters; the bank stores the
    # decomposition filters in convolution order, so reverse once here.
    f_lo = fb.dec_lo[::-1]
    f_hi = fb.dec_hi[::-1]
    details: list[np.ndarray] = []
    cur = x
    for _ in range(level):
        cur, det = analysis_step(cur, f_lo, f_hi)
        details.append(det)
    return cur, details


def idwt_batch(approx: np.ndarray, details: list[np.ndarray], fb: FilterBank,
               original_length: int) -> np.ndarray:
    """Inverse of :func:`dwt_batch`; output has ``original_length`` columns."""
    flen = fb.rec_lo.size
    lengths = level_lengths(original_length, flen, len(details))
    cur = approx
    for lev in range(len(details), 0, -1):
        det = details[lev - 1]
        expected = lengths[lev]
        if cur.shape != det.shape or cur.shape[1] != expected:
            raise InconsistentDecomposition(
                f"level {lev}: approx {cur.shape}, detail {det.shape}, "
                f"expected width {expected}")
        cur = synthesis_step(cur, det, fb.rec_lo, fb.rec_hi, lengths[lev - 1])
    return cur


def dwt(x: TimeSeries, fb: FilterBank, level: int) -> WaveletDecomposition:
    """Discrete wavelet transform of a signal down to ``level``.

    Raises:
        TooShallow: signal shorter than 2**level samples.
    """
    approx, details = dwt_batch(x.samples[None, :], fb, level)
    return WaveletDecomposition(
        approx=approx[0], details=tuple(d[0] for d in details),
        original_length=len(x))


def idwt(d: WaveletDecomposition, fb: FilterBank,
         sample_rate_hz: float) -> TimeSeries:
    """Reconstruct the signal a decomposition came from.

    Raises:
        InconsistentDecomposition: coefficient lengths do not match the
            filter bank and recorded original length.
    """
    rec = idwt_batch(d.approx[None, :], [det[None, :] for det in d.details],
                     fb, d.original_length)
    return TimeSeries(samples=rec[0], sample_rate_hz=sample_rate_hz)
