"""Core spectral and statistical primitives.

Everything downstream (denoising, features, the synthetic benchmark) is
built on the small set of operations here: magnitude spectra, kurtosis,
spectral entropy, the kurtosis/spectral-entropy (KE) health index, and a
log-Mel spectrogram for visualization.

All operations are pure functions of immutable value types and are safe
to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadBandRange, EmptySpectrum, TooShort, ZeroVariance

#: Floor applied to |spectral entropy| before dividing, so a pure tone
#: (entropy -> 0) yields a large finite KE instead of a division fault.
ENTROPY_FLOOR = 1e-12

#: Additive floor inside the log of the Mel spectrogram.
MEL_LOG_FLOOR = 1e-10

#: Default sample rate of the target recordings (Hz).
DEFAULT_SAMPLE_RATE = 51200.0


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """A uniformly sampled real-valued signal.

    Attributes:
        samples: Amplitude values (dimensionless), finite, non-empty.
        sample_rate_hz: Sampling rate, strictly positive.
    """

    samples: np.ndarray
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        arr = _as_float_array(self.samples, "samples")
        if arr.size == 0:
            raise ValueError("samples must be non-empty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        if not (self.sample_rate_hz > 0):
            raise ValueError("sample_rate_hz must be positive")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz


@dataclass(frozen=True)
class Spectrum:
    """One-sided magnitude spectrum with uniform bin spacing."""

    amplitudes: np.ndarray
    bin_width_hz: float

    def __post_init__(self):
        arr = _as_float_array(self.amplitudes, "amplitudes")
        if arr.size == 0:
            raise ValueError("amplitudes must be non-empty")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("amplitudes must be finite and non-negative")
        if not (self.bin_width_hz > 0):
            raise ValueError("bin_width_hz must be positive")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "amplitudes", arr)
        object.__setattr__(self, "bin_width_hz", float(self.bin_width_hz))

    def __len__(self) -> int:
        return self.amplitudes.size

    @property
    def frequencies(self) -> np.ndarray:
        """Center frequency of each bin, starting at DC."""
        return np.arange(self.amplitudes.size) * self.bin_width_hz


@dataclass(frozen=True)
class MelSpectrogram:
    """Log-power Mel spectrogram: one row per frame, one column per band."""

    values: np.ndarray
    frame_hop_s: float
    band_centers_hz: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2:
            raise ValueError("values must be a 2-D (frames x bands) matrix")
        centers = _as_float_array(self.band_centers_hz, "band_centers_hz")
        if centers.size != vals.shape[1]:
            raise ValueError("band_centers_hz length must match the band count")
        if np.any(np.diff(centers) <= 0):
            raise ValueError("band_centers_hz must be strictly ascending")
        if not (self.frame_hop_s > 0):
            raise ValueError("frame_hop_s must be positive")
        vals = vals.copy()
        vals.flags.writeable = False
        centers = centers.copy()
        centers.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "band_centers_hz", centers)
        object.__setattr__(self, "frame_hop_s", float(self.frame_hop_s))


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------

def kurtosis(x: TimeSeries | np.ndarray) -> float:
    """Normalized fourth central moment of the sample distribution.

    Computed as sum((x - mean)^4) / (s^4 * (N - 1)) where s is the sample
    standard deviation (N - 1 divisor).  Close to 3 for Gaussian data and
    elevated for impulsive signals.  Invariant under scaling and shifting.

    Raises:
        TooShort: fewer than 4 samples.
        ZeroVariance: all samples equal.
    """
    arr = x.samples if isinstance(x, TimeSeries) else np.asarray(x, dtype=np.float64)
    n = arr.size
    if n < 4:
        raise TooShort(f"kurtosis needs at least 4 samples, got {n}")
    centered = arr - arr.mean()
    ssq = float(np.dot(centered, centered))
    if ssq == 0.0:
        raise ZeroVariance("kurtosis is undefined for a constant signal")
    sample_var = ssq / (n - 1)
    fourth = float(np.sum(centered**4))
    return fourth / (sample_var**2 * (n - 1))


def magnitude_spectrum(x: TimeSeries) -> Spectrum:
    """One-sided magnitude of the DFT, DC bin included.

    Uses a rectangular window so Parseval's identity holds exactly.
    Returns floor(N/2) + 1 bins with spacing sample_rate / N.

    Raises:
        TooShort: fewer than 2 samples.
    """
    n = len(x)
    if n < 2:
        raise TooShort(f"spectrum needs at least 2 samples, got {n}")
    amps = np.abs(np.fft.rfft(x.samples))
    return Spectrum(amplitudes=amps, bin_width_hz=x.sample_rate_hz / n)


def spectral_entropy(s: Spectrum) -> float:
    """Magnitude of the Shannon entropy of the normalized spectral power.

    Bins are weighted by p_k = s_k^2 / sum(s_j^2); zero-power bins
    contribute nothing (p ln p -> 0).  The result lies in [0, ln K]: zero
    when a single bin carries all energy, ln K for a uniform spectrum.

    Raises:
        EmptySpectrum: all amplitudes are zero.
    """
    power = s.amplitudes.astype(np.float64) ** 2
    total = power.sum()
    if total == 0.0:
        raise EmptySpectrum("spectral entropy is undefined for an all-zero spectrum")
    p = power / total
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def ke_index(x: TimeSeries) -> float:
    """Kurtosis / spectral-entropy health index.

    Defined as |kurtosis| / max(|entropy|, ENTROPY_FLOOR), where the
    entropy is taken over the magnitude spectrum of ``x``.  Large for
    impulsive signals whose spectra are dominated by few components;
    invariant under amplitude scaling.

    Raises:
        TooShort, ZeroVariance: propagated from :func:`kurtosis`.
    """
    k = kurtosis(x)
    e = spectral_entropy(magnitude_spectrum(x))
    return abs(k) / max(abs(e), ENTROPY_FLOOR)


# ---------------------------------------------------------------------------
# Mel spectrogram (visualization)
# ---------------------------------------------------------------------------

def hz_to_mel(f):
    """Perceptual Mel scale: 2595 * log10(1 + f / 700)."""
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def _mel_filterbank(n_fft_bins: int, bin_width_hz: float, n_bands: int,
                    fmin_hz: float, fmax_hz: float) -> tuple[np.ndarray, np.ndarray]:
    """Triangular Mel filters and their center frequencies."""
    edges_hz = mel_to_hz(np.linspace(hz_to_mel(fmin_hz), hz_to_mel(fmax_hz), n_bands + 2))
    freqs = np.arange(n_fft_bins) * bin_width_hz
    weights = np.zeros((n_bands, n_fft_bins))
    for b in range(n_bands):
        lo, center, hi = edges_hz[b], edges_hz[b + 1], edges_hz[b + 2]
        rising = (freqs - lo) / max(center - lo, 1e-30)
        falling = (hi - freqs) / max(hi - center, 1e-30)
        weights[b] = np.clip(np.minimum(rising, falling), 0.0, None)
    return weights, edges_hz[1:-1]


def log_mel_spectrogram(x: TimeSeries, frame_len_s: float = 0.04,
                        hop_s: float = 0.02, n_bands: int = 64,
                        fmin_hz: float = 0.0,
                        fmax_hz: float | None = None) -> MelSpectrogram:
    """Framewise log-power Mel spectrogram with a Hann window.

    Frames start at 0, hop, 2*hop, ...; a trailing partial frame is
    dropped, so the frame count is floor((N - frame) / hop) + 1.

    Args:
        x: Input signal.
        frame_len_s: Frame length in seconds (frame must hold >= 2 samples).
        hop_s: Hop between frame starts in seconds.
        n_bands: Number of triangular Mel bands.
        fmin_hz: Lower edge of the Mel range.
        fmax_hz: Upper edge; defaults to Nyquist.

    Raises:
        BadBandRange: fmin/fmax out of order or above Nyquist.
        TooShort: signal shorter than one frame.
    """
    fs = x.sample_rate_hz
    nyquist = fs / 2.0
    if fmax_hz is None:
        fmax_hz = nyquist
    if not (0 <= fmin_hz < fmax_hz <= nyquist):
        raise BadBandRange(
            f"need 0 <= fmin < fmax <= Nyquist, got fmin={fmin_hz}, "
            f"fmax={fmax_hz}, Nyquist={nyquist}")
    frame = int(round(frame_len_s * fs))
    hop = max(int(round(hop_s * fs)), 1)
    if frame < 2:
        raise BadBandRange(f"frame of {frame} samples is too short")
    n = len(x)
    if n < frame:
        raise TooShort(f"signal of {n} samples is shorter than one frame ({frame})")

    n_frames = (n - frame) // hop + 1
    starts = np.arange(n_frames) * hop
    window = np.hanning(frame)
    frames = x.samples[starts[:, None] + np.arange(frame)] * window
    power = np.abs(np.fft.rfft(frames, axis=1)) ** 2
    weights, centers = _mel_filterbank(power.shape[1], fs / frame, n_bands,
                                       fmin_hz, fmax_hz)
    banded = power @ weights.T
    return MelSpectrogram(values=np.log(banded + MEL_LOG_FLOOR),
                          frame_hop_s=hop / fs, band_centers_hz=centers)


__all__ = [
    "TimeSeries", "Spectrum", "MelSpectrogram",
    "kurtosis", "magnitude_spectrum", "spectral_entropy", "ke_index",
    "log_mel_spectrogram", "hz_to_mel", "mel_to_hz",
    "ENTROPY_FLOOR", "MEL_LOG_FLOOR", "DEFAULT_SAMPLE_RATE",
]
