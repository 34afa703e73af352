"""Statistical-spectral feature extraction for bearing acoustics.

Fourteen features per analysis window: ten time-domain statistics (mean,
variance, RMS, peak, skewness, kurtosis, crest/shape/impulse/clearance
factors), two bearing-defect band peaks at harmonics of the outer/inner
race ball-pass frequencies, and the mean and variance of the magnitude
spectrum.  Plus the z-score normalization applied before classification
and the overlapped windowing that turns recordings into analysis windows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.signal import hilbert

from .errors import (BadGeometry, BandOutOfRange, ConstantFeature, TooShort,
                     ZeroVariance)
from .spectral import Spectrum, TimeSeries

#: Health condition labels, fixed order (confusion-matrix axes, one-hot).
CLASSES = ("normal", "OR-0.3", "OR-1.0", "IR-0.3", "IR-1.0")

FEATURE_NAMES = tuple(f"f{i}" for i in range(1, 15))
N_FEATURES = 14

#: Fractional half-width of each fault-frequency harmonic band.
DEFAULT_HALF_WIDTH_FRAC = 0.02

#: Harmonics 1..k of the fault frequency scanned by the band peak.
DEFAULT_MAX_HARMONIC = 5

#: Minimum band half-width, in spectrum bins.
MIN_BAND_BINS = 2

DEFAULT_WINDOW_S = 1.0
DEFAULT_OVERLAP_FRAC = 0.10


@dataclass(frozen=True)
class BearingGeometry:
    """Rolling-element bearing geometry for fault-frequency kinematics."""

    n_balls: int
    ball_diameter_mm: float
    pitch_diameter_mm: float
    contact_angle_rad: float = 0.0

    def __post_init__(self):
        if self.n_balls < 1:
            raise BadGeometry("n_balls must be a positive integer")
        if not (0 < self.ball_diameter_mm < self.pitch_diameter_mm):
            raise BadGeometry("need 0 < ball diameter < pitch diameter")
        if not (0 <= self.contact_angle_rad < np.pi / 2):
            raise BadGeometry("contact angle must lie in [0, pi/2)")


#: Deep-groove 6205-class geometry (9 balls, 7.94 mm on a 39.04 mm pitch).
DEFAULT_GEOMETRY = BearingGeometry(
    n_balls=9, ball_diameter_mm=7.94, pitch_diameter_mm=39.04,
    contact_angle_rad=0.0)


@dataclass(frozen=True)
class FaultFrequencies:
    """Ball-pass frequencies for the outer and inner race, plus shaft rate."""

    bpfo_hz: float
    bpfi_hz: float
    shaft_hz: float

    def __post_init__(self):
        if not (0 < self.bpfo_hz < self.bpfi_hz):
            raise BadGeometry("need 0 < BPFO < BPFI")
        if self.shaft_hz <= 0:
            raise BadGeometry("shaft_hz must be positive")


@dataclass(frozen=True)
class FeatureVector:
    """The 14 features of one window, with optional class label."""

    f: np.ndarray
    label: str | None = None
    window_index: int = 0

    def __post_init__(self):
        arr = np.asarray(self.f, dtype=np.float64)
        if arr.shape != (N_FEATURES,):
            raise ValueError(f"expected {N_FEATURES} features, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("features must be finite")
        if self.label is not None and self.label not in CLASSES:
            raise ValueError(f"unknown label {self.label!r}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "f", arr)


@dataclass(frozen=True)
class NormalizationStats:
    """Per-feature mean and standard deviation frozen at training time."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        std = np.asarray(self.std, dtype=np.float64)
        if mean.shape != std.shape or mean.ndim != 1:
            raise ValueError("mean and std must be 1-D arrays of equal length")
        if np.any(std <= 0):
            raise ValueError("std entries must be positive")
        mean = mean.copy()
        std = std.copy()
        mean.flags.writeable = False
        std.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", std)


# ---------------------------------------------------------------------------
# kinematics
# ---------------------------------------------------------------------------

def fault_frequencies(g: BearingGeometry, shaft_hz: float) -> FaultFrequencies:
    """BPFO/BPFI from geometry and shaft rate.

    BPFO = (n/2) f_r (1 - (d/D) cos phi); BPFI with a plus sign.

    Raises:
        BadGeometry: non-positive shaft rate (geometry is validated by
            its own type).
    """
    if shaft_hz <= 0:
        raise BadGeometry("shaft_hz must be positive")
    ratio = (g.ball_diameter_mm / g.pitch_diameter_mm) * \
        np.cos(g.contact_angle_rad)
    half = g.n_balls / 2.0 * shaft_hz
    return FaultFrequencies(bpfo_hz=half * (1.0 - ratio),
                            bpfi_hz=half * (1.0 + ratio),
                            shaft_hz=shaft_hz)


# ---------------------------------------------------------------------------
# band peak
# ---------------------------------------------------------------------------

def _harmonic_bands(center_hz: float, max_harmonic: int,
                    half_width_frac: float,
                    bin_width_hz: float) -> list[tuple[float, float, float]]:
    """(low, center, high) of each harmonic band, with a 2-bin width floor."""
    bands = []
    for k in range(1, max_harmonic + 1):
        f = k * center_hz
        w = max(half_width_frac * f, MIN_BAND_BINS * bin_width_hz)
        bands.append((f - w, f, f + w))
    return bands


def band_peak(s: Spectrum, center_hz: float,
              max_harmonic: int = DEFAULT_MAX_HARMONIC,
              half_width_frac: float = DEFAULT_HALF_WIDTH_FRAC,
              exclude_hz: Sequence[float] = ()) -> float:
    """Maximum spectrum amplitude near harmonics 1..k of ``center_hz``.

    Each harmonic gets a band of fractional half-width
    ``half_width_frac`` (floored at 2 bins).  Bands are clipped at the
    midpoint toward any overlapping band of an ``exclude_hz`` frequency's
    harmonics, so the band sets of two fault frequencies never overlap: a
    tone midway between two competing bands is counted by neither.

    Raises:
        BandOutOfRange: highest harmonic exceeds the spectrum range.
    """
    nyquist = (len(s) - 1) * s.bin_width_hz
    if center_hz <= 0 or center_hz * max_harmonic >= nyquist:
        raise BandOutOfRange(
            f"harmonic {max_harmonic} of {center_hz} Hz is not below "
            f"{nyquist} Hz")
    freqs = s.frequencies
    own = _harmonic_bands(center_hz, max_harmonic, half_width_frac,
                          s.bin_width_hz)
    others = [band for other in exclude_hz for band in
              _harmonic_bands(other, max_harmonic, half_width_frac,
                              s.bin_width_hz)]
    peak = 0.0
    for lo, center, hi in own:
        mask = (freqs >= lo) & (freqs <= hi)
        for olo, ocenter, ohi in others:
            if ohi < lo or olo > hi:
                continue
            boundary = (center + ocenter) / 2.0
            if ocenter > center:
                mask &= freqs < boundary
            elif ocenter < center:
                mask &= freqs > boundary
            else:
                mask &= False
        if mask.any():
            peak = max(peak, float(s.amplitudes[mask].max()))
    return peak


# ---------------------------------------------------------------------------
# feature extraction
# ---------------------------------------------------------------------------

def features_batch(windows: np.ndarray, sample_rate_hz: float,
                   ff: FaultFrequencies,
                   half_width_frac: float = DEFAULT_HALF_WIDTH_FRAC,
                   envelope: bool = False,
                   max_harmonic: int = DEFAULT_MAX_HARMONIC) -> np.ndarray:
    """The 14 features of every row of a (batch, n) window matrix.

    With ``envelope=True`` the spectral features f11-f14 are computed on
    the spectrum of the analytic-signal envelope instead of the raw
    spectrum (defect harmonics of resonant impacts live in the envelope).

    Raises:
        TooShort: windows too short to resolve BPFO.
        ZeroVariance: some window is constant.
    """
    if windows.ndim != 2:
        raise ValueError("windows must be (batch, n)")
    batch, n = windows.shape
    if n < 4 or sample_rate_hz / n > ff.bpfo_hz:
        raise TooShort(
            f"windows of {n} samples cannot resolve BPFO = {ff.bpfo_hz:.1f} Hz "
            f"at {sample_rate_hz:.0f} Hz")

    x = np.asarray(windows, dtype=np.float64)
    mean = x.mean(axis=1)
    centered = x - mean[:, None]
    ssq = np.einsum("ij,ij->i", centered, centered)
    if np.any(ssq == 0.0):
        raise ZeroVariance("constant window has no defined shape features")
    var_pop = ssq / n                      # f2: divisor N
    var_sample = ssq / (n - 1)
    rms = np.sqrt(np.einsum("ij,ij->i", x, x) / n)
    absx = np.abs(x)
    peak = absx.max(axis=1)
    mean_abs = absx.mean(axis=1)
    mean_sqrt_abs = np.sqrt(absx).mean(axis=1)
    third = np.sum(centered**3, axis=1)
    fourth = np.sum(centered**4, axis=1)
    skew = third / (var_sample**1.5 * (n - 1))
    kurt = fourth / (var_sample**2 * (n - 1))

    if envelope:
        spec_src = np.abs(hilbert(x, axis=1))
    else:
        spec_src = x
    amps = np.abs(np.fft.rfft(spec_src, axis=1))
    bin_width = sample_rate_hz / n
    spec_mean = amps.mean(axis=1)
    spec_var = amps.var(axis=1)            # divisor K

    out = np.empty((batch, N_FEATURES))
    out[:, 0] = mean
    out[:, 1] = var_pop
    out[:, 2] = rms
    out[:, 3] = peak
    out[:, 4] = skew
    out[:, 5] = kurt
    out[:, 6] = peak / rms
    out[:, 7] = rms / mean_abs
    out[:, 8] = peak / mean_abs
    out[:, 9] = peak / mean_sqrt_abs**2
    for i in range(batch):
        spectrum = Spectrum(amps[i], bin_width)
        out[i, 10] = band_peak(spectrum, ff.bpfo_hz, max_harmonic,
                               half_width_frac=half_width_frac,
                               exclude_hz=(ff.bpfi_hz,))
        out[i, 11] = band_peak(spectrum, ff.bpfi_hz, max_harmonic,
                               half_width_frac=half_width_frac,
                               exclude_hz=(ff.bpfo_hz,))
    out[:, 12] = spec_mean
    out[:, 13] = spec_var
    return out


def extract_features(x: TimeSeries, ff: FaultFrequencies,
                     half_width_frac: float = DEFAULT_HALF_WIDTH_FRAC,
                     envelope: bool = False,
                     max_harmonic: int = DEFAULT_MAX_HARMONIC,
                     label: str | None = None,
                     window_index: int = 0) -> FeatureVector:
    """Table of 14 statistical-spectral features for one window."""
    feats = features_batch(x.samples[None, :], x.sample_rate_hz, ff,
                           half_width_frac=half_width_frac,
                           envelope=envelope, max_harmonic=max_harmonic)[0]
    return FeatureVector(f=feats, label=label, window_index=window_index)


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def normalize_matrix(matrix: np.ndarray) -> tuple[np.ndarray, NormalizationStats]:
    """Column z-scores of a (rows, features) matrix.

    Uses population statistics; output columns have mean 0 and std 1.

    Raises:
        ConstantFeature: some column has zero spread (callers must drop
            or impute, never divide silently).
    """
    if matrix.ndim != 2 or matrix.shape[0] < 2:
        raise ValueError("need a 2-D matrix with at least 2 rows")
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0)
    for i, s in enumerate(std):
        if s == 0.0:
            raise ConstantFeature(i)
    return (matrix - mean) / std, NormalizationStats(mean=mean, std=std)


def normalize(rows: Sequence[FeatureVector]
              ) -> tuple[list[FeatureVector], NormalizationStats]:
    """Z-score a feature-vector set; returns the stats for inference reuse."""
    matrix = np.array([r.f for r in rows])
    scaled, stats = normalize_matrix(matrix)
    out = [FeatureVector(f=scaled[i], label=r.label,
                         window_index=r.window_index)
           for i, r in enumerate(rows)]
    return out, stats


def apply_normalization(matrix: np.ndarray,
                        stats: NormalizationStats) -> np.ndarray:
    """Apply frozen training statistics to new rows (inference side)."""
    return (np.asarray(matrix, dtype=np.float64) - stats.mean) / stats.std


def denormalize(matrix: np.ndarray, stats: NormalizationStats) -> np.ndarray:
    """Inverse of :func:`apply_normalization`."""
    return np.asarray(matrix, dtype=np.float64) * stats.std + stats.mean


# ---------------------------------------------------------------------------
# windowing
# ---------------------------------------------------------------------------

def segment_matrix(samples: np.ndarray, sample_rate_hz: float,
                   window_s: float = DEFAULT_WINDOW_S,
                   overlap_frac: float = DEFAULT_OVERLAP_FRAC) -> np.ndarray:
    """Overlapped windows of a signal as a read-only (count, window) view."""
    window = int(round(window_s * sample_rate_hz))
    hop = int(round(window * (1.0 - overlap_frac)))
    if hop < 1:
        raise ValueError("overlap_frac leaves an empty hop")
    n = samples.size
    if n < window:
        raise TooShort(f"signal of {n} samples is shorter than one window "
                       f"({window})")
    count = (n - window) // hop + 1
    itemsize = samples.itemsize
    view = np.lib.stride_tricks.as_strided(
        samples, shape=(count, window), strides=(hop * itemsize, itemsize),
        writeable=False)
    return view


def segment(x: TimeSeries, window_s: float = DEFAULT_WINDOW_S,
            overlap_frac: float = DEFAULT_OVERLAP_FRAC) -> list[TimeSeries]:
    """Split a signal into windows with fractional overlap.

    Window starts fall at 0, hop, 2*hop, ... with
    hop = window * (1 - overlap_frac); a trailing partial window is
    discarded, so len(result) = floor((N - W) / hop) + 1.

    Raises:
        TooShort: signal shorter than one window.
    """
    view = segment_matrix(x.samples, x.sample_rate_hz, window_s, overlap_frac)
    return [TimeSeries(row.copy(), x.sample_rate_hz) for row in view]


# ---------------------------------------------------------------------------
# matrix <-> FeatureVector helpers
# ---------------------------------------------------------------------------

def feature_matrix(rows: Sequence[FeatureVector]
                   ) -> tuple[np.ndarray, list[str | None], list[int]]:
    """Stack feature vectors into (matrix, labels, window indices)."""
    matrix = np.array([r.f for r in rows], dtype=np.float64)
    return matrix, [r.label for r in rows], [r.window_index for r in rows]
