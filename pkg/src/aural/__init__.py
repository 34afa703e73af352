"""aural: acoustic bearing health diagnosis toolkit.

Pipeline: adaptive wavelet denoising driven by the kurtosis /
spectral-entropy (KE) index, statistical-spectral feature extraction with
bearing fault-frequency bands, and a small 1-D residual network
classifier, plus a synthetic bearing-acoustics benchmark that exercises
the whole chain.
"""

__version__ = "0.1.0"

from .spectral import (MelSpectrogram, Spectrum, TimeSeries, ke_index,
                       kurtosis, log_mel_spectrogram, magnitude_spectrum,
                       spectral_entropy)

__all__ = [
    "TimeSeries", "Spectrum", "MelSpectrogram",
    "kurtosis", "magnitude_spectrum", "spectral_entropy", "ke_index",
    "log_mel_spectrogram", "__version__",
]
