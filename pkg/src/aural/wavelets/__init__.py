"""Wavelet engine: filter-bank registry, DWT/IDWT, denoising, selection."""

from .bank import (FilterBank, filter_identity_errors, list_bank,
                   load_filter_bank, parse_registry)
from .denoise import (DEFAULT_LEVEL, DenoiseReport, DenoiseResult, denoise,
                      denoise_batch, ke_batch, select_wavelet, soft_threshold,
                      threshold_details_batch, universal_thresholds)
from .transform import (PaddingMode, WaveletDecomposition, dwt, dwt_batch,
                        idwt, idwt_batch)

__all__ = [
    "FilterBank", "filter_identity_errors", "list_bank", "load_filter_bank",
    "parse_registry",
    "PaddingMode", "WaveletDecomposition", "dwt", "dwt_batch", "idwt",
    "idwt_batch",
    "DEFAULT_LEVEL", "DenoiseReport", "DenoiseResult", "denoise",
    "denoise_batch", "ke_batch", "select_wavelet", "soft_threshold",
    "threshold_details_batch", "universal_thresholds",
]
