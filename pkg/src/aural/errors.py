"""Exception hierarchy for the aural toolkit.

Every error raised by the library derives from :class:`AuralError`, so
callers (and the CLI) can distinguish bad input, bad configuration and
numeric degeneracies from programming bugs.
"""

from __future__ import annotations


class AuralError(Exception):
    """Base class for all library errors."""


# --- signal / spectral errors -------------------------------------------

class TooShort(AuralError):
    """Signal has fewer samples than the operation requires."""


class ZeroVariance(AuralError):
    """All samples are equal; variance-normalized statistics are undefined."""


class EmptySpectrum(AuralError):
    """Spectrum carries no energy (all amplitudes zero)."""


class BadBandRange(AuralError):
    """Requested frequency band is empty or exceeds Nyquist."""


# --- wavelet errors ------------------------------------------------------

class UnknownWavelet(AuralError):
    """Wavelet name is not in the registry."""


class TooShallow(AuralError):
    """Signal is too short for the requested decomposition depth."""


class InconsistentDecomposition(AuralError):
    """Decomposition coefficients do not match the filter bank / padding."""


class EmptyBank(AuralError):
    """Candidate wavelet list is empty."""


# --- feature errors ------------------------------------------------------

class BadGeometry(AuralError):
    """Bearing geometry violates its invariants."""


class BandOutOfRange(AuralError):
    """Fault-frequency harmonic band lies beyond Nyquist."""


class ConstantFeature(AuralError):
    """A feature column has zero spread; normalization would divide by zero."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"feature column {index} is constant")


# --- classifier errors ---------------------------------------------------

class ShapeMismatch(AuralError):
    """Tensor shapes do not match the model configuration."""


class DegenerateDataset(AuralError):
    """Training set lacks the minimum class diversity."""


class EmptyDataset(AuralError):
    """Evaluation set is empty."""


# --- synthesis / dataset errors ------------------------------------------

class BadSpec(AuralError):
    """Synthetic signal specification violates its invariants."""


class BadCounts(AuralError):
    """Dataset sizes are not divisible into balanced classes."""


# --- I/O / CLI errors -----------------------------------------------------

class BadInput(AuralError):
    """Input file is missing, unreadable, or has an unsupported format."""


class BadConfig(AuralError):
    """Configuration or manifest file failed validation."""
