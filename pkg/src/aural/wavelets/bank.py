"""Wavelet filter-bank registry.

Filter coefficients ship as a versioned JSON asset generated offline by
``tools/make_wavelet_registry.py`` (Daubechies/symlet/coiflet banks by
high-precision spectral factorization, biorthogonal spline banks by exact
rational construction).  Every bank in the asset was validated for perfect
reconstruction and, where applicable, the orthogonal filter identities
before being written.

The default registry holds 92 banks: db1-db38, sym2-sym20, coif1-coif5,
and the 15 standard bior / rbio pairs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from ..errors import BadInput, UnknownWavelet

REGISTRY_RESOURCE = "registry.json"
REGISTRY_VERSION = 1


@dataclass(frozen=True)
class FilterBank:
    """Analysis/synthesis filter quadruple for one named wavelet.

    ``dec_*`` are the decomposition (analysis) filters in convolution
    order, ``rec_*`` the reconstruction (synthesis) filters.  All four
    have the same even length.  ``orthogonal`` marks banks whose dec
    filters are the time-reverse of their rec filters.
    """

    name: str
    dec_lo: np.ndarray
    dec_hi: np.ndarray
    rec_lo: np.ndarray
    rec_hi: np.ndarray
    orthogonal: bool

    def __post_init__(self):
        for attr in ("dec_lo", "dec_hi", "rec_lo", "rec_hi"):
            arr = np.asarray(getattr(self, attr), dtype=np.float64)
            if arr.ndim != 1 or arr.size < 2:
                raise ValueError(f"{attr} must be a 1-D array of length >= 2")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{attr} must be finite")
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, attr, arr)
        lengths = {getattr(self, a).size for a in
                   ("dec_lo", "dec_hi", "rec_lo", "rec_hi")}
        if len(lengths) != 1:
            raise ValueError("all four filters must share one length")

    @property
    def filter_length(self) -> int:
        return self.dec_lo.size


def _family_sort_key(name: str) -> tuple[str, float, float]:
    """Lexicographic by family, then numeric order(s): db2 < db10, bior1.3 < bior3.1."""
    m = re.fullmatch(r"([a-z]+)(\d+)(?:\.(\d+))?", name)
    if not m:
        return (name, 0.0, 0.0)
    family, major, minor = m.group(1), int(m.group(2)), m.group(3)
    return (family, float(major), float(minor) if minor is not None else -1.0)


@lru_cache(maxsize=1)
def _registry() -> dict[str, FilterBank]:
    text = resources.files("aural.wavelets").joinpath(
        "data", REGISTRY_RESOURCE).read_text(encoding="utf-8")
    return parse_registry(text)


def parse_registry(text: str) -> dict[str, FilterBank]:
    """Parse a registry document; rejects unknown versions.

    Raises:
        BadInput: malformed document or unsupported version.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadInput(f"registry is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("version") != REGISTRY_VERSION:
        raise BadInput(
            f"unsupported registry version {doc.get('version')!r}, "
            f"expected {REGISTRY_VERSION}")
    banks: dict[str, FilterBank] = {}
    for name, entry in doc["wavelets"].items():
        banks[name] = FilterBank(
            name=name,
            dec_lo=entry["dec_lo"], dec_hi=entry["dec_hi"],
            rec_lo=entry["rec_lo"], rec_hi=entry["rec_hi"],
            orthogonal=bool(entry["orthogonal"]))
    return banks


def list_bank() -> list[str]:
    """All registry wavelet names, ordered by (family, numeric order)."""
    return sorted(_registry().keys(), key=_family_sort_key)


def load_filter_bank(name: str) -> FilterBank:
    """Look up one wavelet by name (e.g. ``"db4"``, ``"bior3.1"``).

    Raises:
        UnknownWavelet: name not in the registry (this includes
            continuous-only wavelets such as ``"morl"``, which have no
            discrete perfect-reconstruction filter bank).
    """
    try:
        return _registry()[name]
    except KeyError:
        raise UnknownWavelet(
            f"{name!r} is not in the registry; see list_bank()") from None


def filter_identity_errors(fb: FilterBank) -> dict[str, float]:
    """Deviations from the orthogonal filter identities.

    Returns absolute errors for: sum(dec_lo) = sqrt(2), unit energy,
    and the worst double-shift orthogonality residual.  Only meaningful
    for orthogonal banks.
    """
    h = fb.dec_lo
    shifts = {}
    for m in range(1, h.size // 2):
        shifts[m] = abs(float(np.dot(h[: h.size - 2 * m], h[2 * m :])))
    return {
        "sum": abs(float(h.sum()) - np.sqrt(2.0)),
        "energy": abs(float(np.dot(h, h)) - 1.0),
        "double_shift": max(shifts.values()) if shifts else 0.0,
    }
