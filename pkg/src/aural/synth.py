"""Synthetic bearing-acoustics generator.

Models a microphone recording of a machine with a rolling-element
bearing: shaft tone plus harmonics, two stationary machinery tones in the
kilohertz range, and, for fault conditions, a jittered impulse train at
the race ball-pass frequency convolved with an exponentially damped
resonance ring.  Inner-race impulses are amplitude-modulated at the shaft
rate (the defect rotates through the load zone).  Broadband noise is
added at an exact signal-to-noise ratio measured against the noiseless
component.

Every signal is a deterministic function of its spec (including the
seed), which makes the generator usable as a verification oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import fftconvolve, lfilter

from .errors import BadSpec
from .features import (CLASSES, BearingGeometry, DEFAULT_GEOMETRY,
                       fault_frequencies)
from .spectral import DEFAULT_SAMPLE_RATE, TimeSeries

DEFAULT_SHAFT_HZ = 3010.0 / 60.0

#: Shaft fundamental amplitude and the rolloff of its three harmonics.
TONE_AMPLITUDE = 1.0
TONE_HARMONIC_ROLLOFF = (1.0, 0.5, 0.3, 0.2)

#: Stationary machinery tones (hz, amplitude) present in every condition,
#: two per wavelet detail band at the default depth: motor slot, gear mesh
#: and blade-pass components populate the whole audible range on real rigs.
MACHINE_TONES = (
    (1010.0, 0.50), (1370.0, 0.45),     # 0.8 - 1.6 kHz
    (1980.0, 0.42), (2730.0, 0.38),     # 1.6 - 3.2 kHz
    (3890.0, 0.33), (5240.0, 0.30),     # 3.2 - 6.4 kHz
    (7770.0, 0.27), (10400.0, 0.24),    # 6.4 - 12.8 kHz
    (15600.0, 0.20), (21000.0, 0.18),   # 12.8 - 25.6 kHz
)

#: Peak impulse amplitude at severity 1.0.
IMPULSE_AMPLITUDE = 14.0

#: Depth of the shaft-rate amplitude modulation on inner-race impulses.
INNER_MODULATION_DEPTH = 0.5

#: Background noise model: low-frequency rumble (one-pole AR) carrying
#: most of the power plus a white floor.  Ambient machine noise is
#: strongly low-frequency weighted; the white fraction sets the floor
#: that competes with the resonance band.
NOISE_AR_COEFF = 0.995
NOISE_WHITE_FRACTION = 0.10


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic recording."""

    condition: str
    severity: float = 1.0
    snr_db: float = 0.0
    duration_s: float = 1.0
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE
    resonance_hz: float = 4000.0
    damping: float = 800.0
    jitter_frac: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.condition not in CLASSES:
            raise BadSpec(f"condition must be one of {CLASSES}")
        if not (0 < self.severity <= 1):
            raise BadSpec("severity must lie in (0, 1]")
        if self.duration_s < 1.0:
            raise BadSpec("duration must be at least 1 s")
        if not (0 < self.resonance_hz < self.sample_rate_hz / 2):
            raise BadSpec("resonance must lie below Nyquist")
        if self.damping <= 0:
            raise BadSpec("damping must be positive")
        if not (0 <= self.jitter_frac <= 0.05):
            raise BadSpec("jitter_frac must lie in [0, 0.05]")


def severity_for(condition: str) -> float:
    """Crack size in millimetres mapped onto (0, 1]."""
    if condition == "normal":
        return 1.0   # unused by the generator for the normal condition
    return {"0.3": 0.3, "1.0": 1.0}[condition.split("-")[1]]


def _ring_kernel(spec: SynthSpec) -> np.ndarray:
    """Damped resonance excited by each impact: exp(-d t) sin(2 pi f t)."""
    length = int(spec.sample_rate_hz * 8.0 / spec.damping)
    t = np.arange(1, length + 1) / spec.sample_rate_hz
    return np.exp(-spec.damping * t) * np.sin(2 * np.pi * spec.resonance_hz * t)


def _impulse_train(spec: SynthSpec, rate_hz: float, shaft_hz: float,
                   n: int, rng: np.random.Generator) -> np.ndarray:
    """Amplitude spikes on the sample grid at the jittered fault rate."""
    fs = spec.sample_rate_hz
    period = 1.0 / rate_hz
    count = int(n / fs * rate_hz) + 2
    gaps = period * (1.0 + spec.jitter_frac * rng.uniform(-1, 1, size=count))
    times = np.cumsum(gaps) - gaps[0]
    times = times[times * fs < n - 1]
    amps = np.full(times.size, spec.severity * IMPULSE_AMPLITUDE)
    if spec.condition.startswith("IR"):
        amps = amps * (1.0 + INNER_MODULATION_DEPTH *
                       np.cos(2 * np.pi * shaft_hz * times))
    train = np.zeros(n)
    np.add.at(train, np.round(times * fs).astype(np.intp), amps)
    return train


def generate(spec: SynthSpec, g: BearingGeometry = DEFAULT_GEOMETRY,
             shaft_hz: float = DEFAULT_SHAFT_HZ) -> TimeSeries:
    """Render one recording; identical spec and seed give identical output.

    Raises:
        BadSpec: invalid spec fields (validated at construction) or a
            fault rate that cannot be realized at this sample rate.
    """
    rng = np.random.default_rng(spec.seed)
    fs = spec.sample_rate_hz
    n = int(round(spec.duration_s * fs))
    t = np.arange(n) / fs

    clean = np.zeros(n)
    for k, a in enumerate(TONE_HARMONIC_ROLLOFF, start=1):
        clean += TONE_AMPLITUDE * a * np.sin(
            2 * np.pi * k * shaft_hz * t + rng.uniform(0, 2 * np.pi))
    for freq, amp in MACHINE_TONES:
        clean += amp * np.sin(2 * np.pi * freq * t + rng.uniform(0, 2 * np.pi))

    if spec.condition != "normal":
        ff = fault_frequencies(g, shaft_hz)
        rate = ff.bpfo_hz if spec.condition.startswith("OR") else ff.bpfi_hz
        if rate >= fs / 2:
            raise BadSpec(f"fault rate {rate:.0f} Hz is not realizable "
                          f"at {fs:.0f} Hz")
        train = _impulse_train(spec, rate, shaft_hz, n, rng)
        clean += fftconvolve(train, _ring_kernel(spec))[:n]

    clean_power = float(np.mean(clean**2))
    target = clean_power * 10.0 ** (-spec.snr_db / 10.0)
    rumble = lfilter([1.0], [1.0, -NOISE_AR_COEFF], rng.standard_normal(n))
    white = rng.standard_normal(n)
    rumble *= np.sqrt((1.0 - NOISE_WHITE_FRACTION) / np.mean(rumble**2))
    white *= np.sqrt(NOISE_WHITE_FRACTION / np.mean(white**2))
    noise = rumble + white
    noise *= np.sqrt(target / np.mean(noise**2))
    return TimeSeries(clean + noise, fs)


def generate_components(spec: SynthSpec,
                        g: BearingGeometry = DEFAULT_GEOMETRY,
                        shaft_hz: float = DEFAULT_SHAFT_HZ
                        ) -> tuple[np.ndarray, np.ndarray]:
    """(clean, noise) parts of :func:`generate`, for SNR verification."""
    full = generate(spec, g, shaft_hz).samples
    quiet = generate(replace(spec, snr_db=300.0), g, shaft_hz).samples
    return quiet, full - quiet
