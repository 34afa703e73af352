"""Benchmark dataset builder: recordings -> windows -> features.

Generates per-class recordings with the synthetic generator, windows them
(1 s, 10 % overlap), runs the adaptive wavelet selection and denoising on
every window, and extracts the 14 features both from the denoised and
from the raw window.  Raw windows are also kept as envelope-downsampled
vectors for the raw-signal classification ablation.

Train and test splits come from disjoint recordings, so no window
overlaps across the split.  Everything is deterministic in the master
seed; recordings are processed in parallel worker processes (capped by
the AURAL_THREADS environment variable) and merged in recording order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BadCounts
from .features import (CLASSES, DEFAULT_GEOMETRY, BearingGeometry,
                       FaultFrequencies, FeatureVector, fault_frequencies,
                       features_batch, segment_matrix)
from .spectral import DEFAULT_SAMPLE_RATE
from .synth import DEFAULT_SHAFT_HZ, SynthSpec, generate, severity_for
from .wavelets import denoise_batch, load_filter_bank

#: Candidate wavelets swept per window by the benchmark (one or more per
#: family, including the orders the adaptive selection tends to favor).
#: The CLI exposes the full 92-wavelet registry via --bank.
DEFAULT_SWEEP_BANK = (
    "db2", "db4", "db8", "db16", "db37",
    "sym4", "sym8", "sym13",
    "coif1", "coif3", "coif5",
    "bior1.3", "bior3.1", "bior3.9",
    "rbio1.3", "rbio3.1",
)

#: Decomposition depth used by the benchmark pipeline.
BENCH_LEVEL = 5

#: Raw-signal ablation windows are envelope-downsampled to this length.
RAW_INPUT_LEN = 512

#: Windows drawn from one recording (split boundaries fall between
#: recordings, never inside one).
WINDOWS_PER_RECORDING = 192


@dataclass(frozen=True)
class RecordingPlan:
    condition: str
    n_windows: int
    split: str            # "train" | "test"
    seed: int
    snr_db: float


@dataclass
class WindowSet:
    """Per-window products of the benchmark pipeline for one split."""

    features_denoised: np.ndarray   # (n, 14)
    features_raw: np.ndarray        # (n, 14)
    raw_denoised: np.ndarray        # (n, RAW_INPUT_LEN)
    raw_plain: np.ndarray           # (n, RAW_INPUT_LEN)
    labels: list[str] = field(default_factory=list)
    window_index: np.ndarray = field(default_factory=lambda: np.empty(0, int))
    chosen_wavelets: list[str] = field(default_factory=list)


def downsample_raw(windows: np.ndarray, n_out: int = RAW_INPUT_LEN
                   ) -> np.ndarray:
    """Strided decimation to n_out samples per window.

    Deliberately crude (no anti-alias filter): the raw-signal ablation
    feeds the classifier plain subsampled waveforms.
    """
    step = windows.shape[1] // n_out
    return np.ascontiguousarray(windows[:, : step * n_out : step])


def max_workers() -> int:
    cap = os.environ.get("AURAL_THREADS")
    workers = os.cpu_count() or 1
    if cap:
        workers = min(workers, max(int(cap), 1))
    return workers


def plan_recordings(n_train: int, n_test: int, snr_db: float,
                    seed: int) -> list[RecordingPlan]:
    """Balanced per-class recording plans with derived seeds.

    Raises:
        BadCounts: totals not divisible into balanced classes.
    """
    if n_train % len(CLASSES) or n_test % len(CLASSES):
        raise BadCounts(f"training and test sizes must be divisible by "
                        f"{len(CLASSES)}")
    plans: list[RecordingPlan] = []
    counter = 0
    for condition in CLASSES:
        for split, per_class in (("train", n_train // len(CLASSES)),
                                 ("test", n_test // len(CLASSES))):
            remaining = per_class
            while remaining > 0:
                take = min(remaining, WINDOWS_PER_RECORDING)
                rec_seed = int(np.random.SeedSequence(
                    entropy=seed, spawn_key=(counter,)).generate_state(1)[0])
                plans.append(RecordingPlan(condition=condition,
                                           n_windows=take, split=split,
                                           seed=rec_seed, snr_db=snr_db))
                counter += 1
                remaining -= take
    return plans


def _sweep_denoise(windows: np.ndarray, bank: tuple[str, ...], level: int
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Per-window argmax-KE wavelet sweep; returns (denoised, winner idx).

    The KE scores need only the thresholded details, so the inverse
    transform runs once per winner group instead of once per candidate.
    """
    from .wavelets import list_bank
    from .wavelets.denoise import ke_batch, threshold_details_batch
    from .wavelets.transform import dwt_batch

    n_win = windows.shape[0]
    ke_table = np.empty((len(bank), n_win))
    for w, name in enumerate(bank):
        fb = load_filter_bank(name)
        _, details = dwt_batch(windows, fb, level)
        shrunk, _ = threshold_details_batch(details)
        ke_table[w], _ = ke_batch(np.concatenate(shrunk, axis=1))
    # ties resolve to the earliest name in registry order, matching
    # select_wavelet: scan candidates by registry rank, argmax keeps first
    registry_rank = {name: i for i, name in enumerate(list_bank())}
    by_rank = np.argsort([registry_rank.get(n, len(registry_rank))
                          for n in bank], kind="stable")
    winners = by_rank[ke_table[by_rank].argmax(axis=0)]
    denoised = np.empty_like(windows)
    for w in np.unique(winners):
        rows = winners == w
        fb = load_filter_bank(bank[w])
        denoised[rows], _, _, _ = denoise_batch(windows[rows], fb, level)
    return denoised, winners


def process_recording(plan: RecordingPlan,
                      geometry: BearingGeometry = DEFAULT_GEOMETRY,
                      shaft_hz: float = DEFAULT_SHAFT_HZ,
                      bank: tuple[str, ...] = DEFAULT_SWEEP_BANK,
                      level: int = BENCH_LEVEL,
                      envelope: bool = False,
                      chunk: int = 96) -> WindowSet:
    """Run the whole per-window pipeline for one recording."""
    window_s = 1.0
    hop_s = 0.9
    duration = window_s + (plan.n_windows - 1) * hop_s
    spec = SynthSpec(condition=plan.condition,
                     severity=severity_for(plan.condition),
                     snr_db=plan.snr_db, duration_s=duration + 1e-9,
                     seed=plan.seed)
    recording = generate(spec, geometry, shaft_hz)
    windows = segment_matrix(recording.samples, recording.sample_rate_hz,
                             window_s, 0.10)
    assert windows.shape[0] == plan.n_windows

    ff = fault_frequencies(geometry, shaft_hz)
    fs = recording.sample_rate_hz
    feats_dn, feats_raw, raw_dn, raw_nd, chosen = [], [], [], [], []
    for start in range(0, plan.n_windows, chunk):
        block = np.ascontiguousarray(windows[start : start + chunk])
        denoised, winners = _sweep_denoise(block, bank, level)
        feats_dn.append(features_batch(denoised, fs, ff, envelope=envelope))
        feats_raw.append(features_batch(block, fs, ff, envelope=envelope))
        raw_dn.append(downsample_raw(denoised))
        raw_nd.append(downsample_raw(block))
        chosen.extend(bank[w] for w in winners)
    return WindowSet(
        features_denoised=np.vstack(feats_dn),
        features_raw=np.vstack(feats_raw),
        raw_denoised=np.vstack(raw_dn),
        raw_plain=np.vstack(raw_nd),
        labels=[plan.condition] * plan.n_windows,
        window_index=np.empty(0, int),
        chosen_wavelets=chosen)


def _merge(sets: list[WindowSet], offset: int) -> WindowSet:
    merged = WindowSet(
        features_denoised=np.vstack([s.features_denoised for s in sets]),
        features_raw=np.vstack([s.features_raw for s in sets]),
        raw_denoised=np.vstack([s.raw_denoised for s in sets]),
        raw_plain=np.vstack([s.raw_plain for s in sets]),
        labels=[lab for s in sets for lab in s.labels],
        chosen_wavelets=[w for s in sets for w in s.chosen_wavelets])
    n = merged.features_denoised.shape[0]
    merged.window_index = np.arange(offset, offset + n)
    return merged


@dataclass
class Benchmark:
    train: WindowSet
    test: WindowSet
    snr_db: float
    seed: int


def build_benchmark(n_train: int = 3840, n_test: int = 960,
                    snr_db: float = -5.0, seed: int = 0,
                    bank: tuple[str, ...] = DEFAULT_SWEEP_BANK,
                    level: int = BENCH_LEVEL,
                    envelope: bool = False,
                    workers: int | None = None) -> Benchmark:
    """Full benchmark build: all recordings, all window products."""
    plans = plan_recordings(n_train, n_test, snr_db, seed)
    if workers is None:
        workers = max_workers()
    if workers > 1 and len(plans) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                process_recording, plans,
                [DEFAULT_GEOMETRY] * len(plans),
                [DEFAULT_SHAFT_HZ] * len(plans),
                [bank] * len(plans), [level] * len(plans),
                [envelope] * len(plans)))
    else:
        results = [process_recording(p, bank=bank, level=level,
                                     envelope=envelope) for p in plans]

    train_sets = [r for p, r in zip(plans, results) if p.split == "train"]
    test_sets = [r for p, r in zip(plans, results) if p.split == "test"]
    train = _merge(train_sets, 0)
    test = _merge(test_sets, train.features_denoised.shape[0])
    return Benchmark(train=train, test=test, snr_db=snr_db, seed=seed)


def build_dataset(n_train: int = 3840, n_test: int = 960,
                  snr_db: float = -5.0, seed: int = 0
                  ) -> tuple[list[FeatureVector], list[FeatureVector]]:
    """Denoised per-window feature vectors, split train/test.

    The split is disjoint by recording; window indices are globally
    unique across the whole dataset.
    """
    bench = build_benchmark(n_train, n_test, snr_db, seed)
    out = []
    for ws in (bench.train, bench.test):
        out.append([FeatureVector(f=ws.features_denoised[i],
                                  label=ws.labels[i],
                                  window_index=int(ws.window_index[i]))
                    for i in range(ws.features_denoised.shape[0])])
    return out[0], out[1]
