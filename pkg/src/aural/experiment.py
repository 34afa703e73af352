"""Four-way ablation: {raw window, features} x {with, without denoising}.

Trains one classifier per configuration on the same benchmark build and
reports the four test accuracies.  Feature configurations use the
14-feature vectors; raw configurations feed envelope-downsampled windows
through the same architecture with a wider input layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bench import (BENCH_LEVEL, DEFAULT_SWEEP_BANK, RAW_INPUT_LEN, Benchmark,
                    build_benchmark)
from .classifier import ModelConfig, TrainConfig, evaluate, train
from .features import N_FEATURES

#: Epochs for the feature-vector and raw-signal configurations.  Raw
#: windows are 512-wide, so their epochs cost roughly 35x a feature epoch.
FEATURE_EPOCHS = 40
RAW_EPOCHS = 8


@dataclass(frozen=True)
class AblationRow:
    data_type: str      # "raw" | "features"
    denoised: bool
    accuracy: float
    confusion: np.ndarray

    @property
    def name(self) -> str:
        suffix = "denoised" if self.denoised else "no-denoise"
        return f"{self.data_type}/{suffix}"


@dataclass(frozen=True)
class AblationReport:
    rows: tuple[AblationRow, ...]
    seed: int
    snr_db: float
    n_train: int
    n_test: int

    def accuracy(self, data_type: str, denoised: bool) -> float:
        for row in self.rows:
            if row.data_type == data_type and row.denoised == denoised:
                return row.accuracy
        raise KeyError((data_type, denoised))

    def ordering_holds(self) -> bool:
        """raw/nd is the worst, features+denoise the best."""
        raw_nd = self.accuracy("raw", False)
        best = self.accuracy("features", True)
        return (raw_nd < self.accuracy("features", False) and
                raw_nd < self.accuracy("raw", True) and
                all(best >= r.accuracy for r in self.rows))


def _train_and_score(x_train, labels_train, x_test, labels_test,
                     input_len: int, epochs: int, seed: int
                     ) -> tuple[float, np.ndarray]:
    mc = ModelConfig(input_len=input_len, seed=seed)
    tc = TrainConfig(epochs=epochs, seed=seed + 1)
    model, _ = train((x_train, labels_train), mc, tc)
    return evaluate(model, (x_test, labels_test))


def run_ablation(n_train: int = 3840, n_test: int = 960,
                 snr_db: float = -5.0, seed: int = 0,
                 bank: tuple[str, ...] = DEFAULT_SWEEP_BANK,
                 level: int = BENCH_LEVEL,
                 feature_epochs: int = FEATURE_EPOCHS,
                 raw_epochs: int = RAW_EPOCHS,
                 benchmark: Benchmark | None = None,
                 workers: int | None = None) -> AblationReport:
    """Build the benchmark (unless given) and score all four configs."""
    if benchmark is None:
        benchmark = build_benchmark(n_train, n_test, snr_db, seed,
                                    bank=bank, level=level, workers=workers)
    tr, te = benchmark.train, benchmark.test
    configs = (
        ("raw", False, tr.raw_plain, te.raw_plain, RAW_INPUT_LEN, raw_epochs),
        ("raw", True, tr.raw_denoised, te.raw_denoised, RAW_INPUT_LEN,
         raw_epochs),
        ("features", False, tr.features_raw, te.features_raw, N_FEATURES,
         feature_epochs),
        ("features", True, tr.features_denoised, te.features_denoised,
         N_FEATURES, feature_epochs),
    )
    rows = []
    for data_type, denoised, x_tr, x_te, width, epochs in configs:
        acc, confusion = _train_and_score(
            x_tr, tr.labels, x_te, te.labels, width, epochs, seed)
        rows.append(AblationRow(data_type=data_type, denoised=denoised,
                                accuracy=acc, confusion=confusion))
    return AblationReport(rows=tuple(rows), seed=seed, snr_db=snr_db,
                          n_train=len(tr.labels), n_test=len(te.labels))
