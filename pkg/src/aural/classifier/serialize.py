"""Model persistence: a versioned JSON document.

The file carries the architecture configuration, the frozen feature
normalization statistics, and every weight tensor as nested (row-major)
lists.  JSON float serialization uses shortest round-trip formatting, so
save -> load reproduces the weights bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..errors import BadInput
from ..features import NormalizationStats
from .model import Model, ModelConfig

MODEL_FILE_VERSION = 1


def model_to_document(m: Model) -> dict:
    doc = {
        "version": MODEL_FILE_VERSION,
        "config": asdict(m.config),
        "norm_stats": None,
        "weights": {k: v.tolist() for k, v in sorted(m.weights.items())},
    }
    if m.norm_stats is not None:
        doc["norm_stats"] = {"mean": m.norm_stats.mean.tolist(),
                             "std": m.norm_stats.std.tolist()}
    return doc


def model_from_document(doc: dict) -> Model:
    if not isinstance(doc, dict) or doc.get("version") != MODEL_FILE_VERSION:
        raise BadInput(
            f"unsupported model file version {doc.get('version')!r}, "
            f"expected {MODEL_FILE_VERSION}")
    config = ModelConfig(**doc["config"])
    stats = None
    if doc.get("norm_stats") is not None:
        stats = NormalizationStats(mean=np.array(doc["norm_stats"]["mean"]),
                                   std=np.array(doc["norm_stats"]["std"]))
    weights = {k: np.array(v, dtype=np.float64)
               for k, v in doc["weights"].items()}
    return Model(config=config, weights=weights, norm_stats=stats)


def save_model(m: Model, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_document(m), indent=1),
                          encoding="utf-8")


def load_model(path: str | Path) -> Model:
    """Raises BadInput for malformed documents or unknown versions."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BadInput(f"model file is not valid JSON: {exc}") from exc
    return model_from_document(doc)
