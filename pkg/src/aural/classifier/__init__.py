"""1-D residual network classifier: model, training, persistence."""

from .model import (Model, ModelConfig, cross_entropy, forward, init_model,
                    label_indices, loss_and_grads, weight_shapes)
from .serialize import (MODEL_FILE_VERSION, load_model, model_from_document,
                        model_to_document, save_model)
from .training import (AdamState, EpochStats, TrainConfig, batch_loss,
                       epoch_learning_rate, evaluate, predict, train)

__all__ = [
    "Model", "ModelConfig", "cross_entropy", "forward", "init_model",
    "label_indices", "loss_and_grads", "weight_shapes",
    "MODEL_FILE_VERSION", "load_model", "model_from_document",
    "model_to_document", "save_model",
    "AdamState", "EpochStats", "TrainConfig", "batch_loss",
    "epoch_learning_rate", "evaluate", "predict", "train",
]
