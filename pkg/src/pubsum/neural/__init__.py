"""Minimal differentiable-computation core with hand-derived gradients.

Everything here is verifiable against central finite differences; that check
is part of the test suite, not an afterthought.
"""

from .layers import (
    Dense,
    Dropout,
    Parameter,
    Relu,
    ShapeError,
    sigmoid,
    softmax,
    softmax_cross_entropy,
)
from .lstm import BiLstm, LstmCell
from .optim import Adam, Sgd, make_optimizer
from .training import TrainConfig, TrainingDivergedError, TrainingHistory, train
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint

__all__ = [
    "Adam",
    "BiLstm",
    "CheckpointError",
    "Dense",
    "Dropout",
    "LstmCell",
    "Parameter",
    "Relu",
    "Sgd",
    "ShapeError",
    "TrainConfig",
    "TrainingDivergedError",
    "TrainingHistory",
    "load_checkpoint",
    "make_optimizer",
    "save_checkpoint",
    "sigmoid",
    "softmax",
    "softmax_cross_entropy",
    "train",
]
