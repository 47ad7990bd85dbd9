from leaf.models.base import BlackBox, FunctionBlackBox, ModelDescriptor, ModelSpec
from leaf.models.forest import RandomForestModel, Tree
from leaf.models.linear import LinearModel, LogisticModel
from leaf.models.mlp import MLPModel
from leaf.models.neighbors import NearestNeighborsModel
from leaf.models.registry import ModelRegistry, accuracy, model_registry, train

__all__ = [
    "BlackBox",
    "FunctionBlackBox",
    "ModelDescriptor",
    "ModelSpec",
    "RandomForestModel",
    "Tree",
    "LinearModel",
    "LogisticModel",
    "MLPModel",
    "NearestNeighborsModel",
    "ModelRegistry",
    "accuracy",
    "model_registry",
    "train",
]
