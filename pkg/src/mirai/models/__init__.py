"""Model registry mapping config kinds to classifier constructors."""

from __future__ import annotations

from ..errors import ConfigError
from .base import ClassifierHandle, ResourceInfo, accuracy_f1
from .external import CommandModel, PredictionFileModel
from .gbt import GradientBoostedTrees
from .linear import LinearMaxMargin
from .mlp import Mlp
from .tree import DecisionTree

_BUILTIN = {
    "tree": DecisionTree,
    "gbt": GradientBoostedTrees,
    "linear": LinearMaxMargin,
    "mlp": Mlp,
}

KNOWN_KINDS = tuple(_BUILTIN) + ("external_command", "external_file")


def build_model(spec, seed: int) -> ClassifierHandle:
    """Instantiate the classifier a ModelSpec describes; training is separate."""
    params = dict(spec.params)
    if spec.kind in _BUILTIN:
        try:
            return _BUILTIN[spec.kind](spec.name, seed=seed, **params)
        except TypeError as exc:
            raise ConfigError(f"model {spec.name!r}: bad params ({exc})") from None
    if spec.kind == "external_command":
        if "command" not in params:
            raise ConfigError(f"model {spec.name!r}: external_command needs 'command'")
        return CommandModel(spec.name, params["command"],
                            resources=spec.resources, seed=seed)
    if spec.kind == "external_file":
        if "predictions" not in params:
            raise ConfigError(f"model {spec.name!r}: external_file needs 'predictions'")
        return PredictionFileModel(spec.name, params["predictions"],
                                   resources=spec.resources, seed=seed)
    raise ConfigError(f"unknown model kind {spec.kind!r}; known: {KNOWN_KINDS}")


__all__ = [
    "ClassifierHandle", "ResourceInfo", "accuracy_f1", "build_model",
    "DecisionTree", "GradientBoostedTrees", "LinearMaxMargin", "Mlp",
    "CommandModel", "PredictionFileModel", "KNOWN_KINDS",
]
