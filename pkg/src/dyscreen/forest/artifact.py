"""Model artifact: canonical JSON serialization with a version tag.

Canonical form (sorted keys, no whitespace, UTF-8) makes equal models
byte-identical, which the registry uses for content addressing.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ..core.variants import variant_by_name
from ..errors import ArtifactError
from .model import DecisionTree, ForestModel, TrainConfig

ARTIFACT_VERSION = 1


def model_to_dict(model: ForestModel) -> dict[str, Any]:
    cfg = model.config
    return {
        "version": ARTIFACT_VERSION,
        "variant": model.variant.name,
        "trees": [tree.to_node() for tree in model.trees],
        "threshold": model.threshold,
        "train_config": {
            "n_trees": cfg.n_trees,
            "max_depth": cfg.max_depth,
            "mtry": cfg.mtry,
            "seed": cfg.seed,
            "min_node_weight": cfg.min_node_weight,
        },
        "seed": cfg.seed,
        "class_weights": list(model.class_weights),
    }


def serialize_model(model: ForestModel) -> bytes:
    doc = model_to_dict(model)
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def deserialize_model(data: bytes) -> ForestModel:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ArtifactError(f"artifact is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ArtifactError("artifact root must be an object")
    version = doc.get("version")
    if version != ARTIFACT_VERSION:
        raise ArtifactError(
            f"unsupported artifact version {version!r} (expected {ARTIFACT_VERSION})"
        )
    try:
        variant = variant_by_name(doc["variant"])
        cfg_doc = doc["train_config"]
        config = TrainConfig(
            n_trees=int(cfg_doc["n_trees"]),
            max_depth=cfg_doc["max_depth"],
            mtry=cfg_doc["mtry"],
            seed=int(cfg_doc["seed"]),
            min_node_weight=cfg_doc["min_node_weight"],
        )
        trees = tuple(DecisionTree.from_node(node) for node in doc["trees"])
        threshold = float(doc["threshold"])
        w_pos, w_neg = (float(x) for x in doc["class_weights"])
    except ArtifactError:
        raise
    except Exception as exc:
        raise ArtifactError(f"malformed artifact: {exc}") from None
    try:
        return ForestModel(
            trees=trees,
            threshold=threshold,
            variant=variant,
            config=config,
            class_weights=(w_pos, w_neg),
        )
    except Exception as exc:
        raise ArtifactError(f"artifact violates model invariants: {exc}") from None


def save_model(model: ForestModel, path: str | Path) -> None:
    Path(path).write_bytes(serialize_model(model))


def load_model(path: str | Path) -> ForestModel:
    return deserialize_model(Path(path).read_bytes())
