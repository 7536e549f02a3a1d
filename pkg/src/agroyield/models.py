"""Uniform trained-predictor wrapper and its JSON envelope.

Every trained model (dnn | logistic | svm | forest) is stored as
    {"schema_version": 1, "variant": ..., "normalizer": ..., "payload": ...}
so the CLI loads any model file the same way. Predictions are returned in
original units (t/ha): raw dnn/svm outputs are clamped to [0, 1] before
denormalization so reported yields are never negative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import baselines, ingest, nn, schema
from .errors import DimensionMismatch, MalformedConfig

SCHEMA_VERSION = 1
VARIANTS = ("dnn", "logistic", "svm", "forest")


@dataclass
class Model:
    variant: str
    payload: object
    normalizer: ingest.Normalizer
    crop: schema.Crop | None = None


def predict_model(model: Model, x_norm) -> np.ndarray:
    """Predict yields (t/ha) from normalized 46-feature rows."""
    x = np.atleast_2d(np.asarray(x_norm, dtype=float))
    if x.shape[1] != len(model.normalizer.column_mins):
        raise DimensionMismatch(
            f"expected {len(model.normalizer.column_mins)} features, "
            f"got {x.shape[1]}")
    if model.variant == "dnn":
        raw, _ = nn.forward_batch(model.payload, x)
        raw = np.clip(raw, 0.0, 1.0)
    elif model.variant == "logistic":
        raw = model.payload.predict_raw(x)
    elif model.variant == "svm":
        raw = np.clip(model.payload.predict_raw(x), 0.0, 1.0)
    elif model.variant == "forest":
        raw = baselines.predict_forest_batch(model.payload, x)
    else:
        raise ValueError(f"unknown model variant {model.variant!r}")
    return ingest.denormalize_target(model.normalizer, raw)


def predict_records(model: Model, records) -> np.ndarray:
    x = ingest.feature_matrix(records)
    return predict_model(model, ingest.normalize_features(model.normalizer, x))


# ------------------------------------------------------------ serialization

def _tree_to_dict(node: baselines.TreeNode) -> dict:
    if node.is_leaf:
        return {"value": node.value, "n_samples": node.n_samples}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _tree_to_dict(node.left),
        "right": _tree_to_dict(node.right),
    }


def _tree_from_dict(d: dict) -> baselines.TreeNode:
    if "value" in d:
        return baselines.TreeNode(value=d["value"], n_samples=d["n_samples"])
    return baselines.TreeNode(
        feature=d["feature"],
        threshold=d["threshold"],
        left=_tree_from_dict(d["left"]),
        right=_tree_from_dict(d["right"]),
    )


def _payload_to_dict(model: Model) -> dict:
    p = model.payload
    if model.variant == "dnn":
        return {
            "layer_sizes": list(p.layer_sizes),
            "hidden_activation": p.hidden_activation,
            "weights": [w.tolist() for w in p.weights],
            "biases": [b.tolist() for b in p.biases],
        }
    if model.variant == "logistic":
        return {"weights": p.weights.tolist(), "bias": p.bias}
    if model.variant == "svm":
        return {"weights": p.weights.tolist(), "bias": p.bias,
                "epsilon": p.epsilon, "c": p.c}
    if model.variant == "forest":
        cfg = p.config
        return {
            "n_trees": cfg.n_trees, "max_depth": cfg.max_depth,
            "min_leaf": cfg.min_leaf,
            "features_per_split": cfg.features_per_split,
            "bootstrap": cfg.bootstrap, "seed": cfg.seed,
            "trees": [_tree_to_dict(t) for t in p.trees],
        }
    raise ValueError(f"unknown model variant {model.variant!r}")


def _payload_from_dict(variant: str, d: dict):
    if variant == "dnn":
        return nn.Network(
            layer_sizes=tuple(d["layer_sizes"]),
            weights=[np.array(w, dtype=float) for w in d["weights"]],
            biases=[np.array(b, dtype=float) for b in d["biases"]],
            hidden_activation=d["hidden_activation"],
        )
    if variant == "logistic":
        return baselines.LogisticModel(
            weights=np.array(d["weights"], dtype=float), bias=d["bias"])
    if variant == "svm":
        return baselines.SvmModel(
            weights=np.array(d["weights"], dtype=float), bias=d["bias"],
            epsilon=d["epsilon"], c=d["c"])
    if variant == "forest":
        cfg = baselines.ForestConfig(
            n_trees=d["n_trees"], max_depth=d["max_depth"],
            min_leaf=d["min_leaf"], features_per_split=d["features_per_split"],
            bootstrap=d["bootstrap"], seed=d["seed"])
        return baselines.ForestModel(
            trees=[_tree_from_dict(t) for t in d["trees"]], config=cfg)
    raise ValueError(f"unknown model variant {variant!r}")


def model_to_json(model: Model) -> str:
    norm = model.normalizer
    doc = {
        "schema_version": SCHEMA_VERSION,
        "variant": model.variant,
        "crop": None if model.crop is None else model.crop.name,
        "normalizer": {
            "column_mins": norm.column_mins.tolist(),
            "column_maxs": norm.column_maxs.tolist(),
            "target_min": norm.target_min,
            "target_max": norm.target_max,
        },
        "payload": _payload_to_dict(model),
    }
    return json.dumps(doc, sort_keys=True)


def model_from_json(text: str) -> Model:
    try:
        doc = json.loads(text)
        variant = doc["variant"]
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        norm = ingest.Normalizer(
            column_mins=np.array(doc["normalizer"]["column_mins"], dtype=float),
            column_maxs=np.array(doc["normalizer"]["column_maxs"], dtype=float),
            target_min=doc["normalizer"]["target_min"],
            target_max=doc["normalizer"]["target_max"],
        )
        payload = _payload_from_dict(variant, doc["payload"])
        crop_name = doc.get("crop")
        crop = None if crop_name is None else schema.Crop[crop_name]
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedConfig(f"bad model file: {exc}") from exc
    return Model(variant=variant, payload=payload, normalizer=norm, crop=crop)


def save_model(model: Model, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(model_to_json(model) + "\n")


def load_model(path) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_json(fh.read())
