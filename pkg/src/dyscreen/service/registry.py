"""Content-addressed model registry with per-variant atomic activation."""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path

from ..core.variants import LIVE_VARIANTS
from ..errors import ArtifactError
from ..forest.artifact import deserialize_model, serialize_model
from ..forest.model import ForestModel

_LIVE_NAMES = tuple(LIVE_VARIANTS)


class ModelRegistry:
    """Stores artifacts by content hash; one active model per live variant.

    Activation swaps a single dict entry, so a finalization that already took
    its model reference keeps using it.
    """

    def __init__(self, models_dir: str | Path):
        self.models_dir = Path(models_dir)
        self.models_dir.mkdir(parents=True, exist_ok=True)
        self.active_path = self.models_dir / "active.json"
        self._lock = threading.Lock()
        self._active: dict[str, tuple[str, ForestModel]] = {}
        self._load()

    def _load(self) -> None:
        if not self.active_path.exists():
            return
        pointers = json.loads(self.active_path.read_text(encoding="utf-8"))
        for variant_name, version in pointers.items():
            artifact = (self.models_dir / f"{version}.json").read_bytes()
            self._active[variant_name] = (version, deserialize_model(artifact))

    def activate(self, artifact_bytes: bytes) -> tuple[str, str]:
        """Validate, persist, and make active; returns (version, variant name)."""
        model = deserialize_model(artifact_bytes)
        if model.variant.name not in _LIVE_NAMES:
            raise ArtifactError(
                f"variant {model.variant.name!r} is not live "
                f"(expected one of {', '.join(_LIVE_NAMES)})"
            )
        canonical = serialize_model(model)
        version = hashlib.sha256(canonical).hexdigest()
        artifact_path = self.models_dir / f"{version}.json"
        if not artifact_path.exists():
            artifact_path.write_bytes(canonical)
        with self._lock:
            self._active[model.variant.name] = (version, model)
            pointers = {name: ver for name, (ver, _) in self._active.items()}
            tmp = self.active_path.with_suffix(".tmp")
            tmp.write_text(json.dumps(pointers, sort_keys=True, indent=2), encoding="utf-8")
            os.replace(tmp, self.active_path)
        return version, model.variant.name

    def active(self, variant_name: str) -> tuple[str, ForestModel] | None:
        return self._active.get(variant_name)

    def info(self) -> dict[str, dict | None]:
        out: dict[str, dict | None] = {}
        for name in _LIVE_NAMES:
            entry = self._active.get(name)
            if entry is None:
                out[name] = None
            else:
                version, model = entry
                out[name] = {
                    "version": version,
                    "threshold": model.threshold,
                    "n_trees": len(model.trees),
                }
        return out
