"""Service configuration, settable via flags or environment."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class ServiceConfig:
    """Where the service keeps state and how it listens.

    ``api_token`` None disables authentication; otherwise every request must
    carry the token in the ``x-api-token`` header.
    """

    data_dir: Path
    manifest_path: Path | None = None
    api_token: str | None = None
    host: str = "127.0.0.1"
    port: int = 8000

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        """Environment defaults: DYSCREEN_DATA_DIR etc.; kwargs win."""
        values = {
            "data_dir": Path(os.environ.get("DYSCREEN_DATA_DIR", "./dyscreen-data")),
            "manifest_path": (
                Path(os.environ["DYSCREEN_MANIFEST"])
                if "DYSCREEN_MANIFEST" in os.environ
                else None
            ),
            "api_token": os.environ.get("DYSCREEN_API_TOKEN"),
            "host": os.environ.get("DYSCREEN_HOST", "127.0.0.1"),
            "port": int(os.environ.get("DYSCREEN_PORT", "8000")),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
