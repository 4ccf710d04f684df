"""HTTP facade for live screening sessions."""

from .app import create_app
from .config import ServiceConfig
from .registry import ModelRegistry
from .store import SessionStore, UnknownSessionError

__all__ = [
    "ModelRegistry",
    "ServiceConfig",
    "SessionStore",
    "UnknownSessionError",
    "create_app",
]
