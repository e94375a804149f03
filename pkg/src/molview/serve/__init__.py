"""WebSocket geometry streaming service and wire protocol."""

from . import protocol
from .client import WireClient
from .server import DEFAULT_BIND, SceneService, ServeHandle, serve

__all__ = ["serve", "ServeHandle", "SceneService", "WireClient",
           "protocol", "DEFAULT_BIND"]
