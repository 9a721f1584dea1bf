"""Forwarding engine"""

from app.framework.engine.forwarder import Face, Forwarder

__all__ = ["Face", "Forwarder"]
