"""Multiplayer drawing game where humans race a streaming sketch classifier."""

__version__ = "0.1.0"
