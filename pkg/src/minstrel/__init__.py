"""Structural prompt toolkit: document model, agents, pipeline, service."""

__version__ = "0.1.0"
