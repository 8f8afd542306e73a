"""HTTP service wrapping the solver."""

from .app import app, create_app

__all__ = ["app", "create_app"]
