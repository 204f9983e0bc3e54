"""HTTP service wrapping the solver and comparison harness."""

from .app import app, create_app

__all__ = ["app", "create_app"]
