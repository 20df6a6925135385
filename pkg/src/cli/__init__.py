"""Command-line interface."""

from src.cli.app import app, dispatch, main

__all__ = ["app", "dispatch", "main"]
