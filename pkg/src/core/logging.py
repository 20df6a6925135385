"""Logging setup shared by the CLI and the HTTP service."""

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | int = logging.WARNING) -> None:
    """Install a single stderr handler on the ``src`` logger tree.

    Calling it again replaces the handler with one bound to the current
    ``sys.stderr``, so repeated CLI invocations in one process (tests) do not
    stack handlers. The old handler is dropped without flushing its stream,
    which may already be closed.
    """
    logger = logging.getLogger("src")
    logger.setLevel(level)
    for stale in [h for h in logger.handlers if getattr(h, "_cct_handler", False)]:
        logger.removeHandler(stale)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._cct_handler = True  # type: ignore[attr-defined]
    logger.addHandler(handler)
