"""Tests for the shared logging setup."""

import io
import logging

from src.core.logging import configure_logging


def _tagged_handlers():
    return [
        handler
        for handler in logging.getLogger("src").handlers
        if getattr(handler, "_cct_handler", False)
    ]


class TestConfigureLogging:
    def test_reconfigure_after_stream_closed(self, monkeypatch):
        """Test a second call survives the first stderr being closed."""
        first = io.StringIO()
        monkeypatch.setattr("sys.stderr", first)
        configure_logging(logging.INFO)
        first.close()

        second = io.StringIO()
        monkeypatch.setattr("sys.stderr", second)
        configure_logging(logging.INFO)
        logging.getLogger("src.services").info("after reconfigure")

        assert len(_tagged_handlers()) == 1
        assert "after reconfigure" in second.getvalue()

    def test_level_is_updated(self):
        """Test the level follows the latest call."""
        configure_logging("DEBUG")
        assert logging.getLogger("src").level == logging.DEBUG

        configure_logging(logging.WARNING)
        assert logging.getLogger("src").level == logging.WARNING
