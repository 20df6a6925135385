"""
Artifacts repository: thin file-access layer for scenario configs and results.

The CLI and services depend on the repository via DI rather than touching
files directly, so tests can swap in an in-memory fake.
"""

from __future__ import annotations

import csv
import json
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any, Protocol, TextIO

from pydantic import BaseModel

from src.core.errors import ConfigInvalid
from src.models.simulation import SimConfig
from src.services.icebergsim import IcebergSimulationService

STDOUT = "-"


class ArtifactRepository(Protocol):
    def load_sim_config(self, path: str) -> SimConfig: ...

    def write_csv(self, path: str, rows: Sequence[Mapping[str, str]]) -> None: ...

    def write_json(self, path: str, model: BaseModel) -> None: ...


class FileArtifactRepository:
    """Reads and writes artifacts on the local filesystem; ``-`` is stdout."""

    def __init__(self, stdout: TextIO | None = None) -> None:
        self._stdout = stdout

    def load_sim_config(self, path: str) -> SimConfig:
        try:
            data: Any = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigInvalid(f"Cannot read {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"{path} is not valid JSON: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ConfigInvalid(f"{path} must hold a JSON object")
        return IcebergSimulationService.load_config(data)

    def write_csv(self, path: str, rows: Sequence[Mapping[str, str]]) -> None:
        if not rows:
            return
        with self._open(path) as handle:
            writer = csv.DictWriter(
                handle, fieldnames=list(rows[0]), lineterminator="\n"
            )
            writer.writeheader()
            writer.writerows(rows)

    def write_json(self, path: str, model: BaseModel) -> None:
        with self._open(path) as handle:
            handle.write(model.model_dump_json(indent=2))
            handle.write("\n")

    def _open(self, path: str) -> _Target:
        if path == STDOUT:
            return _Target(self._stdout or sys.stdout, close=False)
        return _Target(Path(path).open("w", encoding="utf-8", newline=""), close=True)


class _Target:
    """Context manager that leaves stdout open."""

    def __init__(self, handle: TextIO, close: bool) -> None:
        self.handle = handle
        self.close = close

    def __enter__(self) -> TextIO:
        return self.handle

    def __exit__(self, *exc_info: object) -> None:
        if self.close:
            self.handle.close()
