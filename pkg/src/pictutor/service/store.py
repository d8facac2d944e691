"""Append-only JSONL persistence, one file per session.

Each call hands over complete lines that are written with a single
``write`` and flushed, so a crash between turns leaves a decodable
prefix and the analytics tooling can read logs directly.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Sequence


class UnknownSession(KeyError):
    """No persisted log exists for that session id."""


class SessionStore:
    def __init__(self, data_dir: str | Path) -> None:
        self._dir = Path(data_dir)
        self._dir.mkdir(parents=True, exist_ok=True)

    def path(self, session_id: str) -> Path:
        return self._dir / f"{session_id}.jsonl"

    def create(self, session_id: str, lines: Sequence[str]) -> None:
        path = self.path(session_id)
        if path.exists():
            raise FileExistsError(f"session log already exists: {path}")
        self._write(path, lines, mode="x")

    def append(self, session_id: str, lines: Sequence[str]) -> None:
        if not lines:
            return
        path = self.path(session_id)
        if not path.exists():
            raise UnknownSession(session_id)
        self._write(path, lines, mode="a")

    @staticmethod
    def _write(path: Path, lines: Sequence[str], mode: str) -> None:
        blob = "".join(line + "\n" for line in lines)
        with open(path, mode, encoding="utf-8") as handle:
            handle.write(blob)
            handle.flush()
            os.fsync(handle.fileno())

    def read_text(self, session_id: str) -> str:
        path = self.path(session_id)
        if not path.exists():
            raise UnknownSession(session_id)
        return path.read_text(encoding="utf-8")

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self._dir.glob("*.jsonl"))
