"""Append-only journal storage.

Every mutation is appended to disk before in-memory state changes, so a
restart can reconstruct sessions by engine replay and the registry by event
replay. Failed appends surface as StorageError and leave memory untouched.
"""

from __future__ import annotations

import io
import json
import zipfile
from pathlib import Path


class StorageError(RuntimeError):
    """Disk write failed; the in-memory state was not changed."""


class Store:
    def __init__(self, root: Path):
        self.root = Path(root)
        self.sessions_dir = self.root / "sessions"
        self.models_dir = self.root / "models"
        self.registry_path = self.root / "registry.jsonl"
        self.comments_path = self.root / "comments.jsonl"
        try:
            self.sessions_dir.mkdir(parents=True, exist_ok=True)
            self.models_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create storage directory: {exc}") from exc

    def _append(self, path: Path, record: dict) -> None:
        try:
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
                fh.flush()
        except OSError as exc:
            raise StorageError(f"journal append failed: {exc}") from exc

    @staticmethod
    def _read_lines(path: Path) -> list[dict]:
        if not path.is_file():
            return []
        records = []
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line:
                records.append(json.loads(line))
        return records

    # -- registry ----------------------------------------------------------

    def append_registry(self, record: dict) -> None:
        self._append(self.registry_path, record)

    def read_registry(self) -> list[dict]:
        return self._read_lines(self.registry_path)

    # -- sessions ----------------------------------------------------------

    def session_path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.jsonl"

    def append_session(self, session_id: str, record: dict) -> None:
        self._append(self.session_path(session_id), record)

    def read_session(self, session_id: str) -> list[dict]:
        return self._read_lines(self.session_path(session_id))

    def list_sessions(self) -> list[str]:
        return sorted(p.stem for p in self.sessions_dir.glob("*.jsonl"))

    # -- comments ----------------------------------------------------------

    def append_comment(self, record: dict) -> None:
        self._append(self.comments_path, record)

    def read_comments(self) -> list[dict]:
        return self._read_lines(self.comments_path)

    # -- model bundles -----------------------------------------------------

    def unpack_bundle(self, data: bytes) -> Path:
        """Unpack an uploaded zip (manifest + sources) into a staging directory."""
        try:
            bundle = zipfile.ZipFile(io.BytesIO(data))
        except zipfile.BadZipFile as exc:
            raise ValueError(f"not a zip archive: {exc}") from exc
        staging = self.models_dir / "_incoming"
        try:
            if staging.exists():
                _rmtree(staging)
            staging.mkdir(parents=True)
            for info in bundle.infolist():
                target = staging / info.filename
                resolved = target.resolve()
                if not str(resolved).startswith(str(staging.resolve())):
                    raise ValueError(f"bundle entry escapes the archive: {info.filename}")
                if info.is_dir():
                    resolved.mkdir(parents=True, exist_ok=True)
                    continue
                resolved.parent.mkdir(parents=True, exist_ok=True)
                resolved.write_bytes(bundle.read(info))
        except OSError as exc:
            raise StorageError(f"cannot unpack bundle: {exc}") from exc
        return staging

    def promote_bundle(self, staging: Path, model_id: str, version: str) -> Path:
        final = self.models_dir / model_id / version
        try:
            final.parent.mkdir(parents=True, exist_ok=True)
            if final.exists():
                _rmtree(final)
            staging.rename(final)
        except OSError as exc:
            raise StorageError(f"cannot store bundle: {exc}") from exc
        return final


def _rmtree(path: Path) -> None:
    import shutil

    shutil.rmtree(path)
