"""Service configuration: one JSON file, overridable by environment variables."""

from __future__ import annotations

import json
import os
import secrets
from dataclasses import dataclass, field
from pathlib import Path

ENV_PREFIX = "POLICYSPACE_"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    storage_dir: Path = Path("storage")
    admin_token: str = field(default_factory=lambda: secrets.token_urlsafe(32))
    preload_models: list[str] = field(default_factory=list)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "ServiceConfig":
        data: dict = {}
        if path is not None:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        config = cls(
            host=data.get("host", "127.0.0.1"),
            port=int(data.get("port", 8000)),
            storage_dir=Path(data.get("storage_dir", "storage")),
            preload_models=list(data.get("preload_models", [])),
        )
        if "admin_token" in data:
            config.admin_token = str(data["admin_token"])
        if ENV_PREFIX + "HOST" in os.environ:
            config.host = os.environ[ENV_PREFIX + "HOST"]
        if ENV_PREFIX + "PORT" in os.environ:
            config.port = int(os.environ[ENV_PREFIX + "PORT"])
        if ENV_PREFIX + "STORAGE" in os.environ:
            config.storage_dir = Path(os.environ[ENV_PREFIX + "STORAGE"])
        if ENV_PREFIX + "ADMIN_TOKEN" in os.environ:
            config.admin_token = os.environ[ENV_PREFIX + "ADMIN_TOKEN"]
        return config
