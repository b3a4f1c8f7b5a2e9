"""Server configuration: config file plus environment overrides.

Precedence: explicit arguments > environment (GAVEL_*) > config file >
defaults.  The config file is JSON, e.g.::

    {"data_dir": "/var/lib/gavel", "host": "0.0.0.0", "port": 8440,
     "extension": {"initial_guard_ms": 180000, "decay": "1/2", "floor_ms": 5000}}
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..config import ExtensionPolicy
from ..config import _parse_fraction  # shared ratio parsing

ENV_PREFIX = "GAVEL_"


@dataclass(frozen=True)
class ServerSettings:
    data_dir: Path = Path("./gavel-data")
    host: str = "127.0.0.1"
    port: int = 8440
    default_extension: ExtensionPolicy = field(default_factory=ExtensionPolicy)

    @classmethod
    def load(
        cls,
        config_file: str | os.PathLike | None = None,
        env: dict[str, str] | None = None,
        **overrides,
    ) -> ServerSettings:
        env = os.environ if env is None else env
        raw: dict = {}
        path = config_file or env.get(ENV_PREFIX + "CONFIG")
        if path:
            raw = json.loads(Path(path).read_text())
        data_dir = overrides.get("data_dir") or env.get(ENV_PREFIX + "DATA_DIR") or raw.get("data_dir") or cls.data_dir
        host = overrides.get("host") or env.get(ENV_PREFIX + "HOST") or raw.get("host") or cls.host
        port = int(overrides.get("port") or env.get(ENV_PREFIX + "PORT") or raw.get("port") or cls.port)
        ext_raw = raw.get("extension", {})
        extension = ExtensionPolicy(
            initial_guard_ms=int(ext_raw.get("initial_guard_ms", ExtensionPolicy.initial_guard_ms)),
            decay=_parse_fraction(ext_raw.get("decay", ExtensionPolicy.decay)),
            floor_ms=int(ext_raw.get("floor_ms", ExtensionPolicy.floor_ms)),
        )
        return cls(data_dir=Path(data_dir), host=host, port=port, default_extension=extension)
