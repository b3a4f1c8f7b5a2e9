"""Run the auction server: ``python -m gavel.server`` or ``gavel-server``."""

from __future__ import annotations

import argparse
import logging

import uvicorn

from .app import create_app
from .settings import ServerSettings


def main() -> None:
    parser = argparse.ArgumentParser(prog="gavel-server", description="Run the auction server.")
    parser.add_argument("--config", help="path to a JSON config file")
    parser.add_argument("--data-dir", help="event log directory")
    parser.add_argument("--host", help="listen address")
    parser.add_argument("--port", type=int, help="listen port")
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    overrides = {k: v for k, v in vars(args).items() if k in ("data_dir", "host", "port") and v}
    settings = ServerSettings.load(config_file=args.config, **overrides)
    app = create_app(settings)
    uvicorn.run(app, host=settings.host, port=settings.port, log_level="info")


if __name__ == "__main__":
    main()
