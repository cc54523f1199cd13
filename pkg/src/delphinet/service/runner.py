"""Entry point for the ``delphinet-server`` executable."""

from __future__ import annotations

import argparse

import uvicorn

from .app import create_app
from .config import load_config


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(
        prog="delphinet-server",
        description="Run the group-elicitation HTTP service.",
    )
    parser.add_argument("--config", help="path to a YAML config file")
    parser.add_argument("--host", help="bind address (overrides config)")
    parser.add_argument("--port", type=int, help="bind port (overrides config)")
    args = parser.parse_args(argv)

    config = load_config(args.config)
    app = create_app(config)
    uvicorn.run(
        app,
        host=args.host or config.host,
        port=args.port or config.port,
        log_level="info",
    )


if __name__ == "__main__":
    main()
