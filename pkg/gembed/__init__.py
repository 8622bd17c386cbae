import asyncio
import logging
import os
import sys
from typing import Optional, Sequence

import aiorun
import colorlog
from dotenv import load_dotenv

from .core import Engine

aiorun.logger.disabled = True

log = logging.getLogger("launch")


def setup_log(level: int = logging.INFO) -> None:
    """Configures logging"""
    logging.root.setLevel(level)

    # Color log config
    log_color: bool = os.environ.get("LOG_COLOR") in {"enable", "1", "true"}

    if log_color:
        formatter = colorlog.ColoredFormatter(
            "  %(log_color)s%(levelname)-7s%(reset)s  |  "
            "%(name)-11s  |  %(log_color)s%(message)s%(reset)s")
    else:
        formatter = logging.Formatter(
            "  %(levelname)-7s  |  %(name)-11s  |  %(message)s")
    stream = logging.StreamHandler(sys.stderr)
    stream.setFormatter(formatter)

    root = logging.getLogger()
    root.setLevel(level)
    root.addHandler(stream)


def start(argv: Optional[Sequence[str]] = None) -> None:
    """Main entry point for the CLI."""
    load_dotenv("config.env")
    setup_log()

    try:
        import uvloop
    except ImportError:
        pass
    else:
        uvloop.install()
        log.debug("Using uvloop event loop")

    exit_code = 0
    loop = asyncio.new_event_loop()

    async def main() -> None:
        nonlocal exit_code

        args = sys.argv[1:] if argv is None else argv
        engine = await Engine.init_and_run(args, loop=loop)
        exit_code = engine.exit_code

    aiorun.run(main(), loop=loop)
    sys.exit(exit_code)
