import asyncio
import functools
import logging
from typing import Any, Callable, TypeVar

from .time import Stopwatch

Result = TypeVar("Result")


async def run_sync(func: Callable[..., Result], *args: Any, **kwargs: Any) -> Result:
    """Runs the given sync function (optionally with arguments) on a separate thread."""

    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(None, functools.partial(func, *args, **kwargs))


async def run_timed(log: logging.Logger, label: str, func: Callable[..., Result],
                    *args: Any, **kwargs: Any) -> Result:
    """:func:`run_sync`, logging how long ``label`` took."""

    watch = Stopwatch()
    try:
        return await run_sync(func, *args, **kwargs)
    finally:
        watch.stop()
        log.debug("%s took %s", label, watch)
