import asyncio
import logging
from typing import Mapping, Optional, Sequence, TextIO

from .cli_frontend import CliFrontend
from .command_dispatcher import CommandDispatcher
from .event_dispatcher import EventDispatcher
from .plugin_extender import PluginExtender
from .store_provider import StoreProvider


class Engine(CliFrontend, StoreProvider, PluginExtender, CommandDispatcher,
             EventDispatcher):
    # Initialized during instantiation
    log: logging.Logger
    loop: asyncio.AbstractEventLoop
    loaded: bool
    stopping: bool
    exit_code: int

    def __init__(self,
                 *,
                 output: Optional[TextIO] = None,
                 environ: Optional[Mapping[str, str]] = None) -> None:
        self.log = logging.getLogger("engine")
        self.loop = asyncio.get_event_loop()
        self.loaded = False
        self.stopping = False
        self.exit_code = 0

        # Initialize mixins
        super().__init__(output=output, environ=environ)

    async def load(self) -> None:
        if self.loaded:
            return

        self.load_all_plugins()
        await self.dispatch_event("load")
        self.loaded = True

    async def invoke(self, argv: Sequence[str]) -> int:
        """Runs one command line and returns its exit code."""

        await self.load()
        try:
            args = self.parse(argv)
        except SystemExit as e:
            if isinstance(e.code, int):
                self.exit_code = e.code
            else:
                self.exit_code = 0 if e.code is None else 2
            return self.exit_code

        self.apply_verbosity(args)
        self.exit_code = await self.invoke_command(args)
        return self.exit_code

    @classmethod
    async def init_and_run(
        cls,
        argv: Sequence[str],
        *,
        loop: Optional[asyncio.AbstractEventLoop] = None,
    ) -> "Engine":
        engine = None

        if loop:
            asyncio.set_event_loop(loop)

        try:
            engine = cls()
            await engine.invoke(argv)
            return engine
        finally:
            if engine is not None:
                await engine.stop()
            asyncio.get_event_loop().stop()

    async def stop(self) -> None:
        self.stopping = True

        if self.loaded:
            await self.dispatch_event("stop")
            self.unload_all_plugins()
            self.loaded = False
