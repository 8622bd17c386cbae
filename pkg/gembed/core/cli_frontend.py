import argparse
import logging
import sys
from typing import TYPE_CHECKING, Any, Mapping, Optional, Sequence, TextIO

from gembed import util
from gembed.error import ConfigError

from .mixin_base import EngineMixinBase

if TYPE_CHECKING:
    from gembed.command import Context

    from .engine import Engine


class CliFrontend(EngineMixinBase):
    # Initialized during instantiation
    output: TextIO
    _parser: Optional[argparse.ArgumentParser]

    def __init__(self: "Engine", *, output: Optional[TextIO] = None,
                 **kwargs: Any) -> None:
        self.output = output or sys.stdout
        self._parser = None

        # Propagate initialization to other mixins
        super().__init__(**kwargs)

    def _common_options(self: "Engine") -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--json", action="store_true", help="emit reports as JSON")
        common.add_argument("--config",
                            help="JSON object or file with pipeline settings")
        verbosity = common.add_mutually_exclusive_group()
        verbosity.add_argument("-v", "--verbose", action="store_true",
                               help="log debug messages")
        verbosity.add_argument("-q", "--quiet", action="store_true",
                               help="log warnings and errors only")
        return common

    @property
    def parser(self: "Engine") -> argparse.ArgumentParser:
        if self._parser is None:
            parser = argparse.ArgumentParser(prog="gembed",
                                             description="Group-invariant embeddings")
            subparsers = parser.add_subparsers(dest="command", metavar="<command>")
            subparsers.required = True
            parents = [self._common_options()]
            for name, cmd in sorted(self.commands.items()):
                # Aliases are registered through their command
                if name == cmd.name:
                    cmd.add_to(subparsers, parents)

            self._parser = parser

        return self._parser

    def parse(self: "Engine", argv: Sequence[str]) -> argparse.Namespace:
        """Parses ``argv``; usage errors raise ``SystemExit`` with status 2."""

        args = self.parser.parse_args(list(argv))
        # Aliases dispatch to their command
        args.command = self.commands[args.command].name
        return args

    def apply_verbosity(self: "Engine", args: argparse.Namespace) -> None:
        if getattr(args, "verbose", False):
            level = logging.DEBUG
        elif getattr(args, "quiet", False):
            level = logging.WARNING
        else:
            level = logging.INFO

        logging.getLogger().setLevel(level)

    async def file_config(self: "Engine",
                          ctx: "Context") -> Optional[Mapping[str, Any]]:
        path = ctx.option("config")
        if not path:
            return None

        return await util.config.load_json_arg(path, what="config", error=ConfigError)

    async def write(self: "Engine", text: str) -> None:
        self.output.write(text + "\n")
        self.output.flush()
