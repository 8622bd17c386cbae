import argparse
from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Coroutine,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from . import util

if TYPE_CHECKING:
    from .core import Engine

Report = Union[str, Mapping[str, Any]]
CommandFunc = Callable[..., Coroutine[Any, Any, Optional[Report]]]
Decorator = Callable[[CommandFunc], CommandFunc]
OptionSpec = Tuple[Tuple[str, ...], Mapping[str, Any]]


def desc(_desc: str) -> Decorator:
    """Sets description on a command function."""

    def desc_decorator(func: CommandFunc) -> CommandFunc:
        setattr(func, "_cmd_description", _desc)
        return func

    return desc_decorator


def usage(_usage: str) -> Decorator:
    """Sets a one-line usage example on a command function."""

    def usage_decorator(func: CommandFunc) -> CommandFunc:
        setattr(func, "_cmd_usage", _usage)
        return func

    return usage_decorator


def alias(*aliases: str) -> Decorator:
    """Sets aliases on a command function."""

    def alias_decorator(func: CommandFunc) -> CommandFunc:
        setattr(func, "_cmd_aliases", aliases)
        return func

    return alias_decorator


def option(*flags: str, **kwargs: Any) -> Decorator:
    """Declares an argument for the command, in ``argparse.add_argument`` form.

    Decorators apply bottom-up, so options are prepended to keep source order.
    """

    def option_decorator(func: CommandFunc) -> CommandFunc:
        specs: List[OptionSpec] = list(getattr(func, "_cmd_options", []))
        specs.insert(0, (flags, kwargs))
        setattr(func, "_cmd_options", specs)
        return func

    return option_decorator


class Command:
    name: str
    desc: Optional[str]
    usage: Optional[str]
    aliases: Sequence[str]
    options: Sequence[OptionSpec]
    plugin: Any
    func: CommandFunc

    def __init__(self, name: str, plugin: Any, func: CommandFunc) -> None:
        self.name = name
        self.desc = getattr(func, "_cmd_description", None)
        self.usage = getattr(func, "_cmd_usage", None)
        self.aliases = getattr(func, "_cmd_aliases", [])
        self.options = getattr(func, "_cmd_options", [])
        self.plugin = plugin
        self.func = func

    def add_to(
        self,
        subparsers: Any,
        parents: Sequence[argparse.ArgumentParser] = (),
    ) -> argparse.ArgumentParser:
        epilog = f"example: gembed {self.usage}" if self.usage else None
        parser = subparsers.add_parser(self.name,
                                       parents=list(parents),
                                       aliases=list(self.aliases),
                                       help=self.desc,
                                       description=self.desc,
                                       epilog=epilog)
        for flags, kwargs in self.options:
            parser.add_argument(*flags, **kwargs)
        parser.set_defaults(command=self.name)
        return parser


# Command invocation context
class Context:
    engine: "Engine"
    cmd: Command
    args: argparse.Namespace
    exit_code: int

    def __init__(self, engine: "Engine", cmd: Command,
                 args: argparse.Namespace) -> None:
        self.engine = engine
        self.cmd = cmd
        self.args = args
        self.exit_code = 0

    @property
    def json(self) -> bool:
        return bool(getattr(self.args, "json", False))

    def option(self, name: str, default: Any = None) -> Any:
        value = getattr(self.args, name, None)
        return default if value is None else value

    async def respond(self, report: Report, *, heading: Optional[str] = None) -> None:
        """Writes a report to the engine's output.

        Reports print as a bullet list, or as JSON under ``--json``.
        """

        if isinstance(report, str):
            text = util.text.to_json({"message": report}) if self.json else report
        elif self.json:
            text = util.text.to_json(report)
        else:
            text = util.text.join_map(report, heading=heading or self.cmd.name)

        await self.engine.write(text)

    def fail(self, reason: str) -> None:
        """Marks the invocation as a failed check; the process exits with status 1."""

        self.cmd.plugin.log.warning(reason)
        self.exit_code = 1


# Options shared by most commands
GROUP = option("--group",
               help="group spec: inline JSON or a file (or 'group' in --config)")
OMEGA = option("--omega", type=int, help="tensor power")
VECTORS = option("--vectors",
                 required=True,
                 help="delimiter-separated file, one point per row")
SEED = option("--seed", type=int, help="non-negative integer seed")
EPSILON = option("--epsilon", type=float, help="distortion budget in (0, 1)")
BETA = option("--beta", type=float, help="failure probability in (0, 1)")
