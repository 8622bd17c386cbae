import argparse
from typing import TYPE_CHECKING, Any, MutableMapping

from gembed import command, plugin, util
from gembed.error import CommandInvokeError, ExistingCommandError, GembedError

from .mixin_base import EngineMixinBase

if TYPE_CHECKING:
    from .engine import Engine


class CommandDispatcher(EngineMixinBase):
    # Initialized during instantiation
    commands: MutableMapping[str, command.Command]

    def __init__(self: "Engine", **kwargs: Any) -> None:
        # Initialize command map
        self.commands = {}

        # Propagate initialization to other mixins
        super().__init__(**kwargs)

    def register_command(self: "Engine", plug: plugin.Plugin, name: str,
                         func: command.CommandFunc) -> None:
        cmd = command.Command(name, plug, func)

        for key in (name, *cmd.aliases):
            if key in self.commands:
                raise ExistingCommandError(self.commands[key], cmd, alias=key != name)

        for key in (name, *cmd.aliases):
            self.commands[key] = cmd

    def unregister_command(self: "Engine", cmd: command.Command) -> None:
        for key in (cmd.name, *cmd.aliases):
            if self.commands.get(key) is cmd:
                del self.commands[key]

    def register_commands(self: "Engine", plug: plugin.Plugin) -> None:
        funcs = util.misc.find_prefixed_funcs(plug, "cmd_",
                                              rename=util.misc.command_name)
        try:
            for name, func in funcs:
                self.register_command(plug, name, func)
        except Exception:
            self.unregister_commands(plug)
            raise

    def unregister_commands(self: "Engine", plug: plugin.Plugin) -> None:
        owned = {id(cmd): cmd for cmd in self.commands.values() if cmd.plugin is plug}
        for cmd in owned.values():
            self.unregister_command(cmd)

    async def invoke_command(self: "Engine", args: argparse.Namespace) -> int:
        """Runs the parsed command and maps its outcome onto an exit code."""

        cmd = self.commands[args.command]
        ctx = command.Context(self, cmd, args)

        try:
            ret = await cmd.func(ctx)

            # Response shortcut
            if ret is not None:
                await ctx.respond(ret)
        except GembedError as e:
            cmd.plugin.log.error(util.error.describe(e))
            return e.exit_code
        except Exception as e:  # skipcq: PYL-W0703
            constructor = CommandInvokeError(
                f"raised from {type(e).__name__}: {str(e)}"
            ).with_traceback(e.__traceback__)
            cmd.plugin.log.error("Error in command '%s'", cmd.name,
                                 exc_info=constructor)
            self.log.debug(util.error.format_exception(e))
            return util.error.exit_code_of(constructor)

        return ctx.exit_code
