from collections import defaultdict
from typing import ClassVar, MutableMapping, Optional

from gembed import command, listener, plugin, util


class Core(plugin.Plugin):
    name: ClassVar[str] = "Core"

    @listener.priority(0)
    async def on_load(self) -> None:
        commands = {cmd.name for cmd in self.engine.commands.values()}
        self.log.debug("%d plugins ready with %d commands", len(self.engine.plugins),
                       len(commands))

    @command.desc("List the available commands, or describe one")
    @command.usage("help orbits")
    @command.option("topic", nargs="?", help="command or plugin name")
    async def cmd_help(self, ctx: command.Context) -> Optional[str]:
        topic = ctx.option("topic")
        if topic:
            cmd = self.engine.commands.get(topic)
            if cmd is not None:
                details = {
                    "plugin": cmd.plugin.name,
                    "description": cmd.desc or "No description provided",
                }
                if cmd.usage:
                    details["usage"] = "gembed " + cmd.usage
                if cmd.aliases:
                    details["aliases"] = ", ".join(cmd.aliases)
                await ctx.respond(details, heading=cmd.name)
                return None

        plugins: MutableMapping[str, MutableMapping[str, str]] = defaultdict(dict)
        for name, cmd in self.engine.commands.items():
            # Aliases are listed with their command
            if name != cmd.name:
                continue
            if topic and cmd.plugin.name.lower() != topic.lower():
                continue

            aliases = f" (aliases: {', '.join(cmd.aliases)})" if cmd.aliases else ""
            desc = cmd.desc or "No description provided"
            plugins[cmd.plugin.name][cmd.name] = desc + aliases

        if not plugins:
            self.log.error("Unknown command or plugin '%s'", topic)
            ctx.exit_code = 2
            return None

        if ctx.json:
            await ctx.respond(
                {name: dict(sorted(cmds.items())) for name, cmds in plugins.items()})
            return None

        return "\n\n".join(util.text.join_map(dict(sorted(cmds.items())), heading=name)
                           for name, cmds in sorted(plugins.items()))
