from typing import Any, ClassVar, MutableMapping

from gembed import command, orbit, plugin, util
from gembed.group import describe


class Groups(plugin.Plugin):
    name: ClassVar[str] = "Groups"

    @command.desc("Describe a group: order, point count, generators and transitivity")
    @command.usage("group --group '{\"type\": \"sym_subsets\", \"l\": 4, \"w\": 2}'")
    @command.GROUP
    async def cmd_group(self, ctx: command.Context) -> MutableMapping[str, Any]:
        group, labels, _ = await self.group(ctx)
        return describe(group, labels)

    @command.desc("Enumerate tuple orbits and check the count with Burnside's lemma")
    @command.usage("orbits --group '{\"type\": \"cyclic\", \"n\": 4}' --omega 2 "
                   "--export")
    @command.GROUP
    @command.OMEGA
    @command.option("--export", action="store_true", help="also print the orbit table")
    async def cmd_orbits(self, ctx: command.Context) -> None:
        group, _, config = await self.group(ctx)
        orbits = await util.run_timed(self.log, "Orbit enumeration",
                                      orbit.enumerate_orbits, group, config.omega,
                                      config.caps.tuple_cap)
        burnside = orbit.burnside_count(group, config.omega)

        report: MutableMapping[str, Any] = {
            "n": group.n,
            "order": group.order,
            "omega": config.omega,
            "kappa": orbits.kappa,
            "burnside": burnside,
        }
        matches = orbits.kappa == burnside
        spec = config.group_spec
        if spec.get("type") == "sym_subsets" and spec.get("w") == 2:
            by_partition = orbit.partition_burnside_count(spec["l"], config.omega)
            report["partition_count"] = by_partition
            matches = matches and by_partition == burnside

        report["status"] = "OK" if matches else "MISMATCH"
        if not matches:
            ctx.fail(f"Enumerated {orbits.kappa} orbits but Burnside counts {burnside}")

        table = orbit.orbit_table(orbits) if ctx.option("export") else None
        if table is not None and ctx.json:
            report["table"] = table

        await ctx.respond(report)
        if table is not None and not ctx.json:
            lines = (f"{row['id']}\t{row['size']}\t{tuple(row['rep'])}"
                     for row in table)
            await self.engine.write("\n".join(lines))
