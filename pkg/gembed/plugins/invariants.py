from typing import ClassVar, Optional

from gembed import command, plugin, util
from gembed.invariant import InvariantMap, apply_invariant, stacked_invariant


class Invariants(plugin.Plugin):
    name: ClassVar[str] = "Invariants"

    @command.desc("Evaluate the orbit-sum invariant of each input vector")
    @command.usage("invariant --group '{\"type\": \"cyclic\", \"n\": 6}' --omega 2 "
                   "--vectors points.csv")
    @command.GROUP
    @command.OMEGA
    @command.VECTORS
    @command.option("--stack",
                    help="comma-separated tensor powers to concatenate, e.g. 1,2")
    @command.option("--out", help="write the vectors here instead of stdout")
    async def cmd_invariant(self, ctx: command.Context) -> None:
        group, _, config = await self.group(ctx)
        points = await self.points(ctx, group.n)
        tuple_cap = config.caps.tuple_cap

        stack = ctx.option("stack")
        if stack:
            omegas = self.list_option(ctx, "stack", int)
            rows = []
            for a in points:
                stacked = await util.run_sync(stacked_invariant, group, a, omegas,
                                              tuple_cap)
                rows.append(stacked.z)
        else:
            imap = await util.run_timed(self.log, "Orbit enumeration",
                                        InvariantMap.from_group, group, config.omega,
                                        tuple_cap)
            rows = await util.run_timed(self.log, "Invariant evaluation", _apply_all,
                                        imap, points)

        kappa = len(rows[0]) if len(rows) else 0
        await self.emit(ctx, kappa, rows)

    async def emit(self, ctx: command.Context, kappa: int, rows: list) -> None:
        out: Optional[str] = ctx.option("out")
        if ctx.json and not out:
            vectors = [list(map(float, r)) for r in rows]
            await ctx.respond({"kappa": kappa, "vectors": vectors})
            return

        text = util.vectors.format_vectors(rows, header=f"kappa={kappa}")
        if out:
            await util.vectors.write_text(out, text)
            self.log.info("Wrote %d invariant vectors to '%s'", len(rows), out)
        else:
            await self.engine.write(text)


def _apply_all(inv: InvariantMap, points: list) -> list:
    return [apply_invariant(inv, a).z for a in points]
