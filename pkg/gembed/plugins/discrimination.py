from typing import Any, ClassVar, MutableMapping

from gembed import command, discrim, plugin, util
from gembed.invariant import InvariantMap


class Discrimination(plugin.Plugin):
    name: ClassVar[str] = "Discrimination"

    @command.desc("Measure the discriminability constant of a dataset's canonical "
                  "representatives")
    @command.usage("delta --group '{\"type\": \"cyclic\", \"n\": 8}' --omega 2 "
                   "--vectors points.csv --table")
    @command.GROUP
    @command.OMEGA
    @command.VECTORS
    @command.option("--table",
                    action="store_true",
                    help="also report every pair's kernel fraction")
    async def cmd_delta(self, ctx: command.Context) -> MutableMapping[str, Any]:
        group, _, config = await self.group(ctx)
        points = await self.points(ctx, group.n)

        canon = await util.run_sync(discrim.reduce_dataset, points, group)
        inv = await util.run_timed(self.log, "Orbit enumeration",
                                   InvariantMap.from_group, group, config.omega,
                                   config.caps.tuple_cap)
        report = await util.run_timed(self.log, "Pairwise kernel energies",
                                      discrim.compute_delta, canon, inv,
                                      bool(ctx.option("table")))

        result: MutableMapping[str, Any] = {
            "k": canon.k,
            "omega": config.omega,
            "kappa": inv.kappa,
            "delta": report.delta,
            "argmax_pair": list(report.argmax_pair),
            "discriminable": report.discriminable,
        }
        if report.per_pair is not None:
            if ctx.json:
                result["pairs"] = [p._asdict() for p in report.per_pair]
            else:
                result["pairs"] = [
                    f"({p.i}, {p.j}) {p.delta_fraction!r}" for p in report.per_pair
                ]

        return result

    @command.desc("Reduce a dataset to one canonical representative per group orbit")
    @command.usage("dedup --group '{\"type\": \"cyclic\", \"n\": 8}' "
                   "--vectors points.csv")
    @command.alias("canonicalize")
    @command.GROUP
    @command.VECTORS
    async def cmd_dedup(self, ctx: command.Context) -> MutableMapping[str, Any]:
        group, _, _ = await self.group(ctx)
        points = await self.points(ctx, group.n)
        canon = await util.run_timed(self.log, "Canonicalization",
                                     discrim.reduce_dataset, points, group)

        fixed = sum(canon.fixed_flags)
        if fixed:
            self.log.info("%d representatives are fixed by a non-identity element",
                          fixed)

        report: MutableMapping[str, Any] = {
            "inputs": canon.inputs,
            "k": canon.k,
            "class_sizes": canon.class_sizes,
            "group_order": group.order,
            "reduction_factor": canon.reduction_factor,
            "fixed_points": fixed,
        }
        if ctx.json:
            report["representatives"] = [list(map(float, rep)) for rep in canon.reps]
            report["members"] = canon.members
            report["orbit_sizes"] = canon.orbit_sizes

        return report

    @command.desc("Estimate the box-counting dimension of a point cloud")
    @command.usage("boxdim --vectors cloud.csv --ladder 0.5,0.25,0.125,0.0625")
    @command.VECTORS
    @command.option("--ladder",
                    help="comma-separated decreasing scales "
                    "(default 2^-1 down to 2^-6)")
    async def cmd_boxdim(self, ctx: command.Context) -> MutableMapping[str, Any]:
        points = await self.points(ctx)
        if ctx.option("ladder"):
            ladder = self.list_option(ctx, "ladder", float)
        else:
            ladder = discrim.dyadic_ladder(1, 6)

        estimate = await util.run_sync(discrim.estimate_box_dimension, points, ladder)
        return {
            "points": len(points),
            "epsilons": estimate.epsilons,
            "counts": estimate.counts,
            "slope": estimate.slope,
            "r2": estimate.r2,
        }
