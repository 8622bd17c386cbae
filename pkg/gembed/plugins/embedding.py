from typing import Any, ClassVar, MutableMapping, Optional

from gembed import command, discrim, embed, pipeline, plugin, util
from gembed.invariant import InvariantMap


class Embedding(plugin.Plugin):
    name: ClassVar[str] = "Embedding"

    @command.desc("Sketch each vector with a seeded Gaussian map of its invariant")
    @command.usage("embed --group '{\"type\": \"cyclic\", \"n\": 12}' --omega 2 "
                   "--vectors points.csv --m auto")
    @command.GROUP
    @command.OMEGA
    @command.VECTORS
    @command.option("--m",
                    help="embedding dimension, "
                    "or 'auto' to size it from the measured delta")
    @command.SEED
    @command.EPSILON
    @command.BETA
    @command.option("--out", help="write the sketches here instead of stdout")
    async def cmd_embed(self, ctx: command.Context) -> None:
        group, labels, config = await self.group(ctx, m=ctx.option("m"))
        points = await self.points(ctx, group.n)

        pipe = await util.run_timed(self.log, "Pipeline setup", pipeline.resolve,
                                    config, points, (group, labels))
        sketches = await util.run_timed(self.log, "Sketching", pipeline.sketch_rows,
                                        pipe, points)
        if pipe.delta is not None:
            self.log.info("Measured delta=%.6f on %d canonical points", pipe.delta,
                          pipe.canon.k)

        out: Optional[str] = ctx.option("out")
        if ctx.json and not out:
            await ctx.respond({
                "m": pipe.gmap.m,
                "seed": config.seed,
                "sketches": sketches,
            })
            return

        text = util.vectors.format_vectors(sketches, header=f"m={pipe.gmap.m}")
        if out:
            await util.vectors.write_text(out, text)
            self.log.info("Wrote %d sketches to '%s'", len(sketches), out)
        else:
            await self.engine.write(text)

    @command.desc("Smallest embedding dimension meeting the JL budget")
    @command.usage("jl-dim --k 20 --beta 0.05 --epsilon 0.5 --delta 0")
    @command.alias("jl-dimension")
    @command.option("--k", type=int, required=True, help="number of canonical points")
    @command.BETA
    @command.EPSILON
    @command.option("--delta",
                    type=float,
                    default=0.0,
                    help="measured discriminability constant")
    async def cmd_jl_dim(self, ctx: command.Context) -> MutableMapping[str, Any]:
        settings = self.engine.settings
        budget = embed.JlBudget(k=ctx.option("k"),
                                beta=ctx.option("beta", settings["beta"]),
                                epsilon=ctx.option("epsilon", settings["epsilon"]),
                                delta=ctx.option("delta"))
        y = (budget.epsilon - budget.delta) / (1.0 - budget.delta)

        return {
            "k": budget.k,
            "beta": budget.beta,
            "epsilon": budget.epsilon,
            "delta": budget.delta,
            "alpha": embed.alpha(y),
            "m": embed.jl_dimension(budget),
        }

    @command.desc("Count seeds whose sketch leaves the (1 ± epsilon) band on some "
                  "canonical pair")
    @command.usage("jl-check --group '{\"type\": \"cyclic\", \"n\": 12}' --omega 2 "
                   "--vectors points.csv --seeds 400")
    @command.GROUP
    @command.OMEGA
    @command.VECTORS
    @command.EPSILON
    @command.BETA
    @command.option("--seeds", type=int, default=100, help="number of sampled maps")
    @command.SEED
    async def cmd_jl_check(self, ctx: command.Context) -> None:
        group, _, config = await self.group(ctx)
        points = await self.points(ctx, group.n)

        run = await util.run_timed(self.log, "JL experiment", pipeline.jl_experiment,
                                   points, group, config.omega, config.epsilon,
                                   config.beta, ctx.option("seeds"), config.caps,
                                   config.seed)
        allowed = 2.0 * config.beta
        passed = run.failure_fraction <= allowed
        if not passed:
            ctx.fail(f"{len(run.failing_seeds)} of {run.seeds} seeds distorted "
                     "some pair beyond epsilon")

        await ctx.respond({
            "k": run.k,
            "delta": run.delta,
            "m": run.m,
            "seeds": run.seeds,
            "failing": len(run.failing_seeds),
            "failure_fraction": run.failure_fraction,
            "allowed": allowed,
            "status": "OK" if passed else "FAIL",
        })

    @command.desc("Estimate how often a low-dimensional sketch keeps canonical points "
                  "apart")
    @command.usage("whitney-check --group '{\"type\": \"cyclic\", \"n\": 6}' "
                   "--vectors points.csv --m 3")
    @command.GROUP
    @command.OMEGA
    @command.VECTORS
    @command.option("--m", type=int, required=True, help="embedding dimension")
    @command.option("--trials", type=int, default=1000, help="number of sampled maps")
    @command.SEED
    @command.option("--min-rate",
                    type=float,
                    default=0.99,
                    help="required fraction of injective maps")
    async def cmd_whitney_check(self, ctx: command.Context) -> None:
        group, _, config = await self.group(ctx)
        points = await self.points(ctx, group.n)

        canon = await util.run_sync(discrim.reduce_dataset, points, group)
        inv = await util.run_timed(self.log, "Orbit enumeration",
                                   InvariantMap.from_group, group, config.omega,
                                   config.caps.tuple_cap)
        report = await util.run_timed(self.log, "Injectivity trials",
                                      embed.check_whitney_injectivity, canon.reps, inv,
                                      ctx.option("m"), ctx.option("trials"),
                                      config.seed)

        rate = report.injective_trials / report.trials
        if rate < ctx.option("min_rate"):
            ctx.fail(f"Only {report.injective_trials} of {report.trials} maps were "
                     "injective")

        await ctx.respond({
            "k": canon.k,
            "m": ctx.option("m"),
            "trials": report.trials,
            "injective_trials": report.injective_trials,
            "rate": rate,
            "min_pair_gap": report.min_pair_gap,
        })

    @command.desc("Monte-Carlo check of the Gaussian concentration bound")
    @command.usage("conc-selftest --m 100 --epsilon 0.5 --samples 10000 --seed 0")
    @command.option("--m", type=int, default=100, help="embedding dimension")
    @command.EPSILON
    @command.option("--samples",
                    type=int,
                    default=10000,
                    help="number of (map, unit vector) draws")
    @command.SEED
    async def cmd_conc_selftest(self, ctx: command.Context) -> None:
        settings = self.engine.settings
        report = await util.run_timed(self.log, "Concentration self-test",
                                      embed.concentration_selftest, ctx.option("m"),
                                      ctx.option("epsilon", settings["epsilon"]),
                                      ctx.option("samples"),
                                      ctx.option("seed", settings["seed"]))
        if not report.passed:
            ctx.fail(f"Empirical tail {report.empirical_tail} exceeds the bound "
                     f"{report.bound:.6f}")

        await ctx.respond({
            "m": report.m,
            "epsilon": report.epsilon,
            "samples": report.samples,
            "empirical_tail": report.empirical_tail,
            "bound": report.bound,
            "status": "OK" if report.passed else "FAIL",
        })
