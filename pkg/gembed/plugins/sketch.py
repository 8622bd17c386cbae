import dataclasses
from typing import Any, ClassVar, List, MutableMapping

from gembed import command, pipeline, plugin, util
from gembed.error import ConfigError
from gembed.util.store import StoreHeader, nearest, records_from

ACTIONS = ("add", "query")


class Sketch(plugin.Plugin):
    name: ClassVar[str] = "Sketch"

    @command.desc("Add vectors to a sketch store, "
                  "or look up their nearest stored sketches")
    @command.usage("sketch add --store sketches.jsonl "
                   "--group '{\"type\": \"cyclic\", \"n\": 8}' --vectors points.csv")
    @command.option("action", choices=ACTIONS, help="add | query")
    @command.option("--store", help="sketch store file (default GEMBED_STORE)")
    @command.GROUP
    @command.OMEGA
    @command.VECTORS
    @command.option("--m",
                    help="embedding dimension or 'auto' for a new store; "
                    "ignored by query")
    @command.option("--seed",
                    type=int,
                    help="non-negative integer seed for a new store")
    @command.option("--epsilon", type=float, help="distortion budget for --m auto")
    @command.option("--beta", type=float, help="failure probability for --m auto")
    @command.option("--ids",
                    help="comma-separated record ids, one per row "
                    "(default: running index)")
    @command.option("--radius",
                    type=float,
                    help="only report matches within this sketch distance")
    @command.option("--limit",
                    type=int,
                    default=5,
                    help="matches reported per query row")
    async def cmd_sketch(self, ctx: command.Context) -> None:
        store = self.engine.open_store(ctx.option("store"))
        if ctx.option("action") == "add":
            await self.add(ctx, store)
        else:
            await self.query(ctx, store)

    async def add(self, ctx: command.Context, store: util.store.SketchStore) -> None:
        group, labels, config = await self.group(ctx, m=ctx.option("m"))
        header, existing = await store.load()
        if header is not None and ctx.option("m") is None:
            # Reuse the store's map so new sketches stay comparable
            seed = header.seed if ctx.option("seed") is None else config.seed
            config = dataclasses.replace(config, m=header.m, seed=seed)

        points = await self.points(ctx, group.n)
        ids = self.ids(ctx, len(existing), len(points))
        pipe = await util.run_timed(self.log, "Pipeline setup", pipeline.resolve,
                                    config, points, (group, labels))
        sketches = await util.run_timed(self.log, "Sketching", pipeline.sketch_rows,
                                        pipe, points)

        wanted = StoreHeader(group_hash=config.group_hash,
                             m=pipe.gmap.m,
                             seed=config.seed,
                             omega=config.omega)
        total = await store.add(wanted, records_from(ids, sketches, config.group_hash))

        await ctx.respond({
            "store": str(store.path),
            "added": len(ids),
            "total": total,
            "m": wanted.m,
            "seed": wanted.seed,
            "group_hash": wanted.group_hash,
        })

    async def query(self, ctx: command.Context, store: util.store.SketchStore) -> None:
        group, labels, config = await self.group(ctx)
        header, records = await store.header_for(config.group_hash)
        config = dataclasses.replace(config, m=header.m, seed=header.seed)

        points = await self.points(ctx, group.n)
        pipe = await util.run_timed(self.log, "Pipeline setup", pipeline.resolve,
                                    config, None, (group, labels))
        sketches = await util.run_sync(pipeline.sketch_rows, pipe, points)

        radius = ctx.option("radius")
        limit = ctx.option("limit")
        results: List[MutableMapping[str, Any]] = []
        for row, sketch in enumerate(sketches):
            matches = nearest(records, sketch, radius)[:limit]
            results.append({
                "row": row,
                "nearest": matches[0].id if matches else None,
                "exact": bool(matches) and matches[0].exact,
                "matches": [{
                    "id": m.id,
                    "distance": m.distance
                } for m in matches],
            })

        if ctx.json:
            await ctx.respond({
                "store": str(store.path),
                "m": header.m,
                "queries": results,
            })
            return

        for result in results:
            summary = {
                "nearest": result["nearest"] or "none",
                "exact": result["exact"],
                "matches": [
                    f"{m['id']} ({m['distance']!r})" for m in result["matches"]
                ],
            }
            await ctx.respond(summary, heading=f"query {result['row']}")

    def ids(self, ctx: command.Context, existing: int, rows: int) -> List[str]:
        if not ctx.option("ids"):
            return [str(existing + i) for i in range(rows)]

        ids = self.list_option(ctx, "ids", str.strip)
        if len(ids) != rows:
            raise ConfigError(f"Got {len(ids)} ids for {rows} vectors")
        if len(set(ids)) != len(ids):
            raise ConfigError("Record ids must be unique")

        return ids
