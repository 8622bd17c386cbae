from typing import ClassVar, Optional

from gembed import command, plugin, spectral, util
from gembed.error import ConfigError

MODES = ("compute", "invert", "roundtrip")


class Bispectrum(plugin.Plugin):
    name: ClassVar[str] = "Bispectrum"

    @command.desc("Compute a signal's bispectrum on Z_n, invert one, "
                  "or check the round trip")
    @command.usage("bispectrum roundtrip --signal signal.csv")
    @command.option("mode", choices=MODES, help="compute | invert | roundtrip")
    @command.option("--signal",
                    required=True,
                    help="one-column signal, or a bispectrum table for 'invert'")
    @command.option("--out", help="write the table or signal here instead of stdout")
    @command.option("--cond-tol",
                    type=float,
                    help="relative threshold for vanishing Fourier coefficients")
    @command.option("--tol",
                    type=float,
                    default=1e-6,
                    help="round-trip tolerance, up to cyclic shift")
    async def cmd_bispectrum(self, ctx: command.Context) -> None:
        mode = ctx.option("mode")
        path = ctx.option("signal")
        cond_tol = ctx.option("cond_tol", self.engine.settings["cond_tol"])
        if cond_tol <= 0:
            raise ConfigError("--cond-tol must be positive")

        if mode == "compute":
            signal = await util.vectors.read_signal(path)
            b = await util.run_sync(spectral.bispectrum, signal)
            if ctx.json and not ctx.option("out"):
                await ctx.respond({
                    "n": b.n,
                    "real": b.values.real,
                    "imag": b.values.imag,
                })
            else:
                await self.emit(ctx, util.vectors.format_complex_table(b.values))
        elif mode == "invert":
            table = await util.vectors.read_complex_table(path)
            recovered = await util.run_timed(self.log, "Inversion",
                                             spectral.invert_bispectrum, table,
                                             cond_tol)
            if ctx.json and not ctx.option("out"):
                await ctx.respond({"n": len(recovered), "signal": recovered})
            else:
                text = util.vectors.format_vectors([[v] for v in recovered])
                await self.emit(ctx, text)
        else:
            signal = await util.vectors.read_signal(path)
            b = await util.run_sync(spectral.bispectrum, signal)
            recovered = await util.run_sync(spectral.invert_bispectrum, b, cond_tol)
            error = spectral.shift_distance(signal, recovered)

            passed = error <= ctx.option("tol")
            if not passed:
                ctx.fail(f"Recovered signal is {error:.3e} away from every "
                         "cyclic shift of the input")
            await ctx.respond({
                "n": len(signal),
                "max_error": error,
                "status": "OK" if passed else "FAIL",
            })

    async def emit(self, ctx: command.Context, text: str) -> None:
        out: Optional[str] = ctx.option("out")
        if out:
            await util.vectors.write_text(out, text)
            self.log.info("Wrote '%s'", out)
        else:
            await self.engine.write(text)
