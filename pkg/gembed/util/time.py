import time
from typing import Optional


class Stopwatch:
    """Monotonic timer for logging how long a computation ran."""

    started: int
    stopped: Optional[int]

    def __init__(self) -> None:
        self.started = time.perf_counter_ns()
        self.stopped = None

    def stop(self) -> int:
        if self.stopped is None:
            self.stopped = time.perf_counter_ns()

        return self.elapsed_ns

    @property
    def elapsed_ns(self) -> int:
        end = time.perf_counter_ns() if self.stopped is None else self.stopped
        return end - self.started

    def __str__(self) -> str:
        return format_elapsed(self.elapsed_ns)


def format_elapsed(ns: int) -> str:
    """Renders a nanosecond span with the coarsest unit that keeps it readable."""

    if ns < 1_000:
        return f"{ns} ns"
    if ns < 1_000_000:
        return f"{ns / 1_000:.1f} μs"
    if ns < 1_000_000_000:
        return f"{ns / 1_000_000:.1f} ms"

    secs = ns / 1_000_000_000
    if secs < 60:
        return f"{secs:.2f} s"

    mins, secs = divmod(int(secs), 60)
    hours, mins = divmod(mins, 60)
    return f"{hours}h {mins:02d}m {secs:02d}s" if hours else f"{mins}m {secs:02d}s"
