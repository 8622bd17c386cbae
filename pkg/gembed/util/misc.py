from typing import Any, Callable, Optional, Sequence, Tuple


def command_name(sym: str) -> str:
    """``jl_dim`` -> ``jl-dim``"""

    return sym.replace("_", "-")


def find_prefixed_funcs(
    obj: Any,
    prefix: str,
    rename: Optional[Callable[[str], str]] = None,
) -> Sequence[Tuple[str, Callable]]:
    """Finds callables whose names start with ``prefix``, renaming the rest."""

    results = []
    for sym in dir(obj):
        if not sym.startswith(prefix):
            continue

        func = getattr(obj, sym)
        if callable(func):
            name = sym[len(prefix):]
            results.append((rename(name) if rename else name, func))

    return results
