import json
from typing import Any, Iterable, Mapping, Optional

import numpy as np

ITEM_SEPARATOR = "\n    • "


def join_list(items: Iterable[str]) -> str:
    """Joins the given items into an indented bullet list."""

    return ITEM_SEPARATOR.join(items)


def format_value(value: Any) -> str:
    """Renders report values compactly; floats keep their shortest round-trip form."""

    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_value(v) for v in value) + "]"

    return str(value)


def join_map(items: Mapping[str, Any], heading: Optional[str] = None) -> str:
    """Joins key-value pairs into an indented bullet list with labelled values."""

    return join_list((
        *((f"{heading}:", ) if heading else ()),
        *(f"{key}: {format_value(value)}" for key, value in items.items()),
    ))


def _plain(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, tuple):
        return list(value)

    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def to_json(items: Any) -> str:
    """Sorted-key JSON used by ``--json`` output and the sketch store."""

    return json.dumps(items, sort_keys=True, default=_plain)
