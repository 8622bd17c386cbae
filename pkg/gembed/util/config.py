import json
import os
from dataclasses import dataclass
from typing import Any, Iterator, Mapping, MutableMapping, Type, TypeVar, Union

from aiopath import AsyncPath

from gembed.error import ConfigError, GroupSpecError, InputError

_KT = TypeVar("_KT", bound=str, contravariant=True)
_VT = TypeVar("_VT", covariant=True)

DEFAULTS: Mapping[str, Any] = {
    "group_cap": 10**6,
    "point_cap": 10**5,
    "tuple_cap": 2**26,
    "seed": 0,
    "epsilon": 0.5,
    "beta": 0.05,
    "store": "sketches.jsonl",
    "cond_tol": 1e-8,
}

_PARSERS: Mapping[str, Any] = {
    "group_cap": int,
    "point_cap": int,
    "tuple_cap": int,
    "seed": int,
    "epsilon": float,
    "beta": float,
    "store": str,
    "cond_tol": float,
}


class Settings(MutableMapping[_KT, _VT]):
    """Environment-backed settings, frozen once read.

    Every key maps to ``GEMBED_<KEY>``; unset or empty variables fall back to
    :data:`DEFAULTS`.
    """

    def __init__(self, environ: Mapping[str, str] = os.environ) -> None:
        data: MutableMapping[str, Any] = {}
        for key, default in DEFAULTS.items():
            raw = environ.get("GEMBED_" + key.upper())
            if not raw:
                value = default
            else:
                try:
                    value = _PARSERS[key](raw)
                except ValueError as e:
                    kind = _PARSERS[key].__name__
                    raise ConfigError(
                        f"GEMBED_{key.upper()}={raw!r} is not a valid {kind}") from e

            super().__setattr__(key, value)
            data[key] = value

        object.__setattr__(self, "_Settings__data", data)

    def __delattr__(self, obj: object) -> None:  # skipcq: PYL-W0613
        raise RuntimeError("Can't delete settings once loaded.")

    def __delitem__(self, k: _KT) -> None:  # skipcq: PYL-W0613
        raise RuntimeError("Can't delete settings once loaded.")

    def __getattr__(self, name: str) -> _VT:
        return self.__getattribute__(name)

    def __getitem__(self, k: _KT) -> _VT:
        return self.__data[k]

    def __iter__(self) -> Iterator[_KT]:
        return self.__data.__iter__()  # type: ignore

    def __len__(self) -> int:
        return len(self.__data)

    def __setattr__(self, name: str, value: Any) -> None:  # skipcq: PYL-W0613
        raise RuntimeError(
            "Settings must be provided through the environment or config.env.")

    def __setitem__(self, k: str, v: Any) -> None:  # skipcq: PYL-W0613
        raise RuntimeError(
            "Settings must be provided through the environment or config.env.")

    @property
    def caps(self) -> "Caps":
        return Caps(group_cap=self["group_cap"],
                    point_cap=self["point_cap"],
                    tuple_cap=self["tuple_cap"])


@dataclass(frozen=True)
class Caps:
    """Upper bounds guarding explicit enumeration."""

    group_cap: int = DEFAULTS["group_cap"]
    point_cap: int = DEFAULTS["point_cap"]
    tuple_cap: int = DEFAULTS["tuple_cap"]

    def __post_init__(self) -> None:
        for name in ("group_cap", "point_cap", "tuple_cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")


async def load_json_arg(
    value: Union[str, AsyncPath],
    *,
    what: str = "group spec",
    error: Type[InputError] = GroupSpecError,
) -> MutableMapping[str, Any]:
    """Reads a JSON object given inline or as a path to a file."""

    text = str(value).strip()
    if not text.startswith("{"):
        path = AsyncPath(text)
        if not await path.is_file():
            raise error(f"{what} '{text}' is neither inline JSON nor a readable file")
        text = await path.read_text()

    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise error(f"{what} is not valid JSON: {e}") from e

    if not isinstance(obj, dict):
        raise error(f"{what} must be a JSON object")

    return obj


def canonical_json(obj: Any) -> str:
    """Serializes to the sorted-key, whitespace-free form used for hashing."""

    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
