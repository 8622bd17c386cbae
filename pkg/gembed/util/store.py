"""Append-only sketch store: a JSON-lines file with one header line."""

import json
import logging
import os
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from typing import (
    Any,
    AsyncIterator,
    List,
    MutableMapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
from aiopath import AsyncPath
from tenacity import (
    retry,
    retry_if_exception_type,
    stop_after_attempt,
    wait_random_exponential,
)

from gembed.error import (
    EmptyStore,
    GroupHashMismatch,
    MalformedRow,
    StoreError,
    StoreLocked,
)

log = logging.getLogger("gembed.store")

FORMAT = "gembed-sketches/1"
LOCK_ATTEMPTS = 6


@dataclass(frozen=True)
class StoreHeader:
    group_hash: str
    m: int
    seed: int
    omega: int

    def to_dict(self) -> MutableMapping[str, Any]:
        return {
            "format": FORMAT,
            "group_hash": self.group_hash,
            "m": self.m,
            "seed": self.seed,
            "omega": self.omega,
        }


@dataclass(frozen=True)
class SketchRecord:
    id: str
    sketch: Tuple[float, ...]
    group_hash: str = field(default="", compare=False)


@dataclass(frozen=True)
class SketchMatch:
    id: str
    distance: float

    @property
    def exact(self) -> bool:
        return self.distance == 0.0


def _parse(text: str, source: str) -> Tuple[Optional[StoreHeader], List[SketchRecord]]:
    header = None
    records: List[SketchRecord] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue

        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as e:
            raise MalformedRow(source, line_no, f"invalid JSON ({e.msg})") from e
        if not isinstance(obj, dict):
            raise MalformedRow(source, line_no,
                               f"expected a JSON object, got {type(obj).__name__}")

        if header is None:
            if obj.get("format") != FORMAT:
                raise MalformedRow(source, line_no, "missing store header")
            try:
                header = StoreHeader(group_hash=str(obj["group_hash"]),
                                     m=int(obj["m"]),
                                     seed=int(obj["seed"]),
                                     omega=int(obj["omega"]))
            except KeyError as e:
                raise MalformedRow(source, line_no, f"store header lacks {e}") from e
            except (TypeError, ValueError) as e:
                raise MalformedRow(source, line_no, f"bad store header ({e})") from e
            continue

        try:
            sketch = tuple(float(x) for x in obj["sketch"])
            record = SketchRecord(id=str(obj["id"]),
                                  sketch=sketch,
                                  group_hash=header.group_hash)
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedRow(source, line_no, f"bad record ({e})") from e
        if len(sketch) != header.m:
            raise MalformedRow(source, line_no,
                               f"sketch has {len(sketch)} entries, expected {header.m}")

        records.append(record)

    return header, records


def _dump(header: StoreHeader, records: Sequence[SketchRecord]) -> str:
    lines = [json.dumps(header.to_dict(), sort_keys=True)]
    lines.extend(
        json.dumps({"id": r.id, "sketch": list(r.sketch)}, sort_keys=True)
        for r in records)
    return "\n".join(lines) + "\n"


@retry(wait=wait_random_exponential(multiplier=0.05, max=0.5),
       stop=stop_after_attempt(LOCK_ATTEMPTS),
       retry=retry_if_exception_type(FileExistsError),
       reraise=True)
async def _take_lock(lock: AsyncPath) -> None:
    await lock.touch(exist_ok=False)


class SketchStore:
    path: AsyncPath

    def __init__(self, path: Union[str, os.PathLike]) -> None:
        self.path = AsyncPath(path)

    @property
    def lock_path(self) -> AsyncPath:
        return self.path.with_name(self.path.name + ".lock")

    @asynccontextmanager
    async def locked(self) -> AsyncIterator[None]:
        """Single-writer advisory lock held as a sibling ``.lock`` file."""

        try:
            await _take_lock(self.lock_path)
        except FileExistsError:
            raise StoreLocked(f"{self.lock_path} is held by another writer") from None

        try:
            yield
        finally:
            await self.lock_path.unlink()

    async def load(self) -> Tuple[Optional[StoreHeader], List[SketchRecord]]:
        if not await self.path.exists():
            return None, []

        return _parse(await self.path.read_text(), str(self.path))

    async def add(self, header: StoreHeader, records: Sequence[SketchRecord]) -> int:
        """Appends ``records`` by rewriting the store through a temporary file.

        Returns the record count after the append.
        """

        async with self.locked():
            stored, existing = await self.load()
            if stored is not None:
                _check_compatible(stored, header)

            merged = [*existing, *records]
            tmp = self.path.with_name(f".{self.path.name}.tmp")
            await tmp.write_text(_dump(header, merged))
            await tmp.replace(self.path)

        log.info("Stored %d sketches in '%s' (%d total)", len(records), self.path,
                 len(merged))
        return len(merged)

    async def header_for(self,
                         group_hash: str) -> Tuple[StoreHeader, List[SketchRecord]]:
        """Loads the store for querying, refusing empty stores and foreign hashes."""

        header, records = await self.load()
        if header is None or not records:
            raise EmptyStore(f"Store '{self.path}' has no records")
        if header.group_hash != group_hash:
            raise GroupHashMismatch(header.group_hash, group_hash)

        return header, records


def _check_compatible(stored: StoreHeader, wanted: StoreHeader) -> None:
    if stored.group_hash != wanted.group_hash:
        raise GroupHashMismatch(stored.group_hash, wanted.group_hash)
    if (stored.m, stored.seed) != (wanted.m, wanted.seed):
        raise StoreError(f"Store was built with m={stored.m}, seed={stored.seed}; "
                         f"got m={wanted.m}, seed={wanted.seed}")


def nearest(records: Sequence[SketchRecord],
            sketch: Any,
            radius: Optional[float] = None) -> List[SketchMatch]:
    """Linear scan, ascending by distance then id; ``radius`` filters inclusively."""

    if not records:
        raise EmptyStore("No records to compare against")

    query = np.asarray(sketch, dtype=float)
    matrix = np.array([r.sketch for r in records], dtype=float)
    distances = np.linalg.norm(matrix - query[None, :], axis=1)
    matches = [SketchMatch(r.id, float(d)) for r, d in zip(records, distances)]
    if radius is not None:
        matches = [m for m in matches if m.distance <= radius]

    return sorted(matches, key=lambda m: (m.distance, m.id))


def records_from(ids: Sequence[str], sketches: np.ndarray,
                 group_hash: str = "") -> List[SketchRecord]:
    return [
        SketchRecord(id=i, sketch=tuple(float(x) for x in row), group_hash=group_hash)
        for i, row in zip(ids, sketches)
    ]
