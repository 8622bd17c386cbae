"""Delimiter-separated vector files: one point per row."""

import re
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
from aiopath import AsyncPath

from gembed.error import MalformedRow

_SPLIT = re.compile(r"[,;\t ]+")

PathLike = Union[str, AsyncPath]


def parse_vectors(text: str,
                  source: str = "<input>",
                  width: Optional[int] = None) -> np.ndarray:
    """Parses rows of numbers separated by commas, semicolons, tabs or spaces.

    Blank lines and lines starting with ``#`` are skipped. A leading
    ``key=value`` header row (as written by :func:`format_vectors`) is skipped
    too. Every row must have the same arity, ``width`` if given.
    """

    rows: List[List[float]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not rows and "=" in line:
            continue

        try:
            row = [float(cell) for cell in _SPLIT.split(line) if cell]
        except ValueError as e:
            raise MalformedRow(source, line_no, f"not a number ({e})") from e

        expected = width if width is not None else (len(rows[0]) if rows else None)
        if expected is not None and len(row) != expected:
            raise MalformedRow(source, line_no,
                               f"expected {expected} columns, got {len(row)}")
        if not np.all(np.isfinite(row)):
            raise MalformedRow(source, line_no, "values must be finite")

        rows.append(row)

    if not rows:
        return np.zeros((0, width or 0))

    return np.array(rows, dtype=float)


async def read_vectors(path: PathLike, width: Optional[int] = None) -> np.ndarray:
    file = AsyncPath(path)
    if not await file.is_file():
        raise MalformedRow(str(path), 0, "file does not exist")

    return parse_vectors(await file.read_text(), str(path), width)


async def read_signal(path: PathLike) -> np.ndarray:
    """One-column real signal, also accepting a single row."""

    data = await read_vectors(path)
    if data.ndim == 2 and data.shape[1] == 1:
        return data[:, 0]
    if data.ndim == 2 and data.shape[0] == 1:
        return data[0]

    raise MalformedRow(str(path), 1,
                       f"expected a single column, got shape {data.shape}")


def format_row(values: Iterable[float]) -> str:
    return ",".join(repr(float(v)) for v in values)


def format_vectors(rows: Sequence[Sequence[float]],
                   header: Optional[str] = None) -> str:
    lines = [header] if header else []
    lines.extend(format_row(row) for row in rows)
    return "\n".join(lines)


def format_complex_table(table: np.ndarray) -> str:
    """One line per row, each entry written as its ``re,im`` pair."""

    lines = []
    for row in np.asarray(table, dtype=complex):
        pairs = np.column_stack((row.real, row.imag)).ravel()
        lines.append(format_row(pairs))

    return "\n".join(lines)


def parse_complex_table(text: str, source: str = "<input>") -> np.ndarray:
    flat = parse_vectors(text, source)
    if flat.shape[1] % 2:
        raise MalformedRow(source, 1, "complex tables need an even number of columns")

    table = flat[:, 0::2] + 1j * flat[:, 1::2]
    if table.shape[0] != table.shape[1]:
        raise MalformedRow(source, 1, f"expected a square table, got {table.shape}")

    return table


async def read_complex_table(path: PathLike) -> np.ndarray:
    file = AsyncPath(path)
    if not await file.is_file():
        raise MalformedRow(str(path), 0, "file does not exist")

    return parse_complex_table(await file.read_text(), str(path))


async def write_text(path: PathLike, text: str) -> None:
    await AsyncPath(path).write_text(text + "\n")
