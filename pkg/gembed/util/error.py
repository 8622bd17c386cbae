import os
import traceback
from typing import Optional

from gembed.error import GembedError


def format_exception(exp: BaseException, root: Optional[str] = None) -> str:
    """Formats a traceback like the interpreter does, paths relative to ``root``."""

    root = root or os.getcwd()
    frames = traceback.extract_tb(exp.__traceback__)
    for frame in frames:
        if frame.filename.startswith(root):
            frame.filename = os.path.relpath(frame.filename, root)

    msg = str(exp)
    return ("Traceback (most recent call last):\n"
            + "".join(traceback.format_list(frames))
            + type(exp).__name__ + (f": {msg}" if msg else ""))


def describe(exp: BaseException) -> str:
    """One-line ``Kind: message`` summary for user-facing errors."""

    msg = str(exp).strip("'\"")
    return f"{type(exp).__name__}: {msg}" if msg else type(exp).__name__


def exit_code_of(exp: BaseException) -> int:
    return exp.exit_code if isinstance(exp, GembedError) else 2
