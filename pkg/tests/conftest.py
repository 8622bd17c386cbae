import asyncio
import io
import json
from typing import Any, Mapping, Optional, Tuple

import numpy as np
import pytest

from gembed.core import Engine


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def run_cli(*argv: str, environ: Optional[Mapping[str, str]] = None) -> Tuple[int, str]:
    """Runs one command line through a fresh engine.

    Returns the exit code and whatever the command wrote to stdout.
    """

    output = io.StringIO()

    async def main() -> int:
        engine = Engine(output=output, environ=environ or {})
        try:
            return await engine.invoke(list(argv))
        finally:
            await engine.stop()

    code = asyncio.run(main())
    return code, output.getvalue()


def run_json(*argv: str,
             environ: Optional[Mapping[str, str]] = None) -> Tuple[int, Any]:
    code, out = run_cli(*argv, "--json", environ=environ)
    return code, json.loads(out) if out.strip() else None


def write_rows(path, rows) -> str:
    lines = (",".join(repr(float(x)) for x in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")
    return str(path)

