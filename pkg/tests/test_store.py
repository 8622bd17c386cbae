import asyncio
import json

import numpy as np
import pytest

from gembed.error import (
    EmptyStore,
    GroupHashMismatch,
    MalformedRow,
    StoreError,
    StoreLocked,
)
from gembed.util.store import (
    FORMAT,
    SketchRecord,
    SketchStore,
    StoreHeader,
    nearest,
    records_from,
)

HEADER = StoreHeader(group_hash="a" * 64, m=3, seed=4, omega=2)


def test_add_and_load_round_trip(tmp_path):
    store = SketchStore(tmp_path / "sketches.jsonl")
    sketches = np.array([[0.1, 1 / 3, -2.5e-300], [1e300, 0.0, -0.0]])

    total = asyncio.run(store.add(HEADER, records_from(["x", "y"], sketches)))
    assert total == 2

    header, records = asyncio.run(store.load())
    assert header == HEADER
    assert [r.id for r in records] == ["x", "y"]
    for record, row in zip(records, sketches):
        assert record.sketch == tuple(row)
        assert record.group_hash == HEADER.group_hash

    first = json.loads((tmp_path / "sketches.jsonl").read_text().splitlines()[0])
    assert first["format"] == FORMAT
    assert not (tmp_path / "sketches.jsonl.lock").exists()


def test_appends_keep_earlier_records(tmp_path):
    store = SketchStore(tmp_path / "s.jsonl")
    asyncio.run(store.add(HEADER, [SketchRecord("a", (1.0, 2.0, 3.0))]))
    total = asyncio.run(store.add(HEADER, [SketchRecord("b", (4.0, 5.0, 6.0))]))
    assert total == 2

    _, records = asyncio.run(store.load())
    assert [r.id for r in records] == ["a", "b"]


def test_foreign_header_is_refused(tmp_path):
    store = SketchStore(tmp_path / "s.jsonl")
    asyncio.run(store.add(HEADER, [SketchRecord("a", (1.0, 2.0, 3.0))]))

    other = StoreHeader(group_hash="b" * 64, m=3, seed=4, omega=2)
    with pytest.raises(GroupHashMismatch):
        asyncio.run(store.add(other, [SketchRecord("b", (1.0, 2.0, 3.0))]))

    resized = StoreHeader(group_hash=HEADER.group_hash, m=4, seed=4, omega=2)
    with pytest.raises(StoreError):
        asyncio.run(store.add(resized, [SketchRecord("b", (1.0, 2.0, 3.0, 4.0))]))


def test_header_for(tmp_path):
    store = SketchStore(tmp_path / "s.jsonl")
    with pytest.raises(EmptyStore):
        asyncio.run(store.header_for(HEADER.group_hash))

    asyncio.run(store.add(HEADER, [SketchRecord("a", (1.0, 2.0, 3.0))]))
    header, records = asyncio.run(store.header_for(HEADER.group_hash))
    assert header.m == 3
    assert len(records) == 1

    with pytest.raises(GroupHashMismatch):
        asyncio.run(store.header_for("c" * 64))


def test_held_lock_is_reported(tmp_path):
    store = SketchStore(tmp_path / "s.jsonl")
    (tmp_path / "s.jsonl.lock").touch()
    with pytest.raises(StoreLocked):
        asyncio.run(store.add(HEADER, [SketchRecord("a", (1.0, 2.0, 3.0))]))

    assert not (tmp_path / "s.jsonl").exists()


@pytest.mark.parametrize("body", [
    '{"id": "a", "sketch": [1, 2, 3]}\n',
    HEADER.to_dict().__repr__() + "\n",
])
def test_malformed_header(tmp_path, body):
    path = tmp_path / "s.jsonl"
    path.write_text(body)
    with pytest.raises(MalformedRow) as exc:
        asyncio.run(SketchStore(path).load())

    assert exc.value.line == 1


def test_malformed_record_names_line(tmp_path):
    path = tmp_path / "s.jsonl"
    record = '{"id": "a", "sketch": [1, 2]}\n'
    path.write_text(json.dumps(HEADER.to_dict()) + "\n" + record)
    with pytest.raises(MalformedRow) as exc:
        asyncio.run(SketchStore(path).load())

    assert exc.value.line == 2


WITHOUT_M = {k: v for k, v in HEADER.to_dict().items() if k != "m"}


@pytest.mark.parametrize("body, reason", [
    (json.dumps(WITHOUT_M) + "\n", "store header lacks 'm'"),
    (json.dumps({**HEADER.to_dict(), "seed": None}) + "\n", "bad store header"),
    ("[1, 2, 3]\n", "expected a JSON object, got list"),
])
def test_unreadable_header_names_line(tmp_path, body, reason):
    path = tmp_path / "s.jsonl"
    path.write_text(body)
    with pytest.raises(MalformedRow, match=reason) as exc:
        asyncio.run(SketchStore(path).load())

    assert exc.value.line == 1


@pytest.mark.parametrize("record", ['"a"', "[1, 2, 3]", "null"])
def test_non_object_record_names_line(tmp_path, record):
    path = tmp_path / "s.jsonl"
    path.write_text(json.dumps(HEADER.to_dict()) + "\n\n" + record + "\n")
    with pytest.raises(MalformedRow, match="expected a JSON object") as exc:
        asyncio.run(SketchStore(path).load())

    assert exc.value.line == 3


def test_nearest_orders_by_distance_then_id():
    records = [
        SketchRecord("b", (0.0, 0.0)),
        SketchRecord("a", (0.0, 0.0)),
        SketchRecord("c", (3.0, 4.0)),
    ]
    matches = nearest(records, [0.0, 0.0])
    assert [m.id for m in matches] == ["a", "b", "c"]
    assert matches[0].exact
    assert matches[2].distance == 5.0

    assert [m.id for m in nearest(records, [0.0, 0.0], radius=5.0)] == ["a", "b", "c"]
    assert [m.id for m in nearest(records, [0.0, 0.0], radius=4.9)] == ["a", "b"]

    with pytest.raises(EmptyStore):
        nearest([], [0.0, 0.0])
