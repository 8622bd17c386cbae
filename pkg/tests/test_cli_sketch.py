import itertools
import math

import numpy as np
import pytest

from conftest import run_json, write_rows
from gembed.invariant import tensor_distance_sq
from gembed.pipeline import PipelineConfig, resolve, sketch_rows
from gembed.util.store import nearest, records_from

CYCLIC8 = {"type": "cyclic", "n": 8}
EPSILON = 0.5
BETA = 0.05
CYCLIC8_SQ = ("--group", '{"type": "cyclic", "n": 8}', "--omega", "2")


def separated_classes(rng, k: int = 10) -> np.ndarray:
    base = np.ones(8)
    noise = 0.01 * rng.standard_normal((k, 8))
    return np.stack([(1.0 + 0.5 * i) * base + noise[i] for i in range(k)])


def merge_radius(points: np.ndarray) -> float:
    """Half the smallest sketch gap the distortion bound still guarantees."""

    pairs = itertools.combinations(points, 2)
    closest = min(tensor_distance_sq(a, b, 2) for a, b in pairs)
    return 0.5 * math.sqrt((1.0 - EPSILON) * closest)


def false_merges(points: np.ndarray, seed: int, radius: float) -> int:
    config = PipelineConfig(group_spec=CYCLIC8, omega=2, m="auto", seed=seed,
                            epsilon=EPSILON, beta=BETA)
    pipe = resolve(config, points)
    ids = [f"class-{i}" for i in range(len(points))]
    records = records_from(ids, sketch_rows(pipe, points), config.group_hash)

    rotated = [np.roll(a, 1 + (seed + i) % 7) for i, a in enumerate(points)]
    merges = 0
    for own, sketch in zip(ids, sketch_rows(pipe, rotated)):
        found = {m.id for m in nearest(records, sketch, radius)}
        assert own in found
        merges += len(found - {own})

    return merges


def test_rotated_queries_match_only_their_class(rng):
    points = separated_classes(rng)
    assert false_merges(points, seed=0, radius=merge_radius(points)) == 0


@pytest.mark.slow
def test_no_false_merges_across_seeds(rng):
    points = separated_classes(rng)
    radius = merge_radius(points)
    failing = [seed for seed in range(100) if false_merges(points, seed, radius)]
    assert len(failing) <= 2 * BETA * 100
    assert failing == []


def test_query_radius_through_the_cli(tmp_path, rng):
    points = separated_classes(rng)
    store = str(tmp_path / "sketches.jsonl")
    stored = write_rows(tmp_path / "stored.csv", points)
    code, data = run_json("sketch", "add", "--store", store, *CYCLIC8_SQ,
                          "--vectors", stored, "--m", "auto", "--seed", "3")
    assert code == 0
    assert data["added"] == 10

    queries = write_rows(tmp_path / "q.csv", [np.roll(a, 3) for a in points])
    code, data = run_json("sketch", "query", "--store", store, *CYCLIC8_SQ,
                          "--vectors", queries, "--radius", repr(merge_radius(points)),
                          "--limit", "10")
    assert code == 0
    for row, result in enumerate(data["queries"]):
        assert result["nearest"] == str(row)
        assert result["exact"] is True
        assert [m["id"] for m in result["matches"]] == [str(row)]
