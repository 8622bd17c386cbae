import numpy as np
import pytest

from gembed.error import ConfigError, EpsilonNotAboveDelta
from gembed.pipeline import AUTO, PipelineConfig, group_hash, resolve, sketch_rows
from gembed.util.config import Caps, Settings

CYCLIC = {"type": "cyclic", "n": 4}


def test_group_hash_is_canonical():
    reordered = {"n": 4, "type": "cyclic"}
    assert group_hash({"type": "cyclic", "n": 4}, 2) == group_hash(reordered, 2)
    assert group_hash(CYCLIC, 2) != group_hash(CYCLIC, 3)
    assert len(group_hash(CYCLIC, 1)) == 64


def test_from_sources_precedence():
    settings = Settings({"GEMBED_SEED": "7", "GEMBED_EPSILON": "0.4"})
    file_config = {"group": CYCLIC, "seed": 3, "omega": 2}
    config = PipelineConfig.from_sources(settings, file_config, seed=5, m="12")
    assert config.seed == 5
    assert config.omega == 2
    assert config.epsilon == 0.4
    assert config.m == 12
    assert config.group_spec == CYCLIC


def test_from_sources_defaults_and_caps():
    file_config = {"group": CYCLIC, "tuple_cap": 100}
    config = PipelineConfig.from_sources(Settings({}), file_config, omega=None)
    assert config.omega == 1
    assert config.m == AUTO
    assert config.caps == Caps(tuple_cap=100)


@pytest.mark.parametrize("file_values, flags", [
    ({}, {}),
    ({"group": CYCLIC, "colour": "blue"}, {}),
    ({"group": [1, 2]}, {}),
    ({"group": CYCLIC}, {"m": "many"}),
    ({"group": CYCLIC}, {"omega": 0}),
    ({"group": CYCLIC}, {"epsilon": 1.5}),
    ({"group": CYCLIC}, {"seed": -1}),
    ({"group": CYCLIC, "tuple_cap": 0}, {}),
])
def test_from_sources_rejects(file_values, flags):
    with pytest.raises(ConfigError):
        PipelineConfig.from_sources(Settings({}), file_values, **flags)


def test_settings_reject_bad_environment():
    with pytest.raises(ConfigError):
        Settings({"GEMBED_SEED": "seven"})


def test_settings_are_frozen():
    settings = Settings({})
    with pytest.raises(RuntimeError):
        settings["seed"] = 3


def test_resolve_with_fixed_dimension():
    pipe = resolve(PipelineConfig(group_spec=CYCLIC, omega=2, m=6, seed=1))
    assert pipe.gmap.m == 6
    assert pipe.gmap.kappa == pipe.inv.kappa == 4
    assert pipe.delta is None


def test_resolve_auto_needs_points():
    with pytest.raises(ConfigError):
        resolve(PipelineConfig(group_spec=CYCLIC, omega=2))


def test_resolve_auto_measures_delta(rng):
    noise = 0.01 * rng.standard_normal((5, 4))
    points = [(1.0 + 0.5 * i) * np.ones(4) + noise[i] for i in range(5)]
    pipe = resolve(PipelineConfig(group_spec=CYCLIC, omega=2, epsilon=0.5), points)
    assert pipe.canon.k == 5
    assert 0.0 <= pipe.delta < 0.5
    assert pipe.gmap.m > 0


def test_auto_refuses_when_delta_reaches_epsilon():
    a = np.array([1.0, 2.0, 3.0, 5.0])
    with pytest.raises(EpsilonNotAboveDelta):
        resolve(PipelineConfig(group_spec=CYCLIC, omega=2), [a, a[::-1].copy()])


def test_sketches_are_deterministic_and_invariant():
    pipe = resolve(PipelineConfig(group_spec=CYCLIC, omega=2, m=5, seed=9))
    a = np.array([1.0, -2.0, 4.0, 0.0])
    rows = sketch_rows(pipe, [a, np.roll(a, 1), a])
    np.testing.assert_array_equal(rows[0], rows[1])
    np.testing.assert_array_equal(rows[0], rows[2])
    fresh = resolve(PipelineConfig(group_spec=CYCLIC, omega=2, m=5, seed=9))
    again = sketch_rows(fresh, [a])
    np.testing.assert_array_equal(rows[0], again[0])
