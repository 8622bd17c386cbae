import itertools

import numpy as np
import pytest

from gembed.error import LengthMismatch, NotTransitive, ZeroDifference
from gembed.group import (
    act_vector,
    build_group,
    close_generators,
    cyclic_group,
    regular_space,
)
from gembed.invariant import (
    InvariantMap,
    apply_invariant,
    correlation_table,
    explicit_kernel_energy,
    extension,
    indicator_matrix,
    kernel_energy,
    multi_correlation,
    orbit_functional,
    stacked_invariant,
    tensor_distance_sq,
    tensor_power,
)
from gembed.spectral import triple_correlation

SPECS = [
    {"type": "cyclic", "n": 6},
    {"type": "symmetric", "n": 4},
    {"type": "sym_subsets", "l": 4, "w": 2},
    {"type": "generators", "n": 5, "generators": [[1, 0, 2, 3, 4], [0, 1, 3, 4, 2]]},
    {"type": "regular", "of": {"type": "cyclic", "n": 4}},
]


def test_invariance_under_the_group(rng):
    cases = 0
    for spec, omega in itertools.product(SPECS, [1, 2]):
        group, _ = build_group(spec)
        inv = InvariantMap.from_group(group, omega)
        for _ in range(10):
            a = rng.standard_normal(group.n)
            g = group.elements[rng.integers(group.order)]
            z = apply_invariant(inv, a).z
            zg = apply_invariant(inv, act_vector(g, a)).z
            assert np.max(np.abs(z - zg)) <= 1e-12 * max(1.0, np.max(np.abs(z)))
            cases += 1

    assert cases == 100


def test_invariant_never_expands(rng):
    for spec, omega in itertools.product(SPECS, [1, 2, 3]):
        group, _ = build_group(spec)
        inv = InvariantMap.from_group(group, omega)
        for _ in range(10):
            a = rng.standard_normal(group.n)
            z = apply_invariant(inv, a).z
            # ‖a^{⊗ω}‖² = ‖a‖^{2ω}
            assert float(z @ z) <= float(a @ a)**omega * (1.0 + 1e-12)


def test_terms_count_every_tuple():
    inv = InvariantMap.from_group(cyclic_group(5), 3)
    assert apply_invariant(inv, np.ones(5)).terms == 125


def test_cyclic_first_order_invariant_is_scaled_sum():
    inv = InvariantMap.from_group(cyclic_group(4), 1)
    z = apply_invariant(inv, [1.0, 2.0, 3.0, 4.0]).z
    np.testing.assert_allclose(z, [10.0 / 2.0])


def test_wrong_width_is_rejected():
    inv = InvariantMap.from_group(cyclic_group(4), 2)
    with pytest.raises(LengthMismatch):
        apply_invariant(inv, np.ones(5))


@pytest.mark.parametrize("spec, omega", [
    ({"type": "cyclic", "n": 5}, 3),
    ({"type": "sym_subsets", "l": 4, "w": 2}, 2),
    ({"type": "symmetric", "n": 4}, 3),
])
def test_indicator_rows_are_orthonormal(spec, omega):
    group, _ = build_group(spec)
    mat = indicator_matrix(InvariantMap.from_group(group, omega))
    np.testing.assert_allclose(mat @ mat.T, np.eye(mat.shape[0]), atol=1e-12)


def test_invariant_equals_indicator_product(rng):
    group, _ = build_group({"type": "sym_subsets", "l": 4, "w": 2})
    inv = InvariantMap.from_group(group, 2)
    a = rng.standard_normal(group.n)
    expected = indicator_matrix(inv) @ tensor_power(a, 2)
    np.testing.assert_allclose(apply_invariant(inv, a).z, expected, atol=1e-12)


def test_energy_split(rng):
    group, _ = build_group({"type": "cyclic", "n": 6})
    inv = InvariantMap.from_group(group, 3)
    for _ in range(50):
        a1 = rng.standard_normal(6)
        a2 = rng.standard_normal(6)
        split = kernel_energy(inv, a1, a2)
        distance = tensor_distance_sq(a1, a2, 3)
        kernel = explicit_kernel_energy(inv, a1, a2)
        assert split.f_energy + kernel == pytest.approx(distance, rel=1e-9)
        assert split.total == pytest.approx(distance, rel=1e-9)
        assert 0.0 <= split.delta_fraction <= 1.0


def test_zero_difference():
    inv = InvariantMap.from_group(cyclic_group(4), 2)
    a = np.array([1.0, -2.0, 0.5, 3.0])
    with pytest.raises(ZeroDifference):
        kernel_energy(inv, a, a)
    # a and -a share every even tensor power
    with pytest.raises(ZeroDifference):
        kernel_energy(inv, a, -a)


def test_streamed_distance_matches_closed_form(rng):
    a1 = rng.standard_normal(5)
    a2 = rng.standard_normal(5)
    closed = tensor_distance_sq(a1, a2, 3)
    streamed = tensor_distance_sq(a1, a2, 3, streamed=True)
    assert streamed == pytest.approx(closed, rel=1e-10)


def test_stacked_invariant_concatenates(rng):
    group = cyclic_group(4)
    a = rng.standard_normal(4)
    stacked = stacked_invariant(group, a, [1, 2])
    first = apply_invariant(InvariantMap.from_group(group, 1), a).z
    second = apply_invariant(InvariantMap.from_group(group, 2), a).z
    np.testing.assert_array_equal(stacked.z, np.concatenate([first, second]))
    assert stacked.terms == 4 + 16


@pytest.mark.parametrize("n", [3, 5, 8, 12, 16])
def test_triple_correlation_is_a_multi_correlation(n, rng):
    group = cyclic_group(n)
    z = rng.integers(-5, 6, size=n).astype(float)
    table = triple_correlation(z)
    for g, h in itertools.product(range(n), repeat=2):
        assert table[g, h] == multi_correlation(group, z, [g, h])


def test_extension_needs_transitivity():
    group = close_generators([[1, 0, 2]], cap=10)
    with pytest.raises(NotTransitive):
        extension(np.ones(3), group, 0)


def test_extension_indexes_by_element():
    group = cyclic_group(4)
    ext = extension([5.0, 6.0, 7.0, 8.0], group, 1)
    # element k maps 1 to 1 + k
    np.testing.assert_array_equal(ext.bar, [6.0, 7.0, 8.0, 5.0])


@pytest.mark.parametrize("spec, omega", [
    ({"type": "cyclic", "n": 5}, 3),
    ({"type": "sym_subsets", "l": 4, "w": 2}, 2),
    ({"type": "sym_subsets", "l": 4, "w": 2}, 3),
    ({"type": "symmetric", "n": 4}, 3),
    ({"type": "regular", "of": {"type": "cyclic", "n": 3}}, 2),
])
def test_correlation_table_factor(spec, omega, rng):
    group, _ = build_group(spec)
    a = rng.integers(-3, 4, size=group.n).astype(float)
    table = correlation_table(a, group, 0, omega)

    assert len(table.values) == group.n**(omega - 1)
    assert table.distinct_values() <= table.orbits.kappa
    for key, value in table.values.items():
        oid = table.orbit_ids[key]
        expected = table.factor(oid) * orbit_functional(table.orbits, oid, a)
        assert value == pytest.approx(expected, abs=1e-9)


def test_swapped_pair_lies_in_the_kernel():
    inv = InvariantMap.from_group(cyclic_group(2), 1)
    split = kernel_energy(inv, [1.0, 0.0], [0.0, 1.0])
    assert split.f_energy == 0.0
    assert split.total == 2.0
    assert split.delta_fraction == 1.0
