import itertools

import numpy as np
import pytest

from gembed.error import (
    IndexOutOfRange,
    LengthMismatch,
    TupleSpaceCapExceeded,
    UnknownOrbit,
)
from gembed.group import (
    act_tuple,
    build_group,
    close_generators,
    cyclic_group,
    sym_subsets_group,
)
from gembed.orbit import (
    burnside_count,
    enumerate_orbits,
    fixed_points,
    orbit_table,
    partition_burnside_count,
    stream_orbit_members,
)


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("omega", [1, 2, 3])
def test_cyclic_orbit_count(n, omega):
    group = cyclic_group(n)
    orbits = enumerate_orbits(group, omega)
    assert orbits.kappa == burnside_count(group, omega) == n**(omega - 1)


@pytest.mark.parametrize("l", [3, 4])
@pytest.mark.parametrize("omega", [1, 2, 3])
def test_sym_subsets_partition_count(l, omega):
    group, _ = sym_subsets_group(l, 2)
    kappa = enumerate_orbits(group, omega).kappa
    assert kappa == burnside_count(group, omega) == partition_burnside_count(l, omega)


def test_partition_count_known_values():
    # Sym_4 on the 6 edges of K_4: 1 orbit of edges, 3 orbits of edge pairs
    assert partition_burnside_count(4, 1) == 1
    assert partition_burnside_count(4, 2) == 3


def test_trivial_group_has_singleton_orbits():
    group = close_generators([], cap=1, n=3)
    orbits = enumerate_orbits(group, 2)
    assert orbits.kappa == 9
    assert list(orbits.orbit_sizes) == [1] * 9


def test_orbit_ids_follow_smallest_member():
    orbits = enumerate_orbits(cyclic_group(4), 2)
    reps = [orbits.encode(rep) for rep in orbits.orbit_reps]
    assert reps == sorted(reps)
    assert orbits.orbit_reps[0] == (0, 0)
    for oid in range(orbits.kappa):
        codes = orbits.member_codes(oid)
        assert codes[0] == reps[oid]
        assert list(codes) == sorted(codes)


def test_orbits_are_closed_under_the_group():
    group, _ = build_group({"type": "symmetric", "n": 3})
    orbits = enumerate_orbits(group, 2)
    for t in itertools.product(range(3), repeat=2):
        for g in group.elements:
            assert orbits.orbit_id(act_tuple(g, t)) == orbits.orbit_id(t)

    assert orbits.kappa == 2
    assert sorted(orbits.orbit_sizes) == [3, 6]


def test_encode_decode():
    orbits = enumerate_orbits(cyclic_group(5), 3)
    assert orbits.encode((1, 2, 3)) == 1 * 25 + 2 * 5 + 3
    assert orbits.decode(38) == (1, 2, 3)

    with pytest.raises(LengthMismatch):
        orbits.encode((1, 2))
    with pytest.raises(IndexOutOfRange):
        orbits.encode((1, 2, 5))
    with pytest.raises(IndexOutOfRange):
        orbits.decode(125)


def test_unknown_orbit():
    orbits = enumerate_orbits(cyclic_group(3), 2)
    with pytest.raises(UnknownOrbit):
        orbits.member_codes(orbits.kappa)


def test_stream_members_match_sizes():
    orbits = enumerate_orbits(cyclic_group(6), 2)
    for oid in range(orbits.kappa):
        members = list(stream_orbit_members(orbits, oid))
        assert len(members) == orbits.orbit_sizes[oid]
        assert all(orbits.orbit_id(t) == oid for t in members)


def test_tuple_space_cap():
    with pytest.raises(TupleSpaceCapExceeded) as exc:
        enumerate_orbits(cyclic_group(10), 3, cap=999)

    assert exc.value.size == 1000
    assert exc.value.cap == 999


def test_fixed_points_profile():
    profile = fixed_points(cyclic_group(4))
    assert profile.theta == (4, 0, 0, 0)
    assert len(profile) == 4


def test_orbit_table_rows():
    orbits = enumerate_orbits(cyclic_group(3), 2)
    table = orbit_table(orbits)
    assert [row["id"] for row in table] == [0, 1, 2]
    assert sum(row["size"] for row in table) == 9
    assert table[0]["rep"] == [0, 0]
    assert np.all([isinstance(row["size"], int) for row in table])


@pytest.mark.parametrize("spec", [
    {"type": "cyclic", "n": 6},
    {"type": "symmetric", "n": 4},
    {"type": "sym_subsets", "l": 4, "w": 2},
])
def test_fixed_points_are_a_class_function(spec):
    group, _ = build_group(spec)
    profile = fixed_points(group)
    for i, g in enumerate(group.elements):
        for sigma in group.elements:
            assert profile[group.index_of(group.conjugate(g, sigma))] == profile[i]
