import math

import numpy as np
import pytest

from gembed.error import (
    CapExceeded,
    ClosureCapExceeded,
    GroupSpecError,
    IndexOutOfRange,
    LengthMismatch,
    NotABijection,
    NotTransitive,
)
from gembed.group import (
    FiniteGroup,
    Permutation,
    act_tuple,
    act_vector,
    build_group,
    close_generators,
    coset_reps,
    cyclic_group,
    describe,
    regular_space,
    stabilizer,
    sym_subsets_group,
    symmetric_group,
)
from gembed.util.config import Caps


def test_permutation_rejects_non_bijection():
    with pytest.raises(NotABijection):
        Permutation.of([0, 0, 1])


def test_compose_applies_right_factor_first():
    g = Permutation.of([1, 2, 0])
    h = Permutation.of([0, 2, 1])
    gh = g.compose(h)
    for x in range(3):
        assert gh(x) == g(h(x))

    assert g.compose(g.inverse()).is_identity


def test_cycle_type_and_from_cycles():
    g = Permutation.from_cycles(6, [(0, 1, 2), (3, 4)])
    assert g.image == (1, 2, 0, 4, 3, 5)
    assert g.cycle_type() == (3, 2, 1)
    assert g.fixed_points() == 1


def test_cyclic_group_elements_are_rotations():
    group = cyclic_group(5)
    assert group.order == 5
    assert group.elements[group.identity_index].is_identity
    assert [g(0) for g in group.elements] == [0, 1, 2, 3, 4]
    assert group.is_transitive()


def test_symmetric_group_order():
    assert symmetric_group(4).order == 24
    assert symmetric_group(1).order == 1


def test_symmetric_group_cap():
    with pytest.raises(CapExceeded):
        symmetric_group(6, Caps(group_cap=100))


def test_sym_subsets_labels_and_order():
    group, labels = sym_subsets_group(4, 2)
    assert group.n == 6
    assert group.order == 24
    assert labels.labels == ("{1,2}", "{1,3}", "{1,4}", "{2,3}", "{2,4}", "{3,4}")
    assert group.is_transitive()


def test_closure_cap():
    with pytest.raises(ClosureCapExceeded):
        close_generators([Permutation.of([1, 2, 3, 4, 0])], cap=3)


def test_trivial_group_from_empty_generators():
    group = close_generators([], cap=10, n=3)
    assert group.order == 1
    assert not group.is_transitive()


def test_multiplication_table_matches_compose():
    group = symmetric_group(3)
    table = group.multiplication_table
    for i, g in enumerate(group.elements):
        for j, h in enumerate(group.elements):
            assert group.elements[table[i, j]] == g.compose(h)


def test_act_vector_convention():
    g = Permutation.of([1, 2, 0])
    out = act_vector(g, [10.0, 20.0, 30.0])
    np.testing.assert_array_equal(out, [30.0, 10.0, 20.0])
    assert act_tuple(g, (0, 2)) == (1, 0)

    with pytest.raises(LengthMismatch):
        act_vector(g, [1.0, 2.0])
    with pytest.raises(IndexOutOfRange):
        act_tuple(g, (3, ))


def test_action_is_a_homomorphism(rng):
    group = symmetric_group(4)
    a = rng.standard_normal(4)
    g, h = group.elements[5], group.elements[17]
    np.testing.assert_array_equal(act_vector(g.compose(h), a),
                                  act_vector(g, act_vector(h, a)))


def test_regular_space_is_simply_transitive():
    group, labels = regular_space(cyclic_group(4))
    assert group.n == 4
    assert group.order == 4
    assert group.is_transitive()
    assert labels[0] == "e"
    for g in group.elements[1:]:
        assert g.fixed_points() == 0


def test_stabilizer_and_coset_reps():
    group = symmetric_group(4)
    stab = stabilizer(group, 2)
    assert stab.order == math.factorial(3)
    assert all(g(2) == 2 for g in stab.elements)

    reps = coset_reps(group, 2)
    assert [t(2) for t in reps] == [0, 1, 2, 3]


def test_coset_reps_needs_transitivity():
    group = close_generators([Permutation.of([1, 0, 2])], cap=10)
    with pytest.raises(NotTransitive):
        coset_reps(group, 0)


@pytest.mark.parametrize("spec, n, order", [
    ({"type": "cyclic", "n": 7}, 7, 7),
    ({"type": "symmetric", "n": 3}, 3, 6),
    ({"type": "sym_subsets", "l": 4, "w": 2}, 6, 24),
    ({"type": "generators", "n": 4, "generators": [[1, 0, 2, 3], [0, 1, 3, 2]]}, 4, 4),
    ({"type": "regular", "of": {"type": "symmetric", "n": 3}}, 6, 6),
])
def test_build_group(spec, n, order):
    group, labels = build_group(spec)
    assert isinstance(group, FiniteGroup)
    assert (group.n, group.order) == (n, order)
    assert len(labels) == n


@pytest.mark.parametrize("spec", [
    {"type": "dihedral", "n": 4},
    {"type": "cyclic"},
    {"type": "cyclic", "n": 0},
    {"type": "cyclic", "n": True},
    {"type": "generators", "n": 3, "generators": "nope"},
    {"type": "regular"},
])
def test_build_group_rejects_bad_specs(spec):
    with pytest.raises(GroupSpecError):
        build_group(spec)


def test_describe():
    group, labels = build_group({"type": "cyclic", "n": 3})
    info = describe(group, labels)
    assert info["order"] == 3
    assert info["transitive"] is True
    assert info["generators"] == [[1, 2, 0]]


SMALL_GROUPS = [
    {"type": "cyclic", "n": 5},
    {"type": "symmetric", "n": 4},
    {"type": "sym_subsets", "l": 4, "w": 2},
    {"type": "generators", "n": 5, "generators": [[1, 0, 2, 3, 4], [0, 1, 3, 4, 2]]},
    {"type": "regular", "of": {"type": "cyclic", "n": 4}},
]


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_orbit_stabilizer(spec):
    group, _ = build_group(spec)
    for x in range(group.n):
        assert len(group.orbit_of_point(x)) * stabilizer(group, x).order == group.order


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_closure_is_idempotent(spec):
    group, _ = build_group(spec)
    images = [g.image for g in group.elements]

    again = close_generators(group.elements, cap=10**6, n=group.n)
    assert [g.image for g in again.elements] == images
    regenerated = close_generators(group.generators, cap=10**6, n=group.n)
    assert [g.image for g in regenerated.elements] == images


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_action_law_holds_for_every_pair(spec, rng):
    group, _ = build_group(spec)
    a = rng.standard_normal(group.n)
    for g in group.elements:
        moved = act_vector(g, a)
        for h in group.elements:
            np.testing.assert_array_equal(act_vector(g.compose(h), a),
                                          act_vector(g, act_vector(h, a)))
            np.testing.assert_array_equal(act_vector(h, moved),
                                          act_vector(h.compose(g), a))
