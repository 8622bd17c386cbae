"""G-orbits on the tuple space X^ω, plus Burnside cross-checks."""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterator, List, MutableMapping, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .error import (
    IndexOutOfRange,
    LengthMismatch,
    NonIntegerBurnside,
    TupleSpaceCapExceeded,
    UnknownOrbit,
)
from .group import FiniteGroup
from .util.config import DEFAULTS

log = logging.getLogger("gembed.orbit")


def _weights(n: int, omega: int) -> np.ndarray:
    # Most significant limb first, so encoded order is lexicographic tuple order
    return n ** np.arange(omega - 1, -1, -1, dtype=np.int64)


def decode_codes(codes: np.ndarray, n: int, omega: int) -> np.ndarray:
    return (codes[:, None] // _weights(n, omega)[None, :]) % n


@dataclass(frozen=True)
class OrbitSet:
    """Partition of the n^ω tuples into G-orbits.

    Orbit ids ascend with the smallest encoded member, which is also the representative.
    """

    n: int
    omega: int
    orbit_of: np.ndarray
    orbit_sizes: np.ndarray
    orbit_reps: Tuple[Tuple[int, ...], ...]
    # Codes grouped by orbit, ascending inside each group
    members: np.ndarray = field(repr=False)
    offsets: np.ndarray = field(repr=False)

    @property
    def kappa(self) -> int:
        return len(self.orbit_sizes)

    @property
    def size(self) -> int:
        return len(self.orbit_of)

    def encode(self, t: Sequence[int]) -> int:
        if len(t) != self.omega:
            raise LengthMismatch(f"Tuple {tuple(t)} does not have {self.omega} entries")

        code = 0
        for x in t:
            if not 0 <= x < self.n:
                raise IndexOutOfRange(f"Point {x} is outside 0..{self.n - 1}")
            code = code * self.n + int(x)

        return code

    def decode(self, code: int) -> Tuple[int, ...]:
        if not 0 <= code < self.size:
            raise IndexOutOfRange(f"Tuple code {code} is outside 0..{self.size - 1}")

        out = []
        for _ in range(self.omega):
            code, x = divmod(code, self.n)
            out.append(x)

        return tuple(reversed(out))

    def orbit_id(self, t: Sequence[int]) -> int:
        return int(self.orbit_of[self.encode(t)])

    def member_codes(self, orbit_id: int) -> np.ndarray:
        if not 0 <= orbit_id < self.kappa:
            raise UnknownOrbit(orbit_id)

        return self.members[self.offsets[orbit_id]:self.offsets[orbit_id + 1]]


def check_tuple_space(n: int, omega: int, cap: int) -> int:
    if omega < 1:
        raise ValueError("omega must be positive")

    size = n**omega
    if size > cap:
        raise TupleSpaceCapExceeded(size, cap)

    return size


def enumerate_orbits(group: FiniteGroup, omega: int,
                     cap: int = DEFAULTS["tuple_cap"]) -> OrbitSet:
    """Partitions X^ω into orbits.

    Each generator contributes one edge per tuple, to its componentwise image;
    orbits are the connected components of that graph.
    """

    n = group.n
    size = check_tuple_space(n, omega, cap)
    codes = np.arange(size, dtype=np.int64)
    digits = decode_codes(codes, n, omega)
    weights = _weights(n, omega)

    sources: List[np.ndarray] = []
    targets: List[np.ndarray] = []
    for s in group.generators:
        img = np.asarray(s.image, dtype=np.int64)
        sources.append(codes)
        targets.append(img[digits] @ weights)

    if sources:
        rows = np.concatenate(sources)
        cols = np.concatenate(targets)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    weights = np.ones(len(rows), dtype=np.int8)
    graph = csr_matrix((weights, (rows, cols)), shape=(size, size))
    _, labels = connected_components(graph, directed=True, connection="weak")

    # Renumber components by their smallest code
    uniq, first = np.unique(labels, return_index=True)
    ranking = np.argsort(first, kind="stable")
    renumber = np.empty(len(uniq), dtype=np.int64)
    renumber[uniq[ranking]] = np.arange(len(uniq))
    orbit_of = renumber[labels]

    sizes = np.bincount(orbit_of, minlength=len(uniq))
    members = np.argsort(orbit_of, kind="stable")
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    reps = tuple(tuple(int(x) for x in digits[c]) for c in np.sort(first))

    log.debug("Found %d orbits on %d tuples (n=%d, omega=%d)", len(sizes), size, n,
              omega)
    return OrbitSet(
        n=n,
        omega=omega,
        orbit_of=orbit_of,
        orbit_sizes=sizes,
        orbit_reps=reps,
        members=members,
        offsets=offsets,
    )


def stream_orbit_members(orbits: OrbitSet, orbit_id: int) -> Iterator[Tuple[int, ...]]:
    for code in orbits.member_codes(orbit_id):
        yield orbits.decode(int(code))


@dataclass(frozen=True)
class FixedPointProfile:
    """``theta[i]`` is the number of points fixed by element ``i``."""

    theta: Tuple[int, ...]

    def __getitem__(self, index: int) -> int:
        return self.theta[index]

    def __len__(self) -> int:
        return len(self.theta)


def fixed_points(group: FiniteGroup) -> FixedPointProfile:
    fixed = (group.images == np.arange(group.n)[None, :]).sum(axis=1)
    return FixedPointProfile(tuple(int(x) for x in fixed))


def _exact_quotient(total: int, order: int) -> int:
    kappa, rem = divmod(total, order)
    if rem:
        raise NonIntegerBurnside(
            f"Burnside sum {total} is not divisible by |G| = {order}")

    return kappa


def burnside_count(group: FiniteGroup, omega: int) -> int:
    """κ_ω = (1/|G|) Σ_g θ(g)^ω, in exact integers."""

    if omega < 1:
        raise ValueError("omega must be positive")

    total = sum(theta**omega for theta in fixed_points(group).theta)
    return _exact_quotient(total, group.order)


def _partitions(l: int, largest: int = 0) -> Iterator[Tuple[int, ...]]:
    largest = largest or l
    if l == 0:
        yield ()
        return

    for part in range(min(l, largest), 0, -1):
        for rest in _partitions(l - part, part):
            yield (part, ) + rest


def partition_burnside_count(l: int, omega: int) -> int:
    """κ_ω for Sym_l acting on 2-subsets, summed over cycle types instead of elements.

    A letter permutation of cycle type λ fixes (#2-cycles) + C(#fixed letters, 2) pairs,
    and its conjugacy class has l!/z_λ members.
    """

    if l < 2:
        raise ValueError("Need at least two letters for 2-subsets")
    if omega < 1:
        raise ValueError("omega must be positive")

    total = 0
    for parts in _partitions(l):
        mult = Counter(parts)
        z = 1
        for length, count in mult.items():
            z *= length**count * math.factorial(count)

        theta = mult[2] + math.comb(mult[1], 2)
        total += (math.factorial(l) // z) * theta**omega

    return _exact_quotient(total, math.factorial(l))


def orbit_table(orbits: OrbitSet) -> List[MutableMapping[str, Any]]:
    return [{
        "id": i,
        "size": int(size),
        "rep": list(rep)
    } for i, (size, rep) in enumerate(zip(orbits.orbit_sizes, orbits.orbit_reps))]
