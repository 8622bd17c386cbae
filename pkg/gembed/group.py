"""Finite permutation groups and their actions on points, vectors and tuples."""

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import (
    Any,
    Deque,
    Iterable,
    List,
    Mapping,
    MutableMapping,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import numpy as np

from .error import (
    CapExceeded,
    ClosureCapExceeded,
    GroupSpecError,
    IndexOutOfRange,
    LengthMismatch,
    NotABijection,
    NotTransitive,
)
from .util.config import Caps

log = logging.getLogger("gembed.group")

Image = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection on {0..n-1} stored as its image array (``image[x] = g(x)``).

    Ordering is lexicographic on the image array. The constructor trusts its input;
    use :meth:`of` for anything user supplied.
    """

    image: Image

    @classmethod
    def of(cls, image: Iterable[int]) -> "Permutation":
        img = tuple(int(x) for x in image)
        if sorted(img) != list(range(len(img))):
            raise NotABijection(
                f"{list(img)} is not a permutation of 0..{len(img) - 1}")

        return cls(img)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(n))
        for cycle in cycles:
            for i, x in enumerate(cycle):
                img[x] = cycle[(i + 1) % len(cycle)]

        return cls.of(img)

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def compose(self, other: "Permutation") -> "Permutation":
        """Returns ``self ∘ other``, i.e. ``other`` is applied first."""

        img = self.image
        return Permutation(tuple(img[x] for x in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for x, y in enumerate(self.image):
            inv[y] = x

        return Permutation(tuple(inv))

    @property
    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.image))

    def fixed_points(self) -> int:
        return sum(1 for x, y in enumerate(self.image) if x == y)

    def cycle_type(self) -> Tuple[int, ...]:
        seen = [False] * len(self.image)
        lengths = []
        for start in range(len(self.image)):
            if seen[start]:
                continue

            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.image[x]
                length += 1
            lengths.append(length)

        return tuple(sorted(lengths, reverse=True))

    def __repr__(self) -> str:
        return f"Permutation({list(self.image)})"


@dataclass(frozen=True)
class GSpaceLabels:
    """Cosmetic label per point, e.g. ``"{1,3}"`` for a subset."""

    labels: Tuple[str, ...]

    @classmethod
    def default(cls, n: int) -> "GSpaceLabels":
        return cls(tuple(str(x) for x in range(n)))

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, x: int) -> str:
        return self.labels[x]


@dataclass(frozen=True)
class FiniteGroup:
    """An explicit permutation group on ``n`` points.

    ``elements`` is deduplicated and sorted lexicographically, so the identity is always
    at index 0.
    """

    n: int
    elements: Tuple[Permutation, ...]
    generators: Tuple[Permutation, ...]
    identity_index: int = 0

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def _index(self) -> Mapping[Image, int]:
        return {g.image: i for i, g in enumerate(self.elements)}

    def index_of(self, g: Permutation) -> int:
        try:
            return self._index[g.image]
        except KeyError:
            raise IndexOutOfRange(f"{g!r} is not an element of this group") from None

    @cached_property
    def images(self) -> np.ndarray:
        """``images[i, x] = elements[i](x)``."""

        if not self.elements:
            return np.zeros((0, self.n), dtype=np.int64)

        images = np.array([g.image for g in self.elements], dtype=np.int64)
        return images.reshape(self.order, self.n)

    @cached_property
    def inverse_images(self) -> np.ndarray:
        """``inverse_images[i, y] = elements[i]^{-1}(y)``."""

        inv = np.empty_like(self.images)
        rows = np.arange(self.order)[:, None]
        inv[rows, self.images] = np.arange(self.n)[None, :]
        return inv

    @cached_property
    def multiplication_table(self) -> np.ndarray:
        """``table[i, j]`` is the index of ``elements[i] ∘ elements[j]``."""

        imgs = self.images
        keys = {row.tobytes(): i for i, row in enumerate(imgs)}
        table = np.empty((self.order, self.order), dtype=np.int64)
        for i in range(self.order):
            # Row i composed with every element: imgs[i][imgs[j]]
            prod = imgs[i][imgs]
            for j in range(self.order):
                table[i, j] = keys[prod[j].tobytes()]

        return table

    def conjugate(self, g: Permutation, sigma: Permutation) -> Permutation:
        """Returns ``sigma ∘ g ∘ sigma^{-1}``."""

        return sigma.compose(g).compose(sigma.inverse())

    def orbit_of_point(self, x: int) -> List[int]:
        _check_point(x, self.n)
        seen = {x}
        queue: Deque[int] = deque([x])
        while queue:
            y = queue.popleft()
            for s in self.generators:
                z = s.image[y]
                if z not in seen:
                    seen.add(z)
                    queue.append(z)

        return sorted(seen)

    def is_transitive(self) -> bool:
        return self.n <= 1 or len(self.orbit_of_point(0)) == self.n


def _check_point(x: int, n: int) -> None:
    if not 0 <= x < n:
        raise IndexOutOfRange(f"Point {x} is outside 0..{n - 1}")


def _close(n: int, generators: Sequence[Image], cap: int) -> Set[Image]:
    identity = tuple(range(n))
    seen = {identity}
    queue: Deque[Image] = deque([identity])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = tuple(s[x] for x in g)
            if h in seen:
                continue

            seen.add(h)
            if len(seen) > cap:
                raise ClosureCapExceeded(cap)
            queue.append(h)

    return seen


def close_generators(generators: Sequence[Any],
                     cap: int,
                     n: Optional[int] = None) -> FiniteGroup:
    """Closes ``generators`` under composition, breadth first.

    ``n`` is only needed when ``generators`` is empty; otherwise it must agree
    with them.
    """

    if cap < 1:
        raise ValueError("cap must be positive")

    gens = [g if isinstance(g, Permutation) else Permutation.of(g) for g in generators]
    gens = [Permutation.of(g.image) for g in gens]
    sizes = {g.n for g in gens}
    if n is not None:
        sizes.add(n)
    if len(sizes) > 1:
        raise NotABijection(f"Generators act on differing point counts {sorted(sizes)}")
    if not sizes:
        raise ValueError("n is required for an empty generating set")
    (npoints,) = sizes

    elements = sorted(_close(npoints, [g.image for g in gens], cap))
    log.debug("Closed %d generators on %d points into %d elements", len(gens), npoints,
              len(elements))

    return FiniteGroup(
        n=npoints,
        elements=tuple(Permutation(e) for e in elements),
        generators=tuple(gens),
    )


def cyclic_group(n: int) -> FiniteGroup:
    """Rotations ``i -> i + k mod n``."""

    if n < 1:
        raise ValueError("n must be positive")

    rotations = tuple(
        Permutation(tuple((i + k) % n for i in range(n))) for k in range(n))
    return FiniteGroup(n=n, elements=rotations, generators=rotations[1:2])


def symmetric_group(k: int, caps: Caps = Caps()) -> FiniteGroup:
    """Sym_k in its natural action on k letters."""

    if k < 1:
        raise ValueError("k must be positive")
    if math.factorial(k) > caps.group_cap:
        raise CapExceeded(f"{k}! exceeds the group cap of {caps.group_cap}")

    return close_generators(_symmetric_generators(k), caps.group_cap, n=k)


def _symmetric_generators(k: int) -> List[Permutation]:
    gens = []
    if k >= 2:
        gens.append(Permutation.from_cycles(k, [(0, 1)]))
    if k >= 3:
        gens.append(Permutation.from_cycles(k, [tuple(range(k))]))

    return gens


def sym_subsets_group(l: int, w: int,
                      caps: Caps = Caps()) -> Tuple[FiniteGroup, GSpaceLabels]:
    """Sym_l acting on the size-``w`` subsets of ``l`` letters."""

    if not 1 <= w <= l:
        raise ValueError(f"Need 1 <= w <= l, got l={l}, w={w}")

    n = math.comb(l, w)
    if n > caps.point_cap:
        raise CapExceeded(
            f"C({l}, {w}) = {n} exceeds the point cap of {caps.point_cap}")
    if math.factorial(l) > caps.group_cap:
        raise CapExceeded(f"{l}! exceeds the group cap of {caps.group_cap}")

    subsets = list(itertools.combinations(range(l), w))
    where = {s: i for i, s in enumerate(subsets)}
    gens = []
    for letter_perm in _symmetric_generators(l):
        img = [where[tuple(sorted(letter_perm(x) for x in s))] for s in subsets]
        gens.append(Permutation.of(img))

    group = close_generators(gens, caps.group_cap, n=n)
    labels = GSpaceLabels(
        tuple("{" + ",".join(str(x + 1) for x in s) + "}" for s in subsets))
    return group, labels


def act_vector(g: Permutation, a: Any) -> np.ndarray:
    """Returns ``a^g`` with ``(a^g)[g(x)] = a[x]``."""

    vec = np.asarray(a, dtype=float)
    if vec.shape != (g.n,):
        raise LengthMismatch(f"Vector of shape {vec.shape} does not fit {g.n} points")

    out = np.empty_like(vec)
    out[list(g.image)] = vec
    return out


def act_tuple(g: Permutation, t: Sequence[int]) -> Tuple[int, ...]:
    for x in t:
        _check_point(x, g.n)

    return tuple(g.image[x] for x in t)


def regular_space(group: FiniteGroup,
                  caps: Caps = Caps()) -> Tuple[FiniteGroup, GSpaceLabels]:
    """The group acting on its own elements by left multiplication."""

    if group.order > caps.point_cap:
        raise CapExceeded(
            f"|G| = {group.order} exceeds the point cap of {caps.point_cap}")

    table = group.multiplication_table
    left = {i: Permutation(tuple(int(x) for x in table[i])) for i in range(group.order)}
    elements = tuple(sorted(left.values()))
    generators = tuple(left[group.index_of(s)] for s in group.generators)

    labels = ["e" if g.is_identity else f"g{i}" for i, g in enumerate(group.elements)]
    regular = FiniteGroup(n=group.order, elements=elements, generators=generators)
    return regular, GSpaceLabels(tuple(labels))


def _generating_subset(n: int, elements: Sequence[Permutation],
                       cap: int) -> Tuple[Permutation, ...]:
    gens: List[Permutation] = []
    span = {tuple(range(n))}
    for g in elements:
        if g.image in span:
            continue

        gens.append(g)
        span = _close(n, [s.image for s in gens], cap)

    return tuple(gens)


def stabilizer(group: FiniteGroup, x1: int) -> FiniteGroup:
    """Subgroup of elements fixing ``x1``."""

    _check_point(x1, group.n)
    members = tuple(g for g in group.elements if g.image[x1] == x1)
    return FiniteGroup(
        n=group.n,
        elements=members,
        generators=_generating_subset(group.n, members, max(group.order, 1)),
    )


def coset_reps(group: FiniteGroup, x1: int) -> List[Permutation]:
    """One ``t_j`` per point with ``t_j(x1) = x_j``.

    Each is the lexicographically smallest such element.
    """

    _check_point(x1, group.n)
    reps: List[Optional[Permutation]] = [None] * group.n
    missing = group.n
    for g in group.elements:
        y = g.image[x1]
        if reps[y] is None:
            reps[y] = g
            missing -= 1
            if not missing:
                break

    for y, rep in enumerate(reps):
        if rep is None:
            raise NotTransitive(x1, y)

    return reps  # type: ignore


def build_group(spec: Mapping[str, Any],
                caps: Caps = Caps()) -> Tuple[FiniteGroup, GSpaceLabels]:
    """Realizes a JSON group spec.

    Supported shapes::

        {"type": "cyclic", "n": 8}
        {"type": "sym_subsets", "l": 5, "w": 2}
        {"type": "symmetric", "n": 4}
        {"type": "generators", "n": 6, "generators": [[1, 2, 3, 4, 5, 0]]}
        {"type": "regular", "of": <spec>}
    """

    kind = spec.get("type")
    try:
        if kind == "cyclic":
            n = _positive(spec, "n")
            if n > caps.point_cap:
                raise CapExceeded(f"n = {n} exceeds the point cap of {caps.point_cap}")
            return cyclic_group(n), GSpaceLabels.default(n)
        if kind == "symmetric":
            n = _positive(spec, "n")
            return symmetric_group(n, caps), GSpaceLabels.default(n)
        if kind == "sym_subsets":
            return sym_subsets_group(_positive(spec, "l"), _positive(spec, "w"), caps)
        if kind == "generators":
            n = _positive(spec, "n")
            gens = spec.get("generators", [])
            if not isinstance(gens, list):
                raise GroupSpecError("'generators' must be a list of image arrays")
            return close_generators(gens, caps.group_cap, n=n), GSpaceLabels.default(n)
        if kind == "regular":
            inner = spec.get("of")
            if not isinstance(inner, dict):
                raise GroupSpecError("'regular' needs an 'of' group spec object")
            base, _ = build_group(inner, caps)
            return regular_space(base, caps)
    except (TypeError, KeyError) as e:
        raise GroupSpecError(f"Malformed group spec {dict(spec)}: {e}") from e

    raise GroupSpecError(f"Unknown group type {kind!r}")


def _positive(spec: Mapping[str, Any], key: str) -> int:
    value = spec.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise GroupSpecError(f"'{key}' must be a positive integer, got {value!r}")

    return value


def describe(group: FiniteGroup, labels: GSpaceLabels) -> MutableMapping[str, Any]:
    """Summary used by the ``group`` command."""

    return {
        "n": group.n,
        "order": group.order,
        "generators": [list(g.image) for g in group.generators],
        "transitive": group.is_transitive(),
        "labels": list(labels.labels),
    }
