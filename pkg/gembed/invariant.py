"""The orbit-sum tensor invariant and the multi-correlation machinery built on it."""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Iterator, List, MutableMapping, NamedTuple, Sequence, Tuple

import numpy as np

from .error import (
    IndexOutOfRange,
    LengthMismatch,
    NotTransitive,
    TupleSpaceCapExceeded,
    ZeroDifference,
)
from .group import FiniteGroup, coset_reps
from .orbit import OrbitSet, check_tuple_space, decode_codes, enumerate_orbits
from .util.config import DEFAULTS

log = logging.getLogger("gembed.invariant")

CHUNK = 1 << 18
ORACLE_LIMIT = 4096


@dataclass(frozen=True)
class InvariantMap:
    """F_ω: tensor space to R^κ, one scaled orbit-sum per coordinate."""

    orbits: OrbitSet
    norm_factors: np.ndarray

    @classmethod
    def from_orbits(cls, orbits: OrbitSet) -> "InvariantMap":
        norm_factors = 1.0 / np.sqrt(orbits.orbit_sizes.astype(float))
        return cls(orbits=orbits, norm_factors=norm_factors)

    @classmethod
    def from_group(cls,
                   group: FiniteGroup,
                   omega: int,
                   cap: int = DEFAULTS["tuple_cap"]) -> "InvariantMap":
        return cls.from_orbits(enumerate_orbits(group, omega, cap))

    @property
    def omega(self) -> int:
        return self.orbits.omega

    @property
    def n(self) -> int:
        return self.orbits.n

    @property
    def kappa(self) -> int:
        return self.orbits.kappa


class InvariantVector(NamedTuple):
    z: np.ndarray
    # Product terms evaluated, always n^ω per input vector
    terms: int


class KernelEnergy(NamedTuple):
    f_energy: float
    total: float
    delta_fraction: float


def _as_point(a: Any, n: int) -> np.ndarray:
    vec = np.asarray(a, dtype=float)
    if vec.shape != (n, ):
        raise LengthMismatch(f"Vector of shape {vec.shape} does not fit {n} points")

    return vec


def _chunks(n: int, omega: int) -> Iterator[Tuple[slice, np.ndarray]]:
    size = n**omega
    for start in range(0, size, CHUNK):
        stop = min(start + CHUNK, size)
        codes = np.arange(start, stop, dtype=np.int64)
        yield slice(start, stop), decode_codes(codes, n, omega)


def _fsum_columns(partials: List[np.ndarray], width: int) -> np.ndarray:
    if not partials:
        return np.zeros(width)
    if len(partials) == 1:
        return partials[0]

    stacked = np.stack(partials)
    return np.array([math.fsum(stacked[:, i]) for i in range(width)])


def apply_invariant(inv: InvariantMap, a: Any) -> InvariantVector:
    """z_i = |Ω_i|^{-1/2} Σ_{t ∈ Ω_i} Π_j a[t_j], streamed over tuple space."""

    vec = _as_point(a, inv.n)
    orbit_of = inv.orbits.orbit_of
    partials = []
    terms = 0
    for span, digits in _chunks(inv.n, inv.omega):
        prods = vec[digits].prod(axis=1)
        terms += len(prods)
        partials.append(np.bincount(orbit_of[span], weights=prods, minlength=inv.kappa))

    sums = _fsum_columns(partials, inv.kappa)
    return InvariantVector(z=sums * inv.norm_factors, terms=terms)


def orbit_functional(orbits: OrbitSet, orbit_id: int, a: Any) -> float:
    """Unnormalized orbit sum f_Ω(a)."""

    vec = _as_point(a, orbits.n)
    codes = orbits.member_codes(orbit_id)
    prods = vec[decode_codes(codes, orbits.n, orbits.omega)].prod(axis=1)
    return math.fsum(prods)


def tensor_distance_sq(a1: Any,
                       a2: Any,
                       omega: int,
                       *,
                       streamed: bool = False,
                       cap: int = DEFAULTS["tuple_cap"]) -> float:
    """‖a1^{⊗ω} − a2^{⊗ω}‖².

    The closed form uses inner products only; ``streamed=True`` walks every tuple.
    """

    v1 = np.asarray(a1, dtype=float)
    v2 = np.asarray(a2, dtype=float)
    if v1.ndim != 1 or v1.shape != v2.shape:
        raise LengthMismatch(f"Vectors of shape {v1.shape} and {v2.shape} differ")
    if omega < 1:
        raise ValueError("omega must be positive")

    if not streamed:
        n11 = float(v1 @ v1)
        n22 = float(v2 @ v2)
        n12 = float(v1 @ v2)
        return max(0.0, math.fsum((n11**omega, -2.0 * n12**omega, n22**omega)))

    n = len(v1)
    check_tuple_space(n, omega, cap)
    parts = []
    for _, digits in _chunks(n, omega):
        diff = v1[digits].prod(axis=1) - v2[digits].prod(axis=1)
        parts.append(math.fsum(diff * diff))

    return math.fsum(parts)


def kernel_energy(inv: InvariantMap, a1: Any, a2: Any) -> KernelEnergy:
    """Splits ‖a1^{⊗ω} − a2^{⊗ω}‖² into the part F_ω keeps and the part it kills.

    One pass accumulates the per-orbit sums of the difference tensor and its
    total energy; the kernel fraction follows from the rows of F_ω being orthonormal.
    """

    v1 = _as_point(a1, inv.n)
    v2 = _as_point(a2, inv.n)
    orbit_of = inv.orbits.orbit_of
    partials = []
    energy = []
    for span, digits in _chunks(inv.n, inv.omega):
        diff = v1[digits].prod(axis=1) - v2[digits].prod(axis=1)
        partials.append(np.bincount(orbit_of[span], weights=diff, minlength=inv.kappa))
        energy.append(math.fsum(diff * diff))

    total = math.fsum(energy)
    if total == 0.0:
        raise ZeroDifference("The difference tensor is identically zero")

    sums = _fsum_columns(partials, inv.kappa)
    f_energy = math.fsum((sums * inv.norm_factors)**2)
    return KernelEnergy(f_energy=f_energy,
                        total=total,
                        delta_fraction=1.0 - f_energy / total)


def _check_oracle_size(inv: InvariantMap, limit: int) -> None:
    if inv.orbits.size > limit:
        raise TupleSpaceCapExceeded(inv.orbits.size, limit)


def indicator_matrix(inv: InvariantMap, limit: int = ORACLE_LIMIT) -> np.ndarray:
    """Dense κ × n^ω matrix of scaled orbit indicators."""

    _check_oracle_size(inv, limit)
    mat = np.zeros((inv.kappa, inv.orbits.size))
    codes = np.arange(inv.orbits.size)
    mat[inv.orbits.orbit_of, codes] = inv.norm_factors[inv.orbits.orbit_of]
    return mat


def tensor_power(a: Any, omega: int) -> np.ndarray:
    """Flattened a^{⊗ω}, index order matching the tuple encoding."""

    vec = np.asarray(a, dtype=float)
    out = np.ones(1)
    for _ in range(omega):
        out = np.multiply.outer(out, vec).ravel()

    return out


def explicit_kernel_energy(inv: InvariantMap, a1: Any, a2: Any,
                           limit: int = ORACLE_LIMIT) -> float:
    """‖(I − MᵀM) t‖² for the difference tensor t, using the dense matrix."""

    mat = indicator_matrix(inv, limit)
    diff = (tensor_power(_as_point(a1, inv.n), inv.omega)
            - tensor_power(_as_point(a2, inv.n), inv.omega))
    residual = diff - mat.T @ (mat @ diff)
    return float(residual @ residual)


def stacked_invariant(group: FiniteGroup,
                      a: Any,
                      omegas: Sequence[int],
                      cap: int = DEFAULTS["tuple_cap"]) -> InvariantVector:
    """Concatenates F_ω(a) for each ω in ``omegas``."""

    for omega in omegas:
        check_tuple_space(group.n, omega, cap)

    blocks = [
        apply_invariant(InvariantMap.from_group(group, omega, cap), a)
        for omega in omegas
    ]
    return InvariantVector(z=np.concatenate([b.z for b in blocks]),
                           terms=sum(b.terms for b in blocks))


@dataclass(frozen=True)
class ExtensionVector:
    """ā indexed by group element: ``bar[g] = a[g(x1)]``."""

    bar: np.ndarray
    x1: int


def _require_transitive(group: FiniteGroup, x1: int) -> None:
    reached = set(group.orbit_of_point(x1))
    for y in range(group.n):
        if y not in reached:
            raise NotTransitive(x1, y)


def extension(a: Any, group: FiniteGroup, x1: int) -> ExtensionVector:
    vec = _as_point(a, group.n)
    _require_transitive(group, x1)
    return ExtensionVector(bar=vec[group.images[:, x1]], x1=x1)


def multi_correlation(group: FiniteGroup, z: Any, args: Sequence[int]) -> float:
    """Σ_σ z[σ] z[σ g_1] ⋯ z[σ g_{ω−1}], the ``g_j`` given as element indices."""

    vec = np.asarray(z, dtype=float)
    if vec.shape != (group.order, ):
        raise LengthMismatch(
            f"Vector of shape {vec.shape} does not fit a group of order {group.order}")

    table = group.multiplication_table
    prod = vec.copy()
    for g in args:
        if not 0 <= g < group.order:
            raise IndexOutOfRange(f"Element index {g} is outside 0..{group.order - 1}")
        prod *= vec[table[:, g]]

    return math.fsum(prod)


@dataclass(frozen=True)
class CorrelationTable:
    """Multi-correlation of ā at every tuple of coset representatives.

    ``values`` and ``orbit_ids`` are keyed by point tuples ``(i_1, ..., i_{ω−1})``;
    entry ``(i_1, ...)`` equals ``factor[id] * f_Ω`` where Ω is the orbit of
    ``(x_{i_1}, ..., x1)``.
    """

    omega: int
    x1: int
    values: MutableMapping[Tuple[int, ...], float]
    orbit_ids: MutableMapping[Tuple[int, ...], int]
    orbits: OrbitSet
    group_order: int

    def factor(self, orbit_id: int) -> float:
        """|G| / |Ω|, the order of the pointwise stabilizer of the argument tuple."""

        return self.group_order / int(self.orbits.orbit_sizes[orbit_id])

    def distinct_values(self, digits: int = 9) -> int:
        scale = max((abs(v) for v in self.values.values()), default=0.0) or 1.0
        return len({round(value / scale, digits) for value in self.values.values()})

    def orbits_hit(self) -> int:
        return len(set(self.orbit_ids.values()))


def correlation_table(a: Any,
                      group: FiniteGroup,
                      x1: int,
                      omega: int,
                      cap: int = DEFAULTS["tuple_cap"]) -> CorrelationTable:
    if omega < 1:
        raise ValueError("omega must be positive")

    ext = extension(a, group, x1)
    reps = [group.index_of(t) for t in coset_reps(group, x1)]
    orbits = enumerate_orbits(group, omega, cap)

    values = {}
    orbit_ids = {}
    for points in itertools.product(range(group.n), repeat=omega - 1):
        values[points] = multi_correlation(group, ext.bar, [reps[i] for i in points])
        orbit_ids[points] = orbits.orbit_id(points + (x1, ))

    log.debug("Correlation table: %d entries over %d orbits", len(values),
              len(set(orbit_ids.values())))
    return CorrelationTable(
        omega=omega,
        x1=x1,
        values=values,
        orbit_ids=orbit_ids,
        orbits=orbits,
        group_order=group.order,
    )
