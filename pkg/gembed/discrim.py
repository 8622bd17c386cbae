"""Canonical representatives, discriminability constants and box-counting."""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, List, MutableMapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .error import DegenerateLadder, LengthMismatch, TooFewPoints, ZeroDifference
from .group import FiniteGroup
from .invariant import InvariantMap, apply_invariant, kernel_energy

log = logging.getLogger("gembed.discrim")


def _vector_orbit(a: np.ndarray, group: FiniteGroup) -> np.ndarray:
    # Row i is act_vector(elements[i], a)
    return a[group.inverse_images]


def _lex_argmin(rows: np.ndarray) -> int:
    return int(np.lexsort(rows.T[::-1])[0])


def canonicalize(a: Any, group: FiniteGroup) -> Tuple[np.ndarray, bool]:
    """Lexicographically smallest member of {a^g}.

    Also reports whether a non-identity g fixes ``a``.
    """

    vec = np.asarray(a, dtype=float)
    if vec.shape != (group.n, ):
        raise LengthMismatch(
            f"Vector of shape {vec.shape} does not fit {group.n} points")

    orbit = _vector_orbit(vec, group)
    fixed = np.all(orbit == vec[None, :], axis=1)
    fixed[group.identity_index] = False
    return orbit[_lex_argmin(orbit)].copy(), bool(fixed.any())


def _stabilizer_order(a: np.ndarray, group: FiniteGroup) -> int:
    return int(np.count_nonzero(np.all(_vector_orbit(a, group) == a[None, :], axis=1)))


@dataclass(frozen=True)
class CanonicalSet:
    """Deduplicated canonical forms of a dataset, sorted lexicographically.

    ``class_sizes[i]`` counts the input points that reduced to ``reps[i]``;
    ``members[i]`` lists their input indices.
    """

    reps: List[np.ndarray]
    class_sizes: List[int]
    fixed_flags: List[bool]
    members: List[List[int]] = field(repr=False)
    orbit_sizes: List[int] = field(default_factory=list)
    inputs: int = 0

    @property
    def k(self) -> int:
        return len(self.reps)

    @property
    def reduction_factor(self) -> float:
        return self.inputs / self.k if self.k else 0.0


def reduce_dataset(points: Sequence[Any], group: FiniteGroup) -> CanonicalSet:
    first_seen: MutableMapping[bytes, int] = {}
    reps: List[np.ndarray] = []
    flags: List[bool] = []
    members: List[List[int]] = []
    for index, a in enumerate(points):
        canon, fixed = canonicalize(a, group)
        key = canon.tobytes()
        slot = first_seen.get(key)
        if slot is None:
            first_seen[key] = slot = len(reps)
            reps.append(canon)
            flags.append(fixed)
            members.append([])
        members[slot].append(index)

    order = _lex_order(reps)
    sorted_reps = [reps[i] for i in order]
    log.debug("Reduced %d points to %d canonical representatives", len(points),
              len(reps))
    return CanonicalSet(
        reps=sorted_reps,
        class_sizes=[len(members[i]) for i in order],
        fixed_flags=[flags[i] for i in order],
        members=[members[i] for i in order],
        orbit_sizes=[
            group.order // _stabilizer_order(rep, group) for rep in sorted_reps
        ],
        inputs=len(points),
    )


def _lex_order(reps: List[np.ndarray]) -> List[int]:
    if not reps:
        return []

    return [int(i) for i in np.lexsort(np.stack(reps).T[::-1])]


class PairFraction(NamedTuple):
    i: int
    j: int
    delta_fraction: float


@dataclass(frozen=True)
class DeltaReport:
    delta: float
    argmax_pair: Tuple[int, int]
    per_pair: Optional[List[PairFraction]] = None

    @property
    def discriminable(self) -> bool:
        return self.delta < 1.0 - 1e-9


def compute_delta(canon: CanonicalSet, inv: InvariantMap,
                  table: bool = False) -> DeltaReport:
    """Largest kernel fraction over all unordered pairs of representatives."""

    if canon.k < 2:
        raise TooFewPoints(f"Need at least two canonical points, got {canon.k}")

    best = PairFraction(0, 1, -math.inf)
    rows = []
    for i, j in itertools.combinations(range(canon.k), 2):
        try:
            fraction = kernel_energy(inv, canon.reps[i], canon.reps[j]).delta_fraction
        except ZeroDifference:
            # Distinct points with equal tensor powers (a and -a at even omega)
            log.warning("Representatives %d and %d have identical tensor powers", i, j)
            fraction = 1.0

        entry = PairFraction(i, j, fraction)
        rows.append(entry)
        if fraction > best.delta_fraction:
            best = entry

    return DeltaReport(delta=best.delta_fraction,
                       argmax_pair=(best.i, best.j),
                       per_pair=rows if table else None)


@dataclass(frozen=True)
class Discriminability:
    ok: bool
    pair: Optional[Tuple[int, int]] = None
    outputs: Optional[Tuple[np.ndarray, np.ndarray]] = None

    def __bool__(self) -> bool:
        return self.ok


def check_discriminable(canon: CanonicalSet, inv: InvariantMap,
                        tol: float = 1e-9) -> Discriminability:
    zs = [apply_invariant(inv, rep).z for rep in canon.reps]
    for i, j in itertools.combinations(range(len(zs)), 2):
        if np.max(np.abs(zs[i] - zs[j])) <= tol:
            return Discriminability(ok=False, pair=(i, j), outputs=(zs[i], zs[j]))

    return Discriminability(ok=True)


@dataclass(frozen=True)
class BoxDimEstimate:
    epsilons: List[float]
    counts: List[int]
    slope: float
    r2: float


def dyadic_ladder(hi_exp: int, lo_exp: int) -> List[float]:
    """Scales 2^-hi_exp, ..., 2^-lo_exp, coarsest first."""

    if lo_exp <= hi_exp:
        raise DegenerateLadder("lo_exp must exceed hi_exp")

    return [2.0**-e for e in range(hi_exp, lo_exp + 1)]


def estimate_box_dimension(points: Any, eps_ladder: Sequence[float]) -> BoxDimEstimate:
    """Fits log N_ε against −log ε over the given scales.

    The grid is anchored at the coordinate-wise minimum of the data.
    """

    ladder = [float(e) for e in eps_ladder]
    if len(ladder) < 2:
        raise DegenerateLadder("Need at least two scales")
    if any(e <= 0.0 for e in ladder):
        raise DegenerateLadder("Scales must be positive")
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise DegenerateLadder("Scales must be strictly decreasing")

    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if not len(pts):
        raise TooFewPoints("Cannot box-count an empty point set")

    shifted = pts - pts.min(axis=0)
    counts = [
        len(np.unique(np.floor(shifted / e).astype(np.int64), axis=0)) for e in ladder
    ]

    x = -np.log(ladder)
    y = np.log(counts)
    slope, intercept = np.polyfit(x, y, 1)
    ss_res = float(((y - (slope * x + intercept))**2).sum())
    ss_tot = float(((y - y.mean())**2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot

    return BoxDimEstimate(epsilons=ladder, counts=counts, slope=float(slope), r2=r2)
