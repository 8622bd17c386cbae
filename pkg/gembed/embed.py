"""Seeded Gaussian projection of invariant vectors and the harnesses that check it."""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import pdist

from .error import (
    DegenerateK,
    DimensionMismatch,
    DimensionOverflow,
    DuplicatePoints,
    EpsilonNotAboveDelta,
    InvalidBudget,
    NotDiscriminable,
    TooFewPoints,
)
from .invariant import InvariantMap, apply_invariant, tensor_distance_sq

log = logging.getLogger("gembed.embed")

# Spawn-key prefix for per-trial seeds; per-row keys are bare (row, )
_TRIAL_KEY = 0x7472
MAX_DIMENSION = 2**31


def _row_generator(seed: int, row: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(row, ))
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed: int, index: int) -> int:
    """Deterministic 64-bit sub-seed for trial ``index``."""

    sequence = np.random.SeedSequence(seed, spawn_key=(_TRIAL_KEY, index))
    state = sequence.generate_state(1, dtype=np.uint64)
    return int(state[0])


@dataclass(frozen=True)
class GaussianMap:
    """m × κ matrix with i.i.d. N(0, 1/m) entries.

    Row ``i`` is drawn from its own Philox stream, so entry ``(i, j)`` depends only on
    ``(seed, i, j)``.
    """

    m: int
    kappa: int
    seed: int
    matrix: np.ndarray = field(repr=False)

    def __call__(self, z: Any) -> np.ndarray:
        vec = np.asarray(z, dtype=float)
        if vec.shape[-1] != self.kappa:
            raise DimensionMismatch(f"Input of width {vec.shape[-1]} does not fit "
                                    f"a map from R^{self.kappa}")
        if vec.ndim == 1:
            return self.matrix @ vec

        # Row by row, so a sketch never depends on its neighbours in the batch
        out = np.empty((len(vec), self.m))
        for i, row in enumerate(vec):
            out[i] = self.matrix @ row

        return out


def sample_map(m: int, kappa: int, seed: int) -> GaussianMap:
    if m < 1 or kappa < 1:
        raise InvalidBudget(f"Need m >= 1 and kappa >= 1, got m={m}, kappa={kappa}")
    if seed < 0:
        raise InvalidBudget("seed must be non-negative")

    matrix = np.empty((m, kappa))
    for i in range(m):
        matrix[i] = _row_generator(seed, i).standard_normal(kappa)
    matrix /= math.sqrt(m)

    return GaussianMap(m=m, kappa=kappa, seed=seed, matrix=matrix)


def _check_fit(gmap: GaussianMap, inv: InvariantMap) -> None:
    if gmap.kappa != inv.kappa:
        raise DimensionMismatch(f"Map expects kappa={gmap.kappa} but the invariant "
                                f"has kappa={inv.kappa}")


def embed_point(gmap: GaussianMap,
                inv: InvariantMap,
                a: Any,
                return_cost: bool = False) -> Union[np.ndarray, Tuple[np.ndarray, int]]:
    """Φ(F_ω(a^{⊗ω})).

    With ``return_cost`` also returns the multiply count n^ω + m·κ.
    """

    _check_fit(gmap, inv)
    z = apply_invariant(inv, a)
    y = gmap(z.z)
    if return_cost:
        return y, z.terms + gmap.m * gmap.kappa

    return y


def invariant_matrix(inv: InvariantMap, points: Sequence[Any]) -> np.ndarray:
    """Invariant vectors of ``points``, one per row."""

    if not len(points):
        return np.zeros((0, inv.kappa))

    return np.stack([apply_invariant(inv, a).z for a in points])


@dataclass(frozen=True)
class JlBudget:
    k: int
    beta: float
    epsilon: float
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.k < 2:
            raise DegenerateK(f"Need at least two canonical points, got k={self.k}")
        if not 0.0 < self.beta < 1.0:
            raise InvalidBudget(f"beta must lie in (0, 1), got {self.beta}")
        if not 0.0 < self.epsilon < 1.0:
            raise InvalidBudget(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0.0 <= self.delta <= 1.0:
            raise InvalidBudget(f"delta must lie in [0, 1], got {self.delta}")
        if self.epsilon <= self.delta:
            raise EpsilonNotAboveDelta(
                f"epsilon={self.epsilon} must exceed delta={self.delta}")


def alpha(y: float) -> float:
    return y * y - y**3


def jl_dimension(budget: JlBudget) -> int:
    """Smallest m with m > (2 ln k + ln(1/β)) / α((ε − δ) / (1 − δ))."""

    y = (budget.epsilon - budget.delta) / (1.0 - budget.delta)
    rate = alpha(y)
    numer = 2.0 * math.log(budget.k) + math.log(1.0 / budget.beta)
    if rate <= 0.0:
        raise DimensionOverflow(
            f"alpha({y}) is not positive; the embedding dimension diverges")

    quotient = numer / rate
    if not math.isfinite(quotient) or quotient >= MAX_DIMENSION:
        raise DimensionOverflow(f"Embedding dimension {quotient:.3e} is out of range")

    floor = math.floor(quotient)
    return floor + 1 if floor == quotient else math.ceil(quotient)


class PairViolation(NamedTuple):
    i: int
    j: int
    ratio: float


@dataclass(frozen=True)
class IsometryReport:
    pairs_checked: int
    violations: List[PairViolation]
    worst_ratio: float

    @property
    def violation_fraction(self) -> float:
        return len(self.violations) / self.pairs_checked if self.pairs_checked else 0.0


def _first_duplicate(points: Sequence[np.ndarray]) -> Optional[Tuple[int, int]]:
    seen = {}
    for i, a in enumerate(points):
        key = a.tobytes()
        if key in seen:
            return seen[key], i
        seen[key] = i

    return None


def verify_isometry(points: Sequence[Any], inv: InvariantMap, gmap: GaussianMap,
                    epsilon: float) -> IsometryReport:
    """Checks (1 − ε)·D ≤ ‖Φ(z_i − z_j)‖² ≤ (1 + ε)·D for every pair.

    D is the tensor distance of the pair.
    """

    _check_fit(gmap, inv)
    if epsilon < 0.0:
        raise InvalidBudget("epsilon must be non-negative")

    vecs = [np.asarray(a, dtype=float) for a in points]
    if len(vecs) < 2:
        raise TooFewPoints(f"Isometry check needs at least two points, got {len(vecs)}")

    duplicate = _first_duplicate(vecs)
    if duplicate:
        raise DuplicatePoints(duplicate)

    embedded = gmap(invariant_matrix(inv, vecs))
    violations = []
    worst = 1.0
    pairs = 0
    for i, j in itertools.combinations(range(len(vecs)), 2):
        pairs += 1
        target = tensor_distance_sq(vecs[i], vecs[j], inv.omega)
        diff = embedded[i] - embedded[j]
        got = float(diff @ diff)
        if target == 0.0:
            ratio = 1.0 if got == 0.0 else math.inf
        else:
            ratio = got / target

        if abs(ratio - 1.0) > abs(worst - 1.0):
            worst = ratio
        if not (1.0 - epsilon) <= ratio <= (1.0 + epsilon):
            violations.append(PairViolation(i, j, ratio))

    return IsometryReport(pairs_checked=pairs, violations=violations, worst_ratio=worst)


@dataclass(frozen=True)
class WhitneyReport:
    trials: int
    injective_trials: int
    min_pair_gap: float


def check_whitney_injectivity(points: Sequence[Any], inv: InvariantMap, m: int,
                              trials: int, seed: int) -> WhitneyReport:
    """Counts sampled maps that keep the embedded points apart.

    A trial is injective when every embedded pair is farther apart than 1e-9 times the
    largest pairwise tensor distance.
    """

    if trials < 1:
        raise InvalidBudget("trials must be positive")

    vecs = [np.asarray(a, dtype=float) for a in points]
    zs = invariant_matrix(inv, vecs)
    scale = float(np.abs(zs).max()) if zs.size else 0.0
    for i, j in itertools.combinations(range(len(vecs)), 2):
        if np.max(np.abs(zs[i] - zs[j])) <= 1e-12 * scale:
            raise NotDiscriminable((i, j))

    spread = max((tensor_distance_sq(vecs[i], vecs[j], inv.omega)
                  for i, j in itertools.combinations(range(len(vecs)), 2)),
                 default=0.0)
    tol = 1e-9 * math.sqrt(spread)

    injective = 0
    min_gap = math.inf
    for t in range(trials):
        gmap = sample_map(m, inv.kappa, derive_seed(seed, t))
        gaps = pdist(gmap(zs))
        if not gaps.size:
            injective += 1
            continue

        gap = float(gaps.min())
        min_gap = min(min_gap, gap)
        if gap > tol:
            injective += 1

    return WhitneyReport(trials=trials,
                         injective_trials=injective,
                         min_pair_gap=min_gap)


def concentration_bound(m: int, epsilon: float) -> float:
    """2·exp(−(m/4)(ε² − ε³))."""

    return 2.0 * math.exp(-(m / 4.0) * (epsilon**2 - epsilon**3))


@dataclass(frozen=True)
class ConcentrationReport:
    m: int
    epsilon: float
    samples: int
    empirical_tail: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.empirical_tail <= self.bound


def concentration_selftest(m: int,
                           epsilon: float,
                           samples: int,
                           seed: int,
                           dim: int = 8,
                           batch: int = 1000) -> ConcentrationReport:
    """Monte-Carlo estimate of P(|‖Φx‖² − 1| > ε) over fresh maps and unit vectors."""

    if m < 1 or samples < 1 or dim < 1:
        raise InvalidBudget("m, samples and dim must be positive")
    if not 0.0 < epsilon < 1.0:
        raise InvalidBudget(f"epsilon must lie in (0, 1), got {epsilon}")

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    exceed = 0
    done = 0
    while done < samples:
        size = min(batch, samples - done)
        x = rng.standard_normal((size, dim))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        phi = rng.standard_normal((size, m, dim)) / math.sqrt(m)
        sq = (np.einsum("bmd,bd->bm", phi, x)**2).sum(axis=1)
        exceed += int(np.count_nonzero(np.abs(sq - 1.0) > epsilon))
        done += size

    return ConcentrationReport(
        m=m,
        epsilon=epsilon,
        samples=samples,
        empirical_tail=exceed / samples,
        bound=concentration_bound(m, epsilon),
    )
