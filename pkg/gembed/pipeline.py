"""Configuration resolution for the two-step embedding and the JL acceptance run."""

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Any, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .discrim import CanonicalSet, compute_delta, reduce_dataset
from .embed import (
    GaussianMap,
    JlBudget,
    derive_seed,
    invariant_matrix,
    jl_dimension,
    sample_map,
    verify_isometry,
)
from .error import ConfigError, EpsilonNotAboveDelta
from .group import FiniteGroup, GSpaceLabels, build_group
from .invariant import InvariantMap
from .util.config import Caps, Settings, canonical_json

log = logging.getLogger("gembed.pipeline")

AUTO = "auto"

Dimension = Union[int, str]


def group_hash(spec: Mapping[str, Any], omega: int) -> str:
    """Digest identifying a (group spec, ω) pair.

    Stores only compare sketches whose digests match.
    """

    payload = canonical_json({"group": dict(spec), "omega": omega})
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class PipelineConfig:
    group_spec: Mapping[str, Any]
    omega: int = 1
    m: Dimension = AUTO
    seed: int = 0
    epsilon: float = 0.5
    beta: float = 0.05
    caps: Caps = field(default_factory=Caps)

    def __post_init__(self) -> None:
        if not isinstance(self.omega, int) or self.omega < 1:
            raise ConfigError(f"omega must be a positive integer, got {self.omega!r}")
        if self.m != AUTO and (not isinstance(self.m, int) or self.m < 1):
            raise ConfigError(f"m must be a positive integer or 'auto', got {self.m!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0.0 < self.beta < 1.0:
            raise ConfigError(f"beta must lie in (0, 1), got {self.beta}")

    @classmethod
    def from_sources(cls,
                     settings: Settings,
                     file_values: Optional[Mapping[str, Any]] = None,
                     **flags: Any) -> "PipelineConfig":
        """Merges settings, then ``--config`` values, then explicit flags.

        Flags set to ``None`` are skipped.
        """

        merged = {
            "seed": settings["seed"],
            "epsilon": settings["epsilon"],
            "beta": settings["beta"],
        }
        caps = dict(group_cap=settings["group_cap"],
                    point_cap=settings["point_cap"],
                    tuple_cap=settings["tuple_cap"])
        given = {k: v for k, v in flags.items() if v is not None}
        for source in (file_values or {}, given):
            for key, value in source.items():
                if key in caps:
                    caps[key] = value
                elif key in ("group", "group_spec"):
                    merged["group_spec"] = value
                elif key in ("omega", "m", "seed", "epsilon", "beta"):
                    merged[key] = value
                else:
                    raise ConfigError(f"Unknown configuration key '{key}'")

        if "group_spec" not in merged:
            raise ConfigError(
                "A group spec is required (--group or 'group' in --config)")
        if not isinstance(merged["group_spec"], Mapping):
            raise ConfigError("The group spec must be a JSON object")
        if isinstance(merged.get("m"), str) and merged["m"] != AUTO:
            try:
                merged["m"] = int(merged["m"])
            except ValueError:
                raise ConfigError(f"m must be a positive integer or 'auto', "
                                  f"got {merged['m']!r}") from None

        try:
            return cls(caps=Caps(**caps), **merged)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    @property
    def group_hash(self) -> str:
        return group_hash(self.group_spec, self.omega)


@dataclass(frozen=True)
class Pipeline:
    config: PipelineConfig
    group: FiniteGroup
    labels: GSpaceLabels
    inv: InvariantMap
    gmap: GaussianMap
    delta: Optional[float] = None
    canon: Optional[CanonicalSet] = None


def auto_dimension(canon: CanonicalSet, inv: InvariantMap, epsilon: float,
                   beta: float) -> Tuple[int, float]:
    """m from the JL rate at the measured δ. Refuses when δ ≥ ε."""

    delta = max(compute_delta(canon, inv).delta, 0.0)
    if delta >= epsilon:
        raise EpsilonNotAboveDelta(
            f"Measured delta={delta:.6f} is not below epsilon={epsilon}")

    budget = JlBudget(k=canon.k, beta=beta, epsilon=epsilon, delta=delta)
    return jl_dimension(budget), delta


def resolve(config: PipelineConfig,
            points: Optional[Sequence[Any]] = None,
            built: Optional[Tuple[FiniteGroup, GSpaceLabels]] = None) -> Pipeline:
    """Builds the group, the invariant and the Gaussian map for ``config``.

    ``m="auto"`` needs ``points`` to measure δ on their canonical representatives.
    ``built`` reuses a group already built from ``config.group_spec``.
    """

    group, labels = built or build_group(config.group_spec, config.caps)
    inv = InvariantMap.from_group(group, config.omega, config.caps.tuple_cap)

    delta = None
    canon = None
    if config.m == AUTO:
        if points is None:
            raise ConfigError("m='auto' needs data points to measure delta")
        canon = reduce_dataset(points, group)
        m, delta = auto_dimension(canon, inv, config.epsilon, config.beta)
        log.info("Auto dimension m=%d from k=%d, delta=%.6f", m, canon.k, delta)
    else:
        m = int(config.m)

    return Pipeline(
        config=config,
        group=group,
        labels=labels,
        inv=inv,
        gmap=sample_map(m, inv.kappa, config.seed),
        delta=delta,
        canon=canon,
    )


@dataclass(frozen=True)
class JlExperiment:
    k: int
    delta: float
    m: int
    seeds: int
    failing_seeds: List[int]

    @property
    def failure_fraction(self) -> float:
        return len(self.failing_seeds) / self.seeds


def jl_experiment(points: Sequence[Any],
                  group: FiniteGroup,
                  omega: int,
                  epsilon: float,
                  beta: float,
                  seeds: int,
                  caps: Caps = Caps(),
                  seed: int = 0) -> JlExperiment:
    """Reduces ``points``, sizes m at the measured δ, then checks ``seeds`` maps.

    A seed fails when any canonical pair leaves the (1 ± ε) band.
    """

    if seeds < 1:
        raise ConfigError("seeds must be positive")

    inv = InvariantMap.from_group(group, omega, caps.tuple_cap)
    canon = reduce_dataset(points, group)
    m, delta = auto_dimension(canon, inv, epsilon, beta)

    failing = []
    for trial in range(seeds):
        trial_seed = derive_seed(seed, trial)
        gmap = sample_map(m, inv.kappa, trial_seed)
        report = verify_isometry(canon.reps, inv, gmap, epsilon)
        if report.violations:
            failing.append(trial)

    log.info("JL run: k=%d, delta=%.6f, m=%d, %d/%d seeds failed", canon.k, delta, m,
             len(failing), seeds)
    return JlExperiment(k=canon.k, delta=delta, m=m, seeds=seeds, failing_seeds=failing)


def sketch_rows(pipeline: Pipeline, points: Sequence[Any]) -> np.ndarray:
    return pipeline.gmap(invariant_matrix(pipeline.inv, points))
