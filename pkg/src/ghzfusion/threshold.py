"""Loss-rate sweeps across code distances and threshold estimation.

A sweep runs the erasure Monte Carlo for every (distance, loss rate) point of
a grid; the threshold is estimated as the crossing of the per-distance
logical-error-rate curves, located pairwise by linear interpolation of the
logit of the rate and averaged over distance pairs.  Uncertainty comes from a
parametric bootstrap of the binomial counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .bsm import BsmModel, Convention, Protocol
from .erasure import (
    CorrelationMode,
    ErasureModel,
    run_batch,
    substream_seed,
)
from .errors import DegenerateCrossingError, NoCrossingError, ValidationError
from .gsm import Architecture
from .lattice import build_network
from .syndrome import GraphBundle, build_syndrome_graphs

DEFAULT_DISTANCES = (9, 11, 13)
DEFAULT_SAMPLES = 10_000


def default_convention(architecture: Architecture) -> Convention:
    """Code layout that maximises the threshold of each architecture."""
    return (
        Convention.SHOR
        if architecture is Architecture.CYCLIC
        else Convention.HADAMARD
    )


def photons_per_resource_state(architecture: Architecture, n: int, m: int) -> int:
    """Dual-rail photon count of one encoded two-qubit resource state."""
    if n < 1 or m < 1:
        raise ValidationError(f"n and m must be positive, got ({n}, {m})")
    per_qubit = n * m
    return 3 * per_qubit if architecture is Architecture.MINIMAL else 4 * per_qubit


@dataclass(frozen=True)
class SweepConfig:
    architecture: Architecture
    protocol: Protocol
    n: int
    m: int
    etas: tuple[float, ...]
    j: int = 0
    convention: Convention | None = None  # None = per-architecture default
    distances: tuple[int, ...] = DEFAULT_DISTANCES
    samples: int = DEFAULT_SAMPLES
    master_seed: int = 1
    correlation: CorrelationMode = CorrelationMode.INDEPENDENT_OUTCOMES
    hub_rotation: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if len(self.distances) < 2:
            raise ValidationError("at least two distances are required")
        if len(self.etas) < 1:
            raise ValidationError("the eta grid must not be empty")
        if any(not 0.0 <= e <= 1.0 for e in self.etas):
            raise ValidationError("eta grid values must lie in [0, 1]")
        if list(self.etas) != sorted(set(self.etas)):
            raise ValidationError("the eta grid must be strictly increasing")

    def resolved_convention(self) -> Convention:
        return self.convention or default_convention(self.architecture)

    def bsm_model(self, eta: float) -> BsmModel:
        return BsmModel(
            protocol=self.protocol,
            n=self.n,
            m=self.m,
            eta=eta,
            j=self.j if self.protocol is Protocol.ACTIVE else 0,
            convention=self.resolved_convention(),
        )


@dataclass(frozen=True)
class ThresholdCurve:
    distance: int
    etas: tuple[float, ...]
    rates: tuple[float, ...]
    failures: tuple[int, ...]
    samples: int
    ci_low: tuple[float, ...]
    ci_high: tuple[float, ...]
    point_seeds: tuple[int, ...]


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    curves: tuple[ThresholdCurve, ...]


def _bundle_cache_key(config: SweepConfig, d: int):
    return (config.architecture, d, config.hub_rotation)


_BUNDLES: dict = {}


def _bundle(config: SweepConfig, d: int) -> GraphBundle:
    key = _bundle_cache_key(config, d)
    if key not in _BUNDLES:
        network = build_network(d, config.architecture)
        _BUNDLES[key] = build_syndrome_graphs(
            network, config.architecture, config.hub_rotation
        )
    return _BUNDLES[key]


def sweep(config: SweepConfig) -> SweepResult:
    """Monte-Carlo curves for every configured distance over the eta grid.

    The per-point seed is a fixed substream of the master seed indexed by the
    point's position in the (distance, eta) grid, so any subset of points can
    be reproduced in isolation.
    """
    curves = []
    for i_d, d in enumerate(config.distances):
        bundle = _bundle(config, d)
        rates, fails, lows, highs, seeds = [], [], [], [], []
        for i_e, eta in enumerate(config.etas):
            model = ErasureModel.from_bsm(
                config.architecture, config.bsm_model(eta), config.correlation
            )
            point_seed = substream_seed(
                config.master_seed, i_d * len(config.etas) + i_e
            )
            result = run_batch(
                bundle, model, config.samples, point_seed, config.workers
            )
            rates.append(result.rate)
            fails.append(result.failures)
            lows.append(result.ci_low)
            highs.append(result.ci_high)
            seeds.append(point_seed)
        curves.append(
            ThresholdCurve(
                distance=d,
                etas=config.etas,
                rates=tuple(rates),
                failures=tuple(fails),
                samples=config.samples,
                ci_low=tuple(lows),
                ci_high=tuple(highs),
                point_seeds=tuple(seeds),
            )
        )
    return SweepResult(config=config, curves=tuple(curves))


# ---------------------------------------------------------------------------
# Crossing estimation


def _logit(rate: float, samples: int) -> float:
    # clamp away from 0/1 so empty or full counts stay finite
    eps = 0.5 / samples
    r = min(max(rate, eps), 1.0 - eps)
    return math.log(r / (1.0 - r))


def _pair_crossing(
    etas: Sequence[float],
    rates_a: Sequence[float],
    rates_b: Sequence[float],
    samples: int,
) -> float | None:
    """Crossing of two curves by logit-linear interpolation.

    Only grid points where both rates sit strictly inside (0, 1) carry
    information; at saturated points (all samples failed, or none did) the
    ordering of the curves is pure noise.  Among informative intervals the
    most significant sign change (largest logit separation) wins.  Returns
    None when nothing brackets a crossing; raises when the curves coincide.
    """
    if tuple(rates_a) == tuple(rates_b):
        raise DegenerateCrossingError("curves are identical on the whole grid")
    usable = [0.0 < ra < 1.0 and 0.0 < rb < 1.0 for ra, rb in zip(rates_a, rates_b)]
    diffs = [
        _logit(ra, samples) - _logit(rb, samples)
        for ra, rb in zip(rates_a, rates_b)
    ]
    candidates: list[tuple[float, float]] = []
    for i in range(len(etas) - 1):
        if not (usable[i] and usable[i + 1]):
            continue
        d0, d1 = diffs[i], diffs[i + 1]
        if d0 == 0.0 and d1 == 0.0:
            continue
        if d0 == 0.0:
            candidates.append((abs(d1), etas[i]))
        elif d1 == 0.0:
            candidates.append((abs(d0), etas[i + 1]))
        elif (d0 > 0) != (d1 > 0):
            eta_star = etas[i] + (etas[i + 1] - etas[i]) * d0 / (d0 - d1)
            candidates.append((abs(d0 - d1), eta_star))
    if not candidates:
        return None
    return max(candidates)[1]


@dataclass(frozen=True)
class CrossingEstimate:
    eta_c: float
    sigma: float
    ci_low: float
    ci_high: float
    pair_values: tuple[float, ...]
    n_bootstrap: int


def estimate_crossing(
    result: SweepResult,
    n_bootstrap: int = 200,
    bootstrap_seed: int = 0,
) -> CrossingEstimate:
    """Mean pairwise curve crossing with a parametric bootstrap uncertainty.

    Every distance pair must bracket a crossing inside the grid, otherwise
    :class:`NoCrossingError` is raised.
    """
    curves = sorted(result.curves, key=lambda c: c.distance)
    samples = result.config.samples
    etas = curves[0].etas

    def crossing_for(rates_by_curve) -> float:
        values = []
        for i in range(len(curves)):
            for j in range(i + 1, len(curves)):
                eta_star = _pair_crossing(
                    etas, rates_by_curve[i], rates_by_curve[j], samples
                )
                if eta_star is None:
                    raise NoCrossingError(
                        f"no crossing bracketed in the grid for distances "
                        f"{curves[i].distance} and {curves[j].distance}"
                    )
                values.append(eta_star)
        return values

    pair_values = crossing_for([c.rates for c in curves])
    eta_c = float(np.mean(pair_values))

    rng = np.random.default_rng(bootstrap_seed)
    boot = []
    for _ in range(n_bootstrap):
        resampled = [
            rng.binomial(samples, np.asarray(c.rates)) / samples for c in curves
        ]
        try:
            boot.append(float(np.mean(crossing_for(resampled))))
        except (NoCrossingError, DegenerateCrossingError):
            continue
    if len(boot) < max(2, n_bootstrap // 2):
        raise NoCrossingError(
            "the crossing is too poorly bracketed for bootstrap resampling"
        )
    sigma = float(np.std(boot))
    lo, hi = np.percentile(boot, [2.5, 97.5])
    return CrossingEstimate(
        eta_c=eta_c,
        sigma=sigma,
        ci_low=float(lo),
        ci_high=float(hi),
        pair_values=tuple(pair_values),
        n_bootstrap=len(boot),
    )


def eta_grid(center: float, span_fraction: float = 0.3, points: int = 9) -> tuple[float, ...]:
    """Evenly spaced grid of ``points`` loss rates centred on ``center``."""
    if not 0.0 < center < 1.0:
        raise ValidationError(f"eta_center must lie in (0, 1), got {center}")
    if points < 2:
        raise ValidationError("the grid needs at least 2 points")
    lo = max(center * (1.0 - span_fraction), 0.0)
    hi = min(center * (1.0 + span_fraction), 1.0)
    return tuple(float(x) for x in np.linspace(lo, hi, points))


@dataclass(frozen=True)
class ThresholdResult:
    sweep: SweepResult
    crossing: CrossingEstimate
    recentered: bool


def estimate_threshold(
    config: SweepConfig,
    n_bootstrap: int = 200,
    bootstrap_seed: int = 0,
) -> ThresholdResult:
    """Sweep the configured grid and locate the crossing.

    If the grid fails to bracket the crossing, the grid is re-centred once on
    an extrapolated estimate before giving up.
    """
    result = sweep(config)
    try:
        crossing = estimate_crossing(result, n_bootstrap, bootstrap_seed)
        return ThresholdResult(result, crossing, recentered=False)
    except NoCrossingError:
        pass
    new_center = _extrapolated_center(result)
    config2 = replace(config, etas=eta_grid(new_center))
    result2 = sweep(config2)
    crossing = estimate_crossing(result2, n_bootstrap, bootstrap_seed)
    return ThresholdResult(result2, crossing, recentered=True)


def _extrapolated_center(result: SweepResult) -> float:
    """Root of the mean pairwise logit-rate difference, linearly extrapolated.

    Saturated grid points (some curve at exactly 0 or 1) carry no ordering
    information and are excluded; when fewer than two points remain, the
    overall rate level decides the direction of the shift instead.
    """
    curves = sorted(result.curves, key=lambda c: c.distance)
    samples = result.config.samples
    etas = np.asarray(curves[0].etas)
    center = float(np.mean(etas))
    rates = np.array([c.rates for c in curves])
    usable = np.all((rates > 0.0) & (rates < 1.0), axis=0)
    if usable.sum() < 2:
        return center / 2.0 if float(rates.mean()) > 0.5 else center * 2.0
    diffs = np.zeros(int(usable.sum()))
    sel = np.flatnonzero(usable)
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            diffs += [
                _logit(curves[i].rates[p], samples)
                - _logit(curves[j].rates[p], samples)
                for p in sel
            ]
    slope, intercept = np.polyfit(etas[sel], diffs, 1)
    if slope == 0.0:
        raise NoCrossingError("curves do not separate; cannot re-centre the grid")
    root = -intercept / slope
    return float(min(max(root, center / 2.0), center * 2.0))
