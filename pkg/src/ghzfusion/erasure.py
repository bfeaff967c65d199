"""Erasure sampling and union-find percolation decoding on syndrome graphs.

Decoding is pure connectivity: a trial fails when the erased edges of either
graph connect its two boundary supernodes.  Randomness is drawn from
counter-based splitmix64 streams so that results are bit-identical for a
fixed ``(configuration, master_seed)`` regardless of how trials are chunked
across workers.

Stream contract (implemented twice, by the compiled kernel and by the
vectorised sampler, which the tests compare bit for bit):

* the per-trial seed is ``mix64(master_seed + GOLDEN * (trial_index + 1))``,
  i.e. output number ``trial_index + 1`` of a splitmix64 generator seeded
  with the master seed;
* within a trial, uniforms come from a splitmix64 stream started at that
  seed, mapped to [0, 1) via the top 53 bits;
* ``INDEPENDENT_OUTCOMES`` mode consumes one uniform per *erasable* edge, all
  primal edges in edge order first, then all dual edges;
* ``PER_BSM`` mode consumes one uniform per constituent Bell measurement in
  global measurement order (erasability is applied afterwards and draws
  nothing).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit

from .bsm import BsmModel, joint_distribution, qpc_probs
from .errors import ValidationError
from .gsm import Architecture, GsmSpec, gsm_erasure_probs
from .syndrome import GraphBundle, OutcomeType, SyndromeGraph

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 finaliser (reference implementation, Python integers)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def substream_seed(master_seed: int, index: int) -> int:
    return mix64((master_seed + _GOLDEN * (index + 1)) & _MASK)


class Stream:
    """Pure-Python splitmix64 stream; the kernel reproduces it bit for bit."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return mix64(self.state)

    def next_unit(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53


class CorrelationMode(Enum):
    INDEPENDENT_OUTCOMES = "independent"
    PER_BSM = "per-bsm"


@dataclass(frozen=True)
class ErasureModel:
    """Per-outcome-type erasure probabilities plus the shared per-measurement
    four-way outcome distribution used by the correlated mode."""

    mode: CorrelationMode
    p_erase_x_by_arity: dict[int, float]  # arity 2, 3, 4 product-of-X outcomes
    p_erase_zz: float
    fourway: tuple[float, float, float, float]  # (both, zz only, xx only, none)

    @classmethod
    def from_bsm(
        cls,
        architecture: Architecture,
        bsm: BsmModel,
        mode: CorrelationMode = CorrelationMode.INDEPENDENT_OUTCOMES,
    ) -> "ErasureModel":
        by_arity = {}
        for k in (2, 3, 4):
            probs = gsm_erasure_probs(GsmSpec(architecture, k, bsm))
            by_arity[k] = probs.p_erase_x
        p_zz = gsm_erasure_probs(GsmSpec(architecture, 2, bsm)).p_erase_zz
        return cls(
            mode=mode,
            p_erase_x_by_arity=by_arity,
            p_erase_zz=p_zz,
            fourway=joint_distribution(qpc_probs(bsm)),
        )

    def edge_probs(self, graph: SyndromeGraph) -> np.ndarray:
        """Erasure probability per edge (erasability handled by the caller)."""
        probs = np.empty(graph.n_edges, dtype=np.float64)
        types = graph.edge_type
        probs[types == OutcomeType.ZZ] = self.p_erase_zz
        for arity, otype in ((2, OutcomeType.XX), (3, OutcomeType.XXX), (4, OutcomeType.XXXX)):
            probs[types == otype] = self.p_erase_x_by_arity[arity]
        return probs


# ---------------------------------------------------------------------------
# Union-find (reference implementation; the kernel inlines the same logic)


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


def percolates(graph: SyndromeGraph, erased_edges) -> bool:
    """True iff the erased edge set joins the two boundary supernodes.

    ``erased_edges`` is an iterable of edge indices or a boolean mask.
    """
    erased = np.asarray(erased_edges)
    if erased.dtype == bool:
        erased = np.flatnonzero(erased)
    uf = UnionFind(graph.n_nodes)
    for e in erased:
        uf.union(int(graph.edge_u[e]), int(graph.edge_v[e]))
    return uf.connected(graph.boundary_low, graph.boundary_high)


# ---------------------------------------------------------------------------
# Trial sampling (pure-Python mirror of the kernel)


def _stream_uniforms(seed: int, count: int) -> np.ndarray:
    """Uniforms ``1..count`` of the splitmix64 stream, vectorised."""
    golden = np.uint64(_GOLDEN)
    states = np.uint64(seed) + golden * np.arange(1, count + 1, dtype=np.uint64)
    z = states
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)) * 2.0 ** -53


def sample_erasures(
    bundle: GraphBundle,
    model: ErasureModel,
    master_seed: int,
    trial_index: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Erasure masks (primal, dual) of one trial; bit-identical to the kernel.

    Implemented over the vectorised stream (an independent evaluation path
    from the compiled kernel, which steps the identical stream scalar-wise).
    """
    seed = substream_seed(master_seed, trial_index)
    masks = []
    if model.mode is CorrelationMode.INDEPENDENT_OUTCOMES:
        counts = [int(g.edge_erasable.sum()) for g in bundle.graphs()]
        uniforms = _stream_uniforms(seed, sum(counts))
        offset = 0
        for graph, count in zip(bundle.graphs(), counts):
            probs = model.edge_probs(graph)
            mask = np.zeros(graph.n_edges, dtype=bool)
            erasable = np.flatnonzero(graph.edge_erasable)
            mask[erasable] = uniforms[offset : offset + count] < probs[erasable]
            offset += count
            masks.append(mask)
    else:
        c_both, c_zz, c_xx, _ = model.fourway
        c1, c2, c3 = c_both, c_both + c_zz, c_both + c_zz + c_xx
        u = _stream_uniforms(seed, bundle.n_bsm)
        xx_ok = (u < c1) | ((u >= c2) & (u < c3))
        zz_ok = u < c2
        fail_prefix = np.concatenate([[0], np.cumsum(~xx_ok)])
        for graph in bundle.graphs():
            is_zz = graph.edge_type == np.int8(OutcomeType.ZZ)
            any_xx_fail = (
                fail_prefix[graph.edge_bsm_hi] - fail_prefix[graph.edge_bsm_lo]
            ) > 0
            mask = np.where(is_zz, ~zz_ok[graph.edge_bsm_lo], any_xx_fail)
            mask &= graph.edge_erasable
            masks.append(mask)
    return masks[0], masks[1]


def erased_outcome_ids(
    bundle: GraphBundle, model: ErasureModel, master_seed: int, trial_index: int
) -> set[int]:
    mask_p, mask_d = sample_erasures(bundle, model, master_seed, trial_index)
    ids = set(bundle.primal.edge_outcome[mask_p].tolist())
    ids |= set(bundle.dual.edge_outcome[mask_d].tolist())
    return ids


@dataclass(frozen=True)
class TrialResult:
    primal_percolated: bool
    dual_percolated: bool

    @property
    def logical_error(self) -> bool:
        return self.primal_percolated or self.dual_percolated


def run_trial(
    bundle: GraphBundle, model: ErasureModel, master_seed: int, trial_index: int
) -> TrialResult:
    """Decode a single trial on the reference (non-compiled) path."""
    mask_p, mask_d = sample_erasures(bundle, model, master_seed, trial_index)
    return TrialResult(
        primal_percolated=percolates(bundle.primal, mask_p),
        dual_percolated=percolates(bundle.dual, mask_d),
    )


def write_erasure_dump(
    bundle: GraphBundle,
    model: ErasureModel,
    master_seed: int,
    trials: int,
    stream,
) -> None:
    """Debug dump: one line per trial with the erased outcome ids."""
    stream.write(f"# erasure dump seed={master_seed} trials={trials}\n")
    for t in range(trials):
        ids = sorted(erased_outcome_ids(bundle, model, master_seed, t))
        stream.write(f"trial {t}: {' '.join(map(str, ids))}\n")


# ---------------------------------------------------------------------------
# Compiled kernel

_U64 = np.uint64
_G64 = _U64(_GOLDEN)
_INV53 = 2.0 ** -53


@njit(cache=True, inline="always")
def _mix64_nb(z):
    z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
    return z ^ (z >> _U64(31))


@njit(cache=True, inline="always")
def _find(parent, a):
    root = a
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


@njit(cache=True, inline="always")
def _union(parent, size, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra == rb:
        return
    if size[ra] < size[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    size[ra] += size[rb]


@njit(cache=True)
def _run_trials(
    mode,
    trial_lo,
    trial_hi,
    master_seed,
    c1,
    c2,
    c3,
    n_bsm,
    pn, pu, pv, pera, pprob, pzz, pblo, pbhi,
    dn, du, dv, dera, dprob, dzz, dblo, dbhi,
    record,
    counts_p,
    counts_d,
):
    """Run trials [trial_lo, trial_hi); returns the number of logical errors.

    ``mode`` 0 = independent outcomes, 1 = correlated per measurement.  When
    ``record`` is true the per-edge erasure counters are accumulated too.
    """
    n_max = max(pn, dn)
    parent = np.empty(n_max, dtype=np.int32)
    size = np.empty(n_max, dtype=np.int32)
    xx_ok = np.empty(n_bsm, dtype=np.bool_)
    zz_ok = np.empty(n_bsm, dtype=np.bool_)
    failures = 0
    for trial in range(trial_lo, trial_hi):
        state = _mix64_nb(master_seed + _G64 * (_U64(trial) + _U64(1)))
        if mode == 1:
            for b in range(n_bsm):
                state += _G64
                u = (_mix64_nb(state) >> _U64(11)) * _INV53
                xx_ok[b] = u < c1 or (u >= c2 and u < c3)
                zz_ok[b] = u < c2
        failed = False
        for g in range(2):
            if g == 1 and failed and not record:
                break  # the trial already failed; dual draws are private
            if g == 0:
                n, eu, ev, era, prob, izz, blo, bhi = (
                    pn, pu, pv, pera, pprob, pzz, pblo, pbhi)
                counts = counts_p
            else:
                n, eu, ev, era, prob, izz, blo, bhi = (
                    dn, du, dv, dera, dprob, dzz, dblo, dbhi)
                counts = counts_d
            for i in range(n):
                parent[i] = i
                size[i] = 1
            for e in range(eu.shape[0]):
                if not era[e]:
                    continue
                if mode == 0:
                    state += _G64
                    u = (_mix64_nb(state) >> _U64(11)) * _INV53
                    erased = u < prob[e]
                else:
                    if izz[e]:
                        erased = not zz_ok[blo[e]]
                    else:
                        erased = False
                        for b in range(blo[e], bhi[e]):
                            if not xx_ok[b]:
                                erased = True
                                break
                if erased:
                    if record:
                        counts[e] += 1
                    _union(parent, size, eu[e], ev[e])
            if _find(parent, 0) == _find(parent, 1):
                failed = True
        if failed:
            failures += 1
    return failures


def _graph_arrays(graph: SyndromeGraph, model: ErasureModel):
    return (
        graph.n_nodes,
        graph.edge_u,
        graph.edge_v,
        graph.edge_erasable,
        model.edge_probs(graph),
        graph.edge_type == np.int8(OutcomeType.ZZ),
        graph.edge_bsm_lo,
        graph.edge_bsm_hi,
    )


def _kernel_args(bundle: GraphBundle, model: ErasureModel):
    c_both, c_zz, c_xx, _ = model.fourway
    mode = 0 if model.mode is CorrelationMode.INDEPENDENT_OUTCOMES else 1
    return (
        mode,
        c_both,
        c_both + c_zz,
        c_both + c_zz + c_xx,
        bundle.n_bsm,
        *_graph_arrays(bundle.primal, model),
        *_graph_arrays(bundle.dual, model),
    )


def _run_chunk(bundle, model, master_seed, lo, hi) -> int:
    mode, c1, c2, c3, n_bsm, *arrays = _kernel_args(bundle, model)
    empty = np.zeros(0, dtype=np.int64)
    return int(
        _run_trials(
            mode, lo, hi, _U64(master_seed), c1, c2, c3, n_bsm,
            *arrays, False, empty, empty,
        )
    )


# worker-side state for process pools
_POOL_PAYLOAD: dict = {}


def _pool_init(bundle, model, master_seed):
    _POOL_PAYLOAD["args"] = (bundle, model, master_seed)


def _pool_task(span):
    bundle, model, master_seed = _POOL_PAYLOAD["args"]
    return _run_chunk(bundle, model, master_seed, span[0], span[1])


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for a binomial rate."""
    if n <= 0:
        return (0.0, 1.0)
    phat = k / n
    z2 = z * z
    denom = 1.0 + z2 / n
    centre = phat + z2 / (2.0 * n)
    radius = z * math.sqrt(max(0.0, phat * (1.0 - phat) / n + z2 / (4.0 * n * n)))
    low = 0.0 if k == 0 else max(0.0, (centre - radius) / denom)
    high = 1.0 if k == n else min(1.0, (centre + radius) / denom)
    return (low, high)


@dataclass(frozen=True)
class BatchResult:
    samples: int
    failures: int
    rate: float
    ci_low: float
    ci_high: float


_CHUNK = 2500  # trials per task; results do not depend on this


def run_batch(
    bundle: GraphBundle,
    model: ErasureModel,
    samples: int,
    master_seed: int,
    workers: int = 1,
) -> BatchResult:
    """Logical error rate over ``samples`` trials with a Wilson 95% interval.

    Each trial is seeded from ``(master_seed, trial_index)`` only, so the
    result is identical for every worker count and chunking.
    """
    if samples < 1:
        raise ValidationError(f"samples must be >= 1, got {samples}")
    if workers in (None, 0):
        workers = os.cpu_count() or 1
    spans = [(lo, min(lo + _CHUNK, samples)) for lo in range(0, samples, _CHUNK)]
    if workers == 1 or len(spans) == 1:
        failures = sum(_run_chunk(bundle, model, master_seed, *s) for s in spans)
    else:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_pool_init,
            initargs=(bundle, model, master_seed),
        ) as pool:
            failures = sum(pool.map(_pool_task, spans))
    ci_low, ci_high = wilson_interval(failures, samples)
    return BatchResult(
        samples=samples,
        failures=failures,
        rate=failures / samples,
        ci_low=ci_low,
        ci_high=ci_high,
    )


def edge_erasure_frequencies(
    bundle: GraphBundle,
    model: ErasureModel,
    samples: int,
    master_seed: int,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Per-edge erasure counts over a batch (single process).

    Returns (primal counts, dual counts, failures); used to compare sampled
    marginals against the analytic rates.
    """
    mode, c1, c2, c3, n_bsm, *arrays = _kernel_args(bundle, model)
    counts_p = np.zeros(bundle.primal.n_edges, dtype=np.int64)
    counts_d = np.zeros(bundle.dual.n_edges, dtype=np.int64)
    failures = int(
        _run_trials(
            mode, 0, samples, _U64(master_seed), c1, c2, c3, n_bsm,
            *arrays, True, counts_p, counts_d,
        )
    )
    return counts_p, counts_d, failures
