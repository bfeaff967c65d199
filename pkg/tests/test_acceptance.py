"""Acceptance suite: one test per acceptance criterion, at full scale.

Each criterion prints a single ``criterion N: PASS/FAIL`` line.  The
threshold criteria run the Monte Carlo at the reference scale
(d in {9, 11, 13}, 10^4 samples per point) and take several minutes each on
one core.
"""

import functools
import itertools
import math

import numpy as np
import pytest

from ghzfusion import (
    Architecture,
    BsmModel,
    Convention,
    CorrelationMode,
    ErasureModel,
    PauliOperator,
    Protocol,
    StabilizerGroup,
    SweepConfig,
    estimate_threshold,
    eta_grid,
    percolates,
    qpc_probs,
    run_batch,
)
from ghzfusion.erasure import edge_erasure_frequencies
from ghzfusion.gsm import preset_table
from ghzfusion.report import curves_csv_lines
from ghzfusion.threshold import sweep
from ghzfusion.verify import run_verification

from conftest import bundle_for
from reference_tables import DISCREPANT_CELLS, REFERENCE_ETAS, REFERENCE_TABLES
from test_erasure import _bfs_connected, _degenerate_model, _tiny_graph
from test_pauli import _random_commuting_set, enumerate_elements


def _report(num: int, description: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"criterion {num}: {status} - {description}{detail}")
    assert ok, f"criterion {num} failed: {description}{detail}"


# ---------------------------------------------------------------------------
# criterion 1: efficiency tables


def test_criterion_1_efficiency_tables():
    """Every printed table entry reproduced to +-5e-5 before rounding.

    Eleven reference entries are internally inconsistent with the closed-form
    model the tables are computed from (see reference_tables.DISCREPANT_CELLS
    for the exact recomputations); they make this criterion fail as stated.
    """
    anchors = [
        ("I", 3, 1, 0.0, 0.9211),
        ("I", 3, 2, 0.05, 0.7247),
        ("II", 4, 1, 0.0, 0.8240),
        ("III", 2, 2, 0.0, 0.9785),
    ]
    tables = {name: preset_table(name, floor=0.0) for name in REFERENCE_TABLES}
    values = {
        name: {(row.n, row.m): row.cells for row in table.rows}
        for name, table in tables.items()
    }
    for name, n, m, eta, expected in anchors:
        cell = values[name][(n, m)][REFERENCE_ETAS.index(eta)]
        assert cell.value == pytest.approx(expected, abs=5e-5), f"anchor {name} ({n},{m})"

    mismatches = []
    for name, reference in REFERENCE_TABLES.items():
        for (n, m), row in reference.items():
            for eta, printed in zip(REFERENCE_ETAS, row):
                if printed is None:
                    continue
                got = values[name][(n, m)][REFERENCE_ETAS.index(eta)].value
                if abs(got - printed) > 5e-5:
                    mismatches.append(
                        f"table {name} ({n},{m}) eta={eta}: "
                        f"printed {printed}, computed {got:.7f}"
                    )
    known = {f"table {k[0]} ({k[1]},{k[2]}) eta={k[3]}" for k in DISCREPANT_CELLS}
    unexpected = [m for m in mismatches if m.split(":")[0] not in known]
    assert not unexpected, f"mismatches beyond the documented set: {unexpected}"
    _report(
        1,
        "all printed table entries within 5e-5",
        not mismatches,
        detail=f" ({len(mismatches)} reference entries outside the gate: "
        + "; ".join(mismatches) + ")" if mismatches else "",
    )


# ---------------------------------------------------------------------------
# criteria 2 and 3: analytic identities


def test_criterion_2_reduction_identity():
    worst = 0.0
    for n in range(1, 9):
        for m in range(1, 6):
            for i in range(0, 51):
                gamma = i / 100.0
                eta = 1.0 - math.sqrt(1.0 - gamma)
                ps = qpc_probs(BsmModel(Protocol.STATIC, n, m, eta=eta))
                pa = qpc_probs(BsmModel(Protocol.ACTIVE, n, m, eta=eta, j=0))
                worst = max(
                    worst,
                    abs(ps.p_xx - pa.p_xx),
                    abs(ps.p_zz - pa.p_zz),
                    abs(ps.p_joint - pa.p_joint),
                )
    _report(2, f"active j=0 equals static (max dev {worst:.2e})", worst <= 1e-12)


def test_criterion_3_lossless_dual_rail():
    p = qpc_probs(BsmModel(Protocol.STATIC, 1, 1, eta=0.0))
    _report(3, "lossless dual-rail joint success is exactly 1/2", p.p_joint == 0.5)


# ---------------------------------------------------------------------------
# criteria 4 and 5: thresholds at the reference scale


THRESHOLD_TARGETS = {
    ("cyclic", "static", 3, 2, 0): 0.0381,
    ("minimal", "static", 5, 2, 0): 0.038,
    ("cyclic", "active", 2, 2, 1): 0.0261,
    ("cyclic", "static", 4, 3, 0): 0.0675,
    ("cyclic", "static", 6, 3, 0): 0.0962,
}

TOLERANCE = 0.004


@functools.lru_cache(maxsize=None)
def _threshold_for(arch_name: str, protocol_name: str, n: int, m: int, j: int):
    target = THRESHOLD_TARGETS[(arch_name, protocol_name, n, m, j)]
    config = SweepConfig(
        architecture=Architecture(arch_name),
        protocol=Protocol(protocol_name),
        n=n,
        m=m,
        j=j,
        etas=eta_grid(target),
        distances=(9, 11, 13),
        samples=10_000,
        master_seed=20240 + n * 10 + m,
    )
    return estimate_threshold(config, n_bootstrap=200, bootstrap_seed=7)


@pytest.mark.parametrize(
    "key",
    [
        ("cyclic", "static", 3, 2, 0),
        ("minimal", "static", 5, 2, 0),
        ("cyclic", "active", 2, 2, 1),
    ],
    ids=lambda k: f"{k[0]}-{k[1]}-{k[2]}{k[3]}" + (f"j{k[4]}" if k[4] else ""),
)
def test_criterion_4_threshold_reproduction(key):
    target = THRESHOLD_TARGETS[key]
    result = _threshold_for(*key)
    crossing = result.crossing
    within = abs(crossing.eta_c - target) <= TOLERANCE
    band_lo, band_hi = target - TOLERANCE, target + TOLERANCE
    interval_lo = crossing.eta_c - 1.96 * crossing.sigma
    interval_hi = crossing.eta_c + 1.96 * crossing.sigma
    overlaps = interval_hi >= band_lo and interval_lo <= band_hi
    _report(
        4,
        f"threshold {key}: eta_c={crossing.eta_c:.4f}+-{crossing.sigma:.4f} "
        f"(target {target})",
        within and overlaps,
    )


def test_criterion_5_threshold_trend():
    family = [
        ("cyclic", "static", 3, 2, 0),
        ("cyclic", "static", 4, 3, 0),
        ("cyclic", "static", 6, 3, 0),
    ]
    results = [_threshold_for(*key).crossing for key in family]
    ok = True
    details = []
    for a, b in itertools.pairwise(results):
        gap = b.eta_c - a.eta_c
        separation = 2.0 * math.hypot(a.sigma, b.sigma)
        details.append(f"{a.eta_c:.4f} -> {b.eta_c:.4f} (gap {gap:.4f} > {separation:.4f})")
        ok = ok and gap > separation
    _report(5, "thresholds increase with code size: " + "; ".join(details), ok)


# ---------------------------------------------------------------------------
# criterion 6: stabilizer oracle


def test_criterion_6_stabilizer_oracle():
    reports = run_verification(
        architectures=(Architecture.MINIMAL, Architecture.CYCLIC), arities=(2, 3, 4)
    )
    all_pass = all(r.passed for r in reports)

    rng = np.random.default_rng(17)
    agreement = True
    for _ in range(6):
        n_qubits = int(rng.integers(3, 7))
        n_gens = int(rng.integers(8, 13))
        gens = _random_commuting_set(rng, n_qubits, n_gens)
        group = StabilizerGroup(gens)
        elements = enumerate_elements(gens)
        for key, sign in elements.items():
            x = np.unpackbits(np.frombuffer(key[0], dtype=np.uint8))[:n_qubits]
            z = np.unpackbits(np.frombuffer(key[1], dtype=np.uint8))[:n_qubits]
            op = PauliOperator(x.astype(bool), z.astype(bool), sign)
            agreement &= group.contains(op) and not group.contains(op.negate())
        for _ in range(200):
            probe = PauliOperator(
                rng.integers(0, 2, n_qubits).astype(bool),
                rng.integers(0, 2, n_qubits).astype(bool),
                int(rng.choice([-1, 1])),
            )
            agreement &= group.contains(probe) == (elements.get(probe.key()) == probe.sign)
    _report(
        6,
        "verification algebra passes and membership matches enumeration",
        all_pass and agreement,
    )


# ---------------------------------------------------------------------------
# criterion 7: decoder properties


def test_criterion_7_decoder_properties():
    rng = np.random.default_rng(23)
    bundle = bundle_for(Architecture.CYCLIC, 3)
    graph = bundle.primal

    monotone = True
    for _ in range(1000):
        density = rng.uniform(0.05, 0.4)
        small = rng.random(graph.n_edges) < density
        large = small | (rng.random(graph.n_edges) < 0.1)
        if percolates(graph, small):
            monotone &= percolates(graph, large)

    bfs_agreement = True
    for _ in range(100):
        n_nodes = int(rng.integers(4, 120))
        n_edges = int(rng.integers(1, 10_000))
        edges = [
            (int(rng.integers(0, n_nodes)), int(rng.integers(0, n_nodes)))
            for _ in range(n_edges)
        ]
        g = _tiny_graph(edges, n_nodes)
        erased = np.flatnonzero(rng.random(n_edges) < rng.uniform(0.05, 0.6))
        bfs_agreement &= percolates(g, erased) == _bfs_connected(g, erased, 0, 1)

    exact = True
    for mode in CorrelationMode:
        zero = run_batch(bundle, _degenerate_model(False, mode), 2000, 31)
        one = run_batch(bundle, _degenerate_model(True, mode), 2000, 31)
        exact &= zero.rate == 0.0 and one.rate == 1.0

    _report(
        7,
        "percolation monotone, union-find == BFS, degenerate rates exact",
        monotone and bfs_agreement and exact,
    )


# ---------------------------------------------------------------------------
# criterion 8: determinism across worker counts


def test_criterion_8_worker_determinism():
    config = dict(
        architecture=Architecture.CYCLIC,
        protocol=Protocol.STATIC,
        n=3,
        m=2,
        etas=(0.03, 0.045),
        distances=(3, 5),
        samples=6000,
        master_seed=808,
    )
    lines_by_workers = {}
    for workers in (1, 8):
        result = sweep(SweepConfig(workers=workers, **config))
        lines_by_workers[workers] = "\n".join(curves_csv_lines([result]))
    identical = lines_by_workers[1] == lines_by_workers[8]
    _report(8, "CSV bodies byte-identical for worker counts 1 and 8", identical)


# ---------------------------------------------------------------------------
# criterion 9: correlated-mode marginals


def test_criterion_9_per_bsm_marginals():
    samples = 100_000
    checked = 0
    ok = True
    details = []
    for (n, m), eta in itertools.product(((1, 1), (3, 2)), (0.02, 0.05)):
        bundle = bundle_for(Architecture.CYCLIC, 3)
        bsm = BsmModel(Protocol.STATIC, n, m, eta=eta, convention=Convention.SHOR)
        model = ErasureModel.from_bsm(bundle.architecture, bsm, CorrelationMode.PER_BSM)
        counts_p, counts_d, _ = edge_erasure_frequencies(bundle, model, samples, 2718)
        for graph, counts in ((bundle.primal, counts_p), (bundle.dual, counts_d)):
            probs = model.edge_probs(graph)
            for otype in np.unique(graph.edge_type):
                sel = np.flatnonzero((graph.edge_type == otype) & graph.edge_erasable)
                if sel.size == 0:
                    continue
                e = int(sel[sel.size // 2])  # a bulk representative
                p = probs[e]
                freq = counts[e] / samples
                sigma = max(math.sqrt(p * (1.0 - p) / samples), 1e-12)
                ok &= abs(freq - p) <= 3.0 * sigma
                checked += 1
                if abs(freq - p) > 3.0 * sigma:
                    details.append(f"(n={n},m={m},eta={eta}) type {otype}: {freq} vs {p}")
    _report(
        9,
        f"correlated-mode single-outcome marginals match analytic rates "
        f"({checked} outcomes at 3 sigma)",
        ok,
        detail="; ".join(details),
    )
