"""Erasure rates and efficiencies of encoded GHZ-state measurements.

A k-qubit GHZ-state measurement (GSM) is assembled from encoded Bell-state
measurements: k - 1 of them in the *minimal* flavour, k in the *cyclic* one.
The product-of-X outcome needs every constituent measurement to recover XX;
each ZZ outcome is read directly off a single constituent measurement.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

from .bsm import BsmModel, Convention, Protocol, qpc_probs
from .errors import ValidationError


class Architecture(Enum):
    MINIMAL = "minimal"
    CYCLIC = "cyclic"


class Objective(Enum):
    """What :func:`optimize_j` maximises."""

    EFFICIENCY = "efficiency"
    X_RECOVERY = "x_recovery"


@dataclass(frozen=True)
class GsmSpec:
    """One encoded GSM: the architecture, its arity k, and the shared
    Bell-measurement model of its constituents."""

    architecture: Architecture
    k: int
    bsm: BsmModel

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValidationError(f"GSM arity k must be >= 2, got {self.k}")

    @property
    def bsm_count(self) -> int:
        return self.k - 1 if self.architecture is Architecture.MINIMAL else self.k


@dataclass(frozen=True)
class GsmErasureProbs:
    """Erasure probability of the product-of-X outcome and of any single ZZ
    outcome.  The ZZ rate does not depend on the arity."""

    p_erase_x: float
    p_erase_zz: float


def gsm_erasure_probs(spec: GsmSpec) -> GsmErasureProbs:
    p = qpc_probs(spec.bsm)
    return GsmErasureProbs(
        p_erase_x=1.0 - p.p_xx ** spec.bsm_count,
        p_erase_zz=1.0 - p.p_zz,
    )


def gsm_efficiency(spec: GsmSpec) -> float:
    """Probability that every operator of the GSM basis is recovered.

    Minimal: all k-1 constituents must recover both eigenvalues.  Cyclic: all
    k constituents must recover XX, and at most one may miss ZZ (any k-1 of
    the k ZZ outcomes already fix the last one).
    """
    p = qpc_probs(spec.bsm)
    k = spec.k
    if spec.architecture is Architecture.MINIMAL:
        return p.p_joint ** (k - 1)
    xx_no_zz = p.p_xx - p.p_joint
    return p.p_joint ** k + k * p.p_joint ** (k - 1) * xx_no_zz


@dataclass(frozen=True)
class JOptimum:
    j: int
    value: float


def optimize_j(spec: GsmSpec, objective: Objective = Objective.EFFICIENCY) -> JOptimum:
    """Exhaustively scan the feed-forward depth j in {0, ..., m-1}.

    Ties break toward the smallest j (less feed-forward hardware).
    """
    if spec.bsm.protocol is not Protocol.ACTIVE:
        raise ValidationError("optimize_j requires an active-protocol model")
    best: JOptimum | None = None
    for j in range(spec.bsm.m):
        candidate = replace(spec, bsm=replace(spec.bsm, j=j))
        if objective is Objective.EFFICIENCY:
            value = gsm_efficiency(candidate)
        else:
            value = qpc_probs(candidate.bsm).p_xx
        if best is None or value > best.value:
            best = JOptimum(j=j, value=value)
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Efficiency tables


@dataclass(frozen=True)
class TableCell:
    eta: float
    value: float | None  # None when below the print floor
    j: int | None = None  # chosen feed-forward depth (active protocol only)


@dataclass(frozen=True)
class TableRow:
    n: int
    m: int
    cells: tuple[TableCell, ...]


@dataclass(frozen=True)
class EfficiencyTable:
    architecture: Architecture
    protocol: Protocol
    convention: Convention
    k: int
    etas: tuple[float, ...]
    rows: tuple[TableRow, ...]
    floor: float


def efficiency_table(
    architecture: Architecture,
    protocol: Protocol,
    pairs: Sequence[tuple[int, int]],
    etas: Sequence[float],
    *,
    k: int = 4,
    convention: Convention = Convention.SHOR,
    floor: float = 0.70,
) -> EfficiencyTable:
    """Tabulate 4-qubit GSM efficiencies over code sizes and loss rates.

    Active-protocol cells are optimised over j independently for every
    (n, m, eta) combination.  Entries below ``floor`` are omitted (None), the
    convention used when publishing such tables.
    """
    rows = []
    for n, m in pairs:
        cells = []
        for eta in etas:
            j: int | None = None
            if protocol is Protocol.ACTIVE:
                spec = GsmSpec(
                    architecture,
                    k,
                    BsmModel(protocol, n, m, eta, j=0, convention=convention),
                )
                opt = optimize_j(spec)
                value, j = opt.value, opt.j
            else:
                spec = GsmSpec(
                    architecture, k, BsmModel(protocol, n, m, eta, convention=convention)
                )
                value = gsm_efficiency(spec)
            cells.append(
                TableCell(eta=eta, value=value if value >= floor else None, j=j)
            )
        rows.append(TableRow(n=n, m=m, cells=tuple(cells)))
    return EfficiencyTable(
        architecture=architecture,
        protocol=protocol,
        convention=convention,
        k=k,
        etas=tuple(etas),
        rows=tuple(rows),
        floor=floor,
    )


@dataclass(frozen=True)
class TablePreset:
    architecture: Architecture
    protocol: Protocol
    pairs: tuple[tuple[int, int], ...]
    etas: tuple[float, ...]


_ETAS = (0.0, 0.001, 0.01, 0.02, 0.03, 0.04, 0.05, 0.08, 0.1)

_STATIC_CYCLIC_PAIRS = (
    (2, 2), (2, 3),
    (3, 1), (3, 2), (3, 3), (3, 4),
    (4, 1), (4, 2), (4, 3), (4, 4),
    (5, 1), (5, 2), (5, 3), (5, 4),
    (6, 1), (6, 2), (6, 3), (6, 4),
    (7, 1), (7, 2), (7, 3), (7, 4),
)
_STATIC_MINIMAL_PAIRS = (
    (4, 1), (4, 2), (4, 3), (4, 4),
    (5, 1), (5, 2), (5, 3), (5, 4),
    (6, 1), (6, 2), (6, 3), (6, 4),
    (7, 1), (7, 2), (7, 3), (7, 4),
)
_ACTIVE_CYCLIC_PAIRS = (
    (1, 3), (1, 4), (1, 5),
    (2, 2), (2, 3), (2, 4), (2, 5),
    (3, 1), (3, 2), (3, 3), (3, 4),
    (4, 1), (4, 2), (4, 3), (4, 4),
    (5, 1), (5, 2), (5, 3), (5, 4), (5, 5),
    (6, 1), (6, 2), (6, 3), (6, 4), (6, 5),
    (7, 1), (7, 2), (7, 3), (7, 4),
)
_ACTIVE_MINIMAL_PAIRS = (
    (1, 4),
    (2, 2), (2, 3),
    (3, 2), (3, 3), (3, 4),
    (4, 1), (4, 2), (4, 3), (4, 4),
    (5, 1), (5, 2), (5, 3), (5, 4),
    (6, 1), (6, 2), (6, 3), (6, 4),
    (7, 1), (7, 2), (7, 3), (7, 4),
)

#: The four standard 4-qubit GSM efficiency tables, keyed by roman numeral:
#: I static/cyclic, II static/minimal, III active/cyclic, IV active/minimal.
TABLE_PRESETS: dict[str, TablePreset] = {
    "I": TablePreset(Architecture.CYCLIC, Protocol.STATIC, _STATIC_CYCLIC_PAIRS, _ETAS),
    "II": TablePreset(Architecture.MINIMAL, Protocol.STATIC, _STATIC_MINIMAL_PAIRS, _ETAS),
    "III": TablePreset(Architecture.CYCLIC, Protocol.ACTIVE, _ACTIVE_CYCLIC_PAIRS, _ETAS),
    "IV": TablePreset(Architecture.MINIMAL, Protocol.ACTIVE, _ACTIVE_MINIMAL_PAIRS, _ETAS),
}


def preset_table(name: str, *, floor: float = 0.70) -> EfficiencyTable:
    try:
        preset = TABLE_PRESETS[name]
    except KeyError:
        raise ValidationError(
            f"unknown table {name!r}; choose one of {sorted(TABLE_PRESETS)}"
        ) from None
    return efficiency_table(
        preset.architecture, preset.protocol, preset.pairs, preset.etas, floor=floor
    )


def table_to_csv(table: EfficiencyTable) -> str:
    """Long-format CSV: one row per printed (n, m, eta) cell."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    active = table.protocol is Protocol.ACTIVE
    header = ["n", "m"] + (["j"] if active else []) + ["eta", "efficiency"]
    writer.writerow(header)
    for row in table.rows:
        for cell in row.cells:
            if cell.value is None:
                continue
            fields = [row.n, row.m] + ([cell.j] if active else [])
            fields += [f"{cell.eta:g}", f"{cell.value:.4f}"]
            writer.writerow(fields)
    return buf.getvalue()


def table_to_text(table: EfficiencyTable) -> str:
    """Aligned text grid, rows (n, m) by columns eta; blank cells omitted."""
    widths = [8] + [8] * len(table.etas)
    lines = []
    title = (
        f"{table.architecture.value} architecture, {table.protocol.value} protocol, "
        f"{table.convention.value} code layout, k={table.k} "
        f"(print floor {table.floor:g})"
    )
    lines.append(title)
    head = "(n,m)".ljust(widths[0]) + "".join(
        f"{eta:g}".rjust(w) for eta, w in zip(table.etas, widths[1:])
    )
    lines.append(head)
    for row in table.rows:
        cells = []
        for cell, w in zip(row.cells, widths[1:]):
            cells.append(("" if cell.value is None else f"{cell.value:.4f}").rjust(w))
        lines.append(f"({row.n},{row.m})".ljust(widths[0]) + "".join(cells))
    return "\n".join(lines) + "\n"
