"""Stabilizer-algebra verification of the measurement architecture.

Two independent checks back the syndrome-graph construction on small,
explicitly built instances:

* a single GHZ-state measurement: the fused-measurement outcomes together
  with the repetition stabilizers of the encoded qubits must generate every
  logical operator the measurement claims to measure;
* one bulk unit cell with its 24 resource states: the cell parity check must
  lie in both the resource-state group R and the measurement group M, and in
  the cyclic architecture each per-site product-of-ZZ check must do the same
  while staying independent of the cell check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

from .errors import ValidationError
from .gsm import Architecture
from .lattice import AXES, Point, angular_dirs, shift, unit
from .pauli import PauliOperator, StabilizerGroup, multiply


@dataclass(frozen=True)
class LogicalQubit:
    """A bare physical qubit or a pair carrying a two-qubit repetition code."""

    phys: tuple[int, ...]  # one index, or (a, b)

    @property
    def encoded(self) -> bool:
        return len(self.phys) == 2

    @property
    def a(self) -> int:
        return self.phys[0]

    @property
    def b(self) -> int:
        return self.phys[-1]


class _Registry:
    def __init__(self) -> None:
        self.n = 0

    def add(self, encoded: bool) -> LogicalQubit:
        width = 2 if encoded else 1
        qubit = LogicalQubit(tuple(range(self.n, self.n + width)))
        self.n += width
        return qubit


def _op(n: int, terms, sign: int = +1) -> PauliOperator:
    return PauliOperator.from_support(n, terms, sign)


def _logical_x(n: int, q: LogicalQubit) -> PauliOperator:
    return _op(n, [("X", p) for p in q.phys])


def _logical_z(n: int, q: LogicalQubit) -> PauliOperator:
    return _op(n, [("Z", q.a)])


def _rep_stabilizer(n: int, q: LogicalQubit) -> PauliOperator:
    return _op(n, [("Z", q.a), ("Z", q.b)])


def _bsm_outcomes(n: int, pa: int, pb: int) -> tuple[PauliOperator, PauliOperator]:
    return _op(n, [("X", pa), ("X", pb)]), _op(n, [("Z", pa), ("Z", pb)])


@dataclass
class Check:
    label: str
    passed: bool

    def to_dict(self) -> dict:
        return {"check": self.label, "passed": self.passed}


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, label: str, passed: bool) -> None:
        self.checks.append(Check(label, passed))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def missing(self) -> list[str]:
        return [c.label for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_text(self) -> str:
        lines = [f"{'PASS' if self.passed else 'FAIL'}  {self.title}"]
        for c in self.checks:
            lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.label}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Single measurement: logical-outcome reconstruction


def verify_gsm_reconstruction(architecture: Architecture, k: int) -> Report:
    """Check that one arity-k measurement reconstructs its logical outcomes.

    The X product must be generated by the X-type outcomes alone; the ZZ
    targets may additionally consume repetition stabilizers of the encoded
    qubits (they are Z-type, so that generating set is honestly commuting,
    which individual X outcomes and repetition stabilizers are not).
    """
    if k < 2:
        raise ValidationError(f"GSM arity k must be >= 2, got {k}")
    reg = _Registry()
    cyclic = architecture is Architecture.CYCLIC
    if cyclic:
        qubits = [reg.add(encoded=True) for _ in range(k)]
    else:
        qubits = [reg.add(encoded=(0 < i < k - 1)) for i in range(k)]
    n = reg.n

    xx_outcomes: list[PauliOperator] = []
    zz_outcomes: list[PauliOperator] = []
    pairs = [(i, (i + 1) % k) for i in range(k if cyclic else k - 1)]
    for i, j in pairs:
        xx, zz = _bsm_outcomes(n, qubits[i].b, qubits[j].a)
        xx_outcomes.append(xx)
        zz_outcomes.append(zz)
    rep_stabs = [_rep_stabilizer(n, q) for q in qubits if q.encoded]
    z_group = StabilizerGroup(zz_outcomes + rep_stabs)
    x_group = StabilizerGroup(xx_outcomes)

    report = Report(title=f"{architecture.value} arity-{k} measurement reconstruction")
    for i, j in [(i, i + 1) for i in range(k - 1)] + ([(k - 1, 0)] if cyclic else []):
        target = multiply(_logical_z(n, qubits[i]), _logical_z(n, qubits[j]))
        report.add(f"logical Z{i + 1}Z{(j % k) + 1}", z_group.contains(target))
    product_x = reduce(multiply, (_logical_x(n, q) for q in qubits))
    report.add("logical X product", x_group.contains(product_x))
    return report


# ---------------------------------------------------------------------------
# Unit cell


@dataclass(frozen=True)
class ResourceState:
    face_end: LogicalQubit
    edge_end: LogicalQubit


@dataclass
class UnitCell:
    architecture: Architecture
    n_qubits: int
    resource_group: StabilizerGroup
    measurement_group: StabilizerGroup
    cell_check: PauliOperator
    edge_checks: list[PauliOperator]


_CENTRE: Point = (1, 1, 1)


def _cell_faces() -> list[tuple[Point, int]]:
    return [
        (shift(_CENTRE, unit(mu, s)), mu) for mu in AXES for s in (-1, +1)
    ]


def _cell_edges() -> list[tuple[Point, int]]:
    out = []
    for nu in AXES:
        a1, a2 = [ax for ax in AXES if ax != nu]
        for s1 in (-1, +1):
            for s2 in (-1, +1):
                out.append((shift(_CENTRE, unit(a1, s1), unit(a2, s2)), nu))
    return out


def build_unit_cell(
    architecture: Architecture, corrupt_stabilizer: bool = False
) -> UnitCell:
    """Assemble one bulk cell: 6 face sites, 12 edge sites, 24 resource states.

    In the minimal architecture each resource state encodes exactly one end;
    ends are oriented so every face measurement reads (bare, encoded,
    encoded, bare) around its rotational order, matching the layout rule that
    leaves exactly two unencoded qubits per measurement.  The ``corrupt``
    switch flips the sign of one resource-state stabilizer and must make the
    membership checks fail (negative control).
    """
    cyclic = architecture is Architecture.CYCLIC
    reg = _Registry()
    faces = _cell_faces()
    edges = _cell_edges()
    edge_axis = {p: ax for p, ax in edges}

    states: dict[tuple[Point, Point], ResourceState] = {}
    face_slots: dict[Point, list[Point]] = {}
    for fpos, mu in faces:
        slots = [shift(fpos, dv) for dv in angular_dirs(mu)]
        face_slots[fpos] = slots
        for slot_index, epos in enumerate(slots):
            face_encoded = True if cyclic else slot_index in (1, 2)
            edge_encoded = True if cyclic else not face_encoded
            states[(fpos, epos)] = ResourceState(
                face_end=reg.add(face_encoded), edge_end=reg.add(edge_encoded)
            )
    n = reg.n

    resource_gens: list[PauliOperator] = []
    for (fpos, epos), rs in sorted(states.items()):
        # graph-state stabilizers of the encoded two-qubit chain
        resource_gens.append(
            multiply(_logical_x(n, rs.face_end), _logical_z(n, rs.edge_end))
        )
        resource_gens.append(
            multiply(_logical_z(n, rs.face_end), _logical_x(n, rs.edge_end))
        )
        for q in (rs.face_end, rs.edge_end):
            if q.encoded:
                resource_gens.append(_rep_stabilizer(n, q))
    if corrupt_stabilizer:
        resource_gens[0] = resource_gens[0].negate()

    measurement_gens: list[PauliOperator] = []
    face_x_outcomes: dict[Point, PauliOperator] = {}
    for fpos, mu in faces:
        qubits = [states[(fpos, e)].face_end for e in face_slots[fpos]]
        pairs = [(i, (i + 1) % 4) for i in range(4 if cyclic else 3)]
        xx_ops = []
        for i, j in pairs:
            xx, zz = _bsm_outcomes(n, qubits[i].b, qubits[j].a)
            measurement_gens.extend((xx, zz))
            xx_ops.append(xx)
        face_x_outcomes[fpos] = reduce(multiply, xx_ops)

    edge_cell_zz: dict[Point, PauliOperator] = {}
    edge_all_zz: dict[Point, list[PauliOperator]] = {}
    for epos, nu in edges:
        # the two in-cell neighbours, in rotational order around the edge
        dirs = angular_dirs(nu)
        present = [i for i, dv in enumerate(dirs) if shift(epos, dv) in face_slots]
        start = next(i for i in present if (i - 1) % 4 not in present)
        order = [start, (start + 1) % 4]
        fa, fb = (shift(epos, dirs[i]) for i in order)
        qa, qb = states[(fa, epos)].edge_end, states[(fb, epos)].edge_end
        pairs = [(qa.b, qb.a)] + ([(qb.b, qa.a)] if cyclic else [])
        zz_ops = []
        for pa, pb in pairs:
            xx, zz = _bsm_outcomes(n, pa, pb)
            measurement_gens.extend((xx, zz))
            zz_ops.append(zz)
        edge_cell_zz[epos] = zz_ops[0]
        edge_all_zz[epos] = zz_ops

    cell_check = reduce(
        multiply,
        [face_x_outcomes[f] for f, _ in faces]
        + [edge_cell_zz[e] for e, _ in edges],
    )
    edge_checks = (
        [reduce(multiply, edge_all_zz[e]) for e, _ in edges] if cyclic else []
    )

    return UnitCell(
        architecture=architecture,
        n_qubits=n,
        resource_group=StabilizerGroup(resource_gens),
        measurement_group=StabilizerGroup(measurement_gens),
        cell_check=cell_check,
        edge_checks=edge_checks,
    )


def verify_check_operator(
    architecture: Architecture, corrupt_stabilizer: bool = False
) -> Report:
    """Membership of the cell check (and cyclic per-site checks) in R and M."""
    cell = build_unit_cell(architecture, corrupt_stabilizer)
    report = Report(
        title=f"{architecture.value} unit-cell parity checks"
        + (" (corrupted control)" if corrupt_stabilizer else "")
    )
    report.add("cell check in resource group", cell.resource_group.contains(cell.cell_check))
    report.add(
        "cell check in measurement group",
        cell.measurement_group.contains(cell.cell_check),
    )
    if cell.edge_checks:
        cell_only = StabilizerGroup([cell.cell_check])
        ok_r = all(cell.resource_group.contains(pe) for pe in cell.edge_checks)
        ok_m = all(cell.measurement_group.contains(pe) for pe in cell.edge_checks)
        independent = all(
            not cell_only.membership(pe).pattern_in_group for pe in cell.edge_checks
        )
        report.add("edge checks in resource group", ok_r)
        report.add("edge checks in measurement group", ok_m)
        report.add("edge checks independent of the cell check", independent)
    return report


def run_verification(
    architectures=(Architecture.MINIMAL, Architecture.CYCLIC),
    arities=(2, 3, 4),
) -> list[Report]:
    reports = []
    for arch in architectures:
        for k in arities:
            reports.append(verify_gsm_reconstruction(arch, k))
        reports.append(verify_check_operator(arch))
    return reports
