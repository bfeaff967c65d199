"""Primal and dual syndrome graphs of a fusion network.

Checks are graph nodes, measurement outcomes are graph edges, and erasing an
outcome contracts its edge.  Each measurement site contributes its
product-of-X outcome to one graph and its ZZ outcomes to the other:

* face sites: one X-type bond between the two cells sharing the face goes to
  the *primal* graph; the ZZ outcomes star the four dual cells at the face's
  corners in the *dual* graph.
* edge sites: one X-type bond between the two dual cells at the edge's ends
  goes to the *dual* graph; the ZZ outcomes star the cells around the edge in
  the *primal* graph.

Stars differ per architecture.  Minimal: the k-1 ZZ outcomes of an arity-k
site form a star whose hub is the one surrounding cell whose pair outcome is
only available as the product of the others (a flipped outcome flips its own
cell and the hub).  Cyclic: every surrounding cell gets its own outcome and a
dedicated check node (the product of all ZZ outcomes of the site) becomes the
hub.

Percolation runs along x in the primal graph and along y in the dual graph;
the region beyond either percolation wall acts as a single boundary
supernode.  Outcomes that support only one check (they sit on a
non-percolation wall) keep that check connected to a private non-conducting
``open`` node so that every outcome appears on exactly one edge of exactly
one graph.  Outcomes of sites lying in the first or last time slice are
flagged non-erasable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import IntEnum
from typing import IO, Iterable

import numpy as np

from .errors import ValidationError
from .gsm import Architecture
from .lattice import (
    AXES,
    FusionNetwork,
    Point,
    SiteKind,
    angular_dirs,
    face_is_valid,
    shift,
    unit,
)


class NodeKind(IntEnum):
    BOUNDARY_LOW = 0
    BOUNDARY_HIGH = 1
    CELL = 2
    EDGE_CHECK = 3  # cyclic-only product-of-ZZ check
    OPEN = 4  # private dead end of a one-check outcome


class OutcomeType(IntEnum):
    XX = 0
    XXX = 1
    XXXX = 2
    ZZ = 3

    @classmethod
    def for_arity(cls, arity: int) -> "OutcomeType":
        return {2: cls.XX, 3: cls.XXX, 4: cls.XXXX}[arity]


_SUPER = (NodeKind.BOUNDARY_LOW, NodeKind.BOUNDARY_HIGH)


class _GraphBuilder:
    def __init__(self, name: str, percolation_axis: int, bounds: Point, parity: int):
        self.name = name
        self.percolation_axis = percolation_axis
        self.bounds = bounds
        self.parity = parity  # coordinate parity of the cell points (1 odd, 0 even)
        self.node_kind: list[NodeKind] = [NodeKind.BOUNDARY_LOW, NodeKind.BOUNDARY_HIGH]
        self.node_pos: list[Point | None] = [None, None]
        self._cells: dict[Point, int] = {}
        self.edges_u: list[int] = []
        self.edges_v: list[int] = []
        self.edge_outcome: list[int] = []
        self.edge_type: list[int] = []
        self.edge_erasable: list[bool] = []
        self.edge_site: list[int] = []
        self.edge_bsm_lo: list[int] = []
        self.edge_bsm_hi: list[int] = []

    def _new_node(self, kind: NodeKind, pos: Point | None = None) -> int:
        self.node_kind.append(kind)
        self.node_pos.append(pos)
        return len(self.node_kind) - 1

    def register_cells(self, points: Iterable[Point]) -> None:
        for p in points:
            self._cells[p] = self._new_node(NodeKind.CELL, p)

    def resolve(self, p: Point) -> tuple[str, int]:
        """Map a candidate cell point to ('node', id) or ('open', -1)."""
        pa = self.percolation_axis
        if self.parity == 1:
            # odd cells live strictly inside; lateral overflow is open space
            for ax in AXES:
                if ax != pa and not 0 < p[ax] < self.bounds[ax]:
                    return ("open", -1)
            if p[pa] < 0:
                return ("node", 0)
            if p[pa] > self.bounds[pa]:
                return ("node", 1)
        else:
            # even cells include the walls; the two percolation-wall layers
            # are glued into the boundary supernodes
            for ax in AXES:
                if ax != pa and not 0 <= p[ax] <= self.bounds[ax]:
                    return ("open", -1)
            if p[pa] <= 0:
                return ("node", 0)
            if p[pa] >= self.bounds[pa]:
                return ("node", 1)
        return ("node", self._cells[p])

    def add_outcome(
        self,
        a: tuple[str, int],
        b: tuple[str, int],
        outcome_id: int,
        otype: OutcomeType,
        erasable: bool,
        site: int,
        bsm_lo: int,
        bsm_hi: int,
    ) -> None:
        ua = a[1] if a[0] == "node" else self._new_node(NodeKind.OPEN)
        ub = b[1] if b[0] == "node" else self._new_node(NodeKind.OPEN)
        self.edges_u.append(ua)
        self.edges_v.append(ub)
        self.edge_outcome.append(outcome_id)
        self.edge_type.append(int(otype))
        self.edge_erasable.append(erasable)
        self.edge_site.append(site)
        self.edge_bsm_lo.append(bsm_lo)
        self.edge_bsm_hi.append(bsm_hi)

    def finish(self) -> "SyndromeGraph":
        return SyndromeGraph(
            name=self.name,
            percolation_axis=self.percolation_axis,
            n_nodes=len(self.node_kind),
            node_kind=np.array(self.node_kind, dtype=np.int8),
            node_pos=tuple(self.node_pos),
            edge_u=np.array(self.edges_u, dtype=np.int32),
            edge_v=np.array(self.edges_v, dtype=np.int32),
            edge_outcome=np.array(self.edge_outcome, dtype=np.int64),
            edge_type=np.array(self.edge_type, dtype=np.int8),
            edge_erasable=np.array(self.edge_erasable, dtype=bool),
            edge_site=np.array(self.edge_site, dtype=np.int32),
            edge_bsm_lo=np.array(self.edge_bsm_lo, dtype=np.int32),
            edge_bsm_hi=np.array(self.edge_bsm_hi, dtype=np.int32),
        )


@dataclass(frozen=True)
class SyndromeGraph:
    name: str
    percolation_axis: int
    n_nodes: int
    node_kind: np.ndarray
    node_pos: tuple
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_outcome: np.ndarray
    edge_type: np.ndarray
    edge_erasable: np.ndarray
    edge_site: np.ndarray
    edge_bsm_lo: np.ndarray
    edge_bsm_hi: np.ndarray

    @property
    def n_edges(self) -> int:
        return int(self.edge_u.size)

    @property
    def boundary_low(self) -> int:
        return 0

    @property
    def boundary_high(self) -> int:
        return 1

    def census(self) -> dict[str, int]:
        counts = Counter(OutcomeType(int(t)).name for t in self.edge_type)
        return dict(sorted(counts.items()))


@dataclass(frozen=True)
class GraphBundle:
    """Both syndrome graphs plus the shared constituent-measurement table."""

    architecture: Architecture
    d: int
    hub_rotation: int
    primal: SyndromeGraph
    dual: SyndromeGraph
    n_outcomes: int
    n_bsm: int
    bsm_site: np.ndarray  # site index of every constituent measurement
    site_arity: np.ndarray

    def graphs(self) -> tuple[SyndromeGraph, SyndromeGraph]:
        return (self.primal, self.dual)

    def outcome_census(self) -> dict[str, dict[str, int]]:
        return {g.name: g.census() for g in self.graphs()}


def build_syndrome_graphs(
    network: FusionNetwork, architecture: Architecture, hub_rotation: int = 0
) -> GraphBundle:
    """Construct the primal/dual pair; deterministic for identical inputs."""
    if hub_rotation not in (0, 1, 2, 3):
        raise ValidationError(f"hub_rotation must be in 0..3, got {hub_rotation}")
    bounds = network.bounds
    cyclic = architecture is Architecture.CYCLIC

    primal = _GraphBuilder("primal", percolation_axis=0, bounds=bounds, parity=1)
    dual = _GraphBuilder("dual", percolation_axis=1, bounds=bounds, parity=0)
    primal.register_cells(
        (x, y, t)
        for x in range(1, bounds[0], 2)
        for y in range(1, bounds[1], 2)
        for t in range(1, bounds[2], 2)
    )
    dual.register_cells(
        (x, y, t)
        for x in range(0, bounds[0] + 1, 2)
        for y in range(2, bounds[1], 2)
        for t in range(0, bounds[2] + 1, 2)
    )

    outcome_id = 0
    bsm_site: list[int] = []
    site_arity = np.zeros(len(network.sites), dtype=np.int8)

    for site in network.sites:
        p, axis = site.pos, site.axis
        erasable = not network.site_in_time_wall(site)
        dirs = angular_dirs(axis)
        if site.kind is SiteKind.FACE:
            present = [True, True, True, True]
            bond_graph, star_graph = primal, dual
        else:
            present = [face_is_valid(shift(p, dv), bounds) for dv in dirs]
            bond_graph, star_graph = dual, primal
        k = sum(present)
        site_arity[site.index] = k

        # qubit order around the site: a contiguous angular arc.  In the bulk
        # the arc starts right after the hub slot (rotatable by convention);
        # at the boundary it starts after the gap of missing neighbours.
        if k == 4:
            hub_slot = (2 + hub_rotation) % 4
            order = [(hub_slot + 1 + i) % 4 for i in range(4)]
        else:
            start = next(
                i for i in range(4) if present[i] and not present[(i - 1) % 4]
            )
            order = [(start + i) % 4 for i in range(4) if present[(start + i) % 4]]

        n_bsm = k if cyclic else k - 1
        bsm_lo = len(bsm_site)
        bsm_site.extend([site.index] * n_bsm)
        bsm_hi = len(bsm_site)

        # product-of-X outcome: one bond across the site's own axis
        ends = (shift(p, unit(axis, -1)), shift(p, unit(axis, +1)))
        bond_graph.add_outcome(
            bond_graph.resolve(ends[0]),
            bond_graph.resolve(ends[1]),
            outcome_id,
            OutcomeType.for_arity(k),
            erasable,
            site.index,
            bsm_lo,
            bsm_hi,
        )
        outcome_id += 1

        # quadrant node of each consecutive qubit pair
        quads: list[tuple[str, int]] = []
        for i in range(k - 1):
            q = shift(p, dirs[order[i]], dirs[order[i + 1]])
            quads.append(star_graph.resolve(q))
        # the closing sector between the last and first qubit
        if k == 4:
            closing = star_graph.resolve(shift(p, dirs[order[3]], dirs[order[0]]))
        else:
            candidates = []
            for slot in range(4):
                if not present[slot]:
                    for qslot in (slot, (slot - 1) % 4):
                        q = shift(p, dirs[qslot], dirs[(qslot + 1) % 4])
                        candidates.append(star_graph.resolve(q))
            supers = [
                c
                for c in candidates
                if c[0] == "node" and c[1] in (0, 1)
            ]
            closing = supers[0] if supers else ("open", -1)

        if cyclic:
            pe = ("node", star_graph._new_node(NodeKind.EDGE_CHECK, p))
            quads.append(closing)
            for i in range(k):
                star_graph.add_outcome(
                    quads[i],
                    pe,
                    outcome_id,
                    OutcomeType.ZZ,
                    erasable,
                    site.index,
                    bsm_lo + i,
                    bsm_lo + i + 1,
                )
                outcome_id += 1
        else:
            for i in range(k - 1):
                star_graph.add_outcome(
                    quads[i],
                    closing,
                    outcome_id,
                    OutcomeType.ZZ,
                    erasable,
                    site.index,
                    bsm_lo + i,
                    bsm_lo + i + 1,
                )
                outcome_id += 1

    return GraphBundle(
        architecture=architecture,
        d=network.d,
        hub_rotation=hub_rotation,
        primal=primal.finish(),
        dual=dual.finish(),
        n_outcomes=outcome_id,
        n_bsm=len(bsm_site),
        bsm_site=np.array(bsm_site, dtype=np.int32),
        site_arity=site_arity,
    )


def export_edge_list(graph: SyndromeGraph, stream: IO[str]) -> None:
    """Plain-text dump: ``node id kind [x y t]`` then ``edge`` records.

    Edge records carry ``outcome_id type u v erasable`` per line; coordinates
    are in doubled lattice units.
    """
    stream.write(f"# syndrome graph {graph.name}\n")
    stream.write(f"# percolation axis {'xyt'[graph.percolation_axis]}\n")
    stream.write("# node <id> <kind> [<x> <y> <t>]\n")
    stream.write("# edge <outcome_id> <type> <u> <v> <erasable>\n")
    for i in range(graph.n_nodes):
        kind = NodeKind(int(graph.node_kind[i])).name.lower()
        pos = graph.node_pos[i]
        coords = f" {pos[0]} {pos[1]} {pos[2]}" if pos is not None else ""
        stream.write(f"node {i} {kind}{coords}\n")
    for e in range(graph.n_edges):
        stream.write(
            "edge {} {} {} {} {}\n".format(
                int(graph.edge_outcome[e]),
                OutcomeType(int(graph.edge_type[e])).name,
                int(graph.edge_u[e]),
                int(graph.edge_v[e]),
                int(graph.edge_erasable[e]),
            )
        )
