"""Fusion-network geometry: a block of cubic cells with measurement sites.

The network is the incidence graph of a foliated surface-code slab: cells
form a ``d x d x (2d+1)`` block (two space axes, one time axis), every face
and every edge of the block hosts one GHZ-state measurement, and each
(face, edge) incidence hosts one two-qubit resource state.  The arity of a
measurement equals the degree of its site: always 4 at faces, 4 in the bulk
and 2 or 3 at the boundary for edges.

Geometry is handled in *doubled coordinates*: doubling every half-integer
centre makes cells all-odd points, vertices all-even points, faces points
with exactly one even coordinate (the normal axis) and edges points with
exactly one odd coordinate (the direction axis).  The dual lattice is the
same picture shifted by (1, 1, 1), which the syndrome-graph builder exploits.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ValidationError
from .gsm import Architecture

AXES = (0, 1, 2)
AXIS_NAMES = "xyt"

Point = tuple[int, int, int]


class SiteKind(Enum):
    FACE = "face"
    EDGE = "edge"


@dataclass(frozen=True)
class Site:
    """One GHZ-state measurement location."""

    index: int
    kind: SiteKind
    axis: int  # face: normal axis; edge: direction axis
    pos: Point  # doubled coordinates of the site centre


def unit(axis: int, step: int = 1) -> Point:
    v = [0, 0, 0]
    v[axis] = step
    return tuple(v)  # type: ignore[return-value]


def angular_dirs(axis: int) -> list[Point]:
    """The four lateral unit offsets around ``axis`` in rotational order."""
    a1, a2 = [ax for ax in AXES if ax != axis]
    return [unit(a1), unit(a2), unit(a1, -1), unit(a2, -1)]


def shift(p: Point, *offsets: Point) -> Point:
    q = list(p)
    for off in offsets:
        for ax in AXES:
            q[ax] += off[ax]
    return tuple(q)  # type: ignore[return-value]


@dataclass(frozen=True)
class FusionNetwork:
    d: int
    architecture: Architecture
    bounds: Point  # doubled extent per axis: (2d, 2d, 2*(2d+1))
    sites: tuple[Site, ...]
    incidences: np.ndarray  # (n_resource_states, 2) of (face index, edge index)
    degrees: np.ndarray  # per site

    @property
    def cell_shape(self) -> Point:
        return (self.bounds[0] // 2, self.bounds[1] // 2, self.bounds[2] // 2)

    @property
    def n_vertices(self) -> int:
        return len(self.sites)

    @property
    def n_resource_states(self) -> int:
        return int(self.incidences.shape[0])

    def degree_census(self) -> dict[int, int]:
        return dict(sorted(Counter(int(x) for x in self.degrees).items()))

    def site_in_time_wall(self, site: Site) -> bool:
        return site.pos[2] == 0 or site.pos[2] == self.bounds[2]

    def site_touches_boundary(self, site: Site) -> bool:
        return any(
            site.pos[ax] == 0 or site.pos[ax] == self.bounds[ax] for ax in AXES
        )


def _face_points(bounds: Point):
    """All faces of the block, lexicographic by (normal axis, position)."""
    for mu in AXES:
        lat = [ax for ax in AXES if ax != mu]
        for c_mu in range(0, bounds[mu] + 1, 2):
            for c1 in range(1, bounds[lat[0]], 2):
                for c2 in range(1, bounds[lat[1]], 2):
                    p = [0, 0, 0]
                    p[mu], p[lat[0]], p[lat[1]] = c_mu, c1, c2
                    yield tuple(p), mu


def _edge_points(bounds: Point):
    for nu in AXES:
        lat = [ax for ax in AXES if ax != nu]
        for c_nu in range(1, bounds[nu], 2):
            for c1 in range(0, bounds[lat[0]] + 1, 2):
                for c2 in range(0, bounds[lat[1]] + 1, 2):
                    p = [0, 0, 0]
                    p[nu], p[lat[0]], p[lat[1]] = c_nu, c1, c2
                    yield tuple(p), nu


def face_is_valid(p: Point, bounds: Point) -> bool:
    """A face point must keep its odd (lateral) coordinates strictly inside."""
    for ax in AXES:
        if p[ax] % 2 == 1 and not 0 < p[ax] < bounds[ax]:
            return False
        if not 0 <= p[ax] <= bounds[ax]:
            return False
    return True


def build_network(d: int, architecture: Architecture) -> FusionNetwork:
    """Deterministic fusion network for an odd code distance ``d >= 3``."""
    if d < 3 or d % 2 == 0:
        raise ValidationError(f"d must be an odd integer >= 3, got {d}")
    l_t = 2 * d + 1
    bounds: Point = (2 * d, 2 * d, 2 * l_t)

    sites: list[Site] = []
    index_of: dict[Point, int] = {}
    for p, mu in _face_points(bounds):
        site = Site(len(sites), SiteKind.FACE, mu, p)
        sites.append(site)
        index_of[p] = site.index
    n_faces = len(sites)
    for p, nu in _edge_points(bounds):
        site = Site(len(sites), SiteKind.EDGE, nu, p)
        sites.append(site)
        index_of[p] = site.index

    incidences: list[tuple[int, int]] = []
    degrees = np.zeros(len(sites), dtype=np.int32)
    # every face touches its 4 boundary edges, all of which exist
    for site in sites[:n_faces]:
        lat = [ax for ax in AXES if ax != site.axis]
        for ax in lat:
            for step in (-1, +1):
                q = shift(site.pos, unit(ax, step))
                edge_index = index_of[q]
                incidences.append((site.index, edge_index))
                degrees[site.index] += 1
                degrees[edge_index] += 1

    return FusionNetwork(
        d=d,
        architecture=architecture,
        bounds=bounds,
        sites=tuple(sites),
        incidences=np.array(incidences, dtype=np.int32),
        degrees=degrees,
    )
