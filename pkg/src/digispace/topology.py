"""Recognition of digital n-surfaces and their invariants.

A digital 0-surface is two non-adjacent points. For n >= 1 an n-surface is a
nonempty connected space in which the rim of every point is an
(n-1)-surface. Points whose rim is an (n-1)-ball are boundary points; see
:func:`is_ball` for the ball convention used here.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .space import (
    DigitalSpace,
    connected_components,
    induced,
    is_connected,
    rim,
)

BALL_CONVENTION = (
    "0-ball: one point; 1-ball: induced path with >= 2 points; "
    "m-ball (m >= 2): connected, every point interior or boundary, boundary "
    "nonempty and inducing an (m-1)-surface, clique-complex Euler characteristic 1"
)


class SurfaceStructureError(ValueError):
    """The triangle complex is not that of a 2-surface (with boundary)."""


class PointKind(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    DEFECTIVE = "defective"


@dataclass(frozen=True)
class PointClass:
    kind: PointKind
    dim: int


def is_zero_sphere(G: DigitalSpace) -> bool:
    return len(G) == 2 and G.n_edges == 0


def _from_key(key) -> DigitalSpace:
    return DigitalSpace(key[0], key[1])


def _is_cycle(G: DigitalSpace) -> bool:
    # Equivalent to the recursive definition at n = 1: every rim must be two
    # non-adjacent points, which rules out the triangle.
    return (
        len(G) >= 4
        and all(len(G.neighbors(v)) == 2 for v in G.points)
        and is_connected(G)
    )


@lru_cache(maxsize=None)
def _surface_key(key, n: int) -> bool:
    G = _from_key(key)
    if n == 0:
        return is_zero_sphere(G)
    if n == 1:
        return _is_cycle(G)
    if not is_connected(G):
        return False
    return all(_surface_key(rim(G, v).key(), n - 1) for v in G.points)


def is_n_surface(G: DigitalSpace, n: int) -> bool:
    """Whether ``G`` is a digital n-surface. Verdicts are memoized on the
    label-sensitive edge list of each rim."""
    if n < 0:
        raise ValueError("dimension must be >= 0")
    return _surface_key(G.key(), n)


def is_n_surface_naive(G: DigitalSpace, n: int) -> bool:
    """Literal recursive form of the definition, without shortcuts or caching."""
    if n == 0:
        return is_zero_sphere(G)
    if not is_connected(G):
        return False
    return all(is_n_surface_naive(rim(G, v), n - 1) for v in G.points)


def cliques(G: DigitalSpace) -> list[tuple[int, ...]]:
    """Every nonempty clique, each listed once as an ascending tuple."""
    out = []

    def grow(clique, cands):
        out.append(clique)
        for i, w in enumerate(cands):
            grow(clique + (w,), [u for u in cands[i + 1:] if G.adjacent(w, u)])

    for v in G.points:
        grow((v,), [u for u in G.neighbors(v) if u > v])
    return sorted(out, key=lambda c: (len(c), c))


def clique_euler(G: DigitalSpace) -> int:
    return sum((-1) ** (len(c) - 1) for c in cliques(G))


def triangles(G: DigitalSpace) -> list[tuple[int, int, int]]:
    out = []
    for a, b in G.edges:
        for c in G.neighbors(b):
            if c > b and G.adjacent(a, c):
                out.append((a, b, c))
    return sorted(out)


def euler_characteristic(G: DigitalSpace) -> int:
    return len(G) - G.n_edges + len(triangles(G))


@lru_cache(maxsize=None)
def _ball_key(key, m: int) -> bool:
    G = _from_key(key)
    if m == 0:
        return len(G) == 1
    if not is_connected(G):
        return False
    if m == 1:
        degs = sorted(len(G.neighbors(v)) for v in G.points)
        if len(degs) < 2:
            return False
        return degs[:2] == [1, 1] and all(d == 2 for d in degs[2:])
    boundary = []
    for v in G.points:
        r = rim(G, v).key()
        if _surface_key(r, m - 1):
            continue
        if _ball_key(r, m - 1):
            boundary.append(v)
        else:
            return False
    if not boundary:
        return False
    if not is_n_surface(induced(G, boundary), m - 1):
        return False
    return clique_euler(G) == 1


def is_ball(G: DigitalSpace, m: int) -> bool:
    """Whether ``G`` is a digital m-ball under :data:`BALL_CONVENTION`."""
    if m < 0:
        raise ValueError("dimension must be >= 0")
    return _ball_key(G.key(), m)


def classify_point(G: DigitalSpace, v: int, n: int) -> PointClass:
    if n < 1:
        raise ValueError("classification needs n >= 1")
    r = rim(G, v)
    if is_n_surface(r, n - 1):
        kind = PointKind.INTERIOR
    elif is_ball(r, n - 1):
        kind = PointKind.BOUNDARY
    else:
        kind = PointKind.DEFECTIVE
    return PointClass(kind, n)


def _edge_triangle_map(G: DigitalSpace):
    tris = triangles(G)
    by_edge: dict[tuple[int, int], list[int]] = {e: [] for e in G.edges}
    for i, (a, b, c) in enumerate(tris):
        for e in ((a, b), (a, c), (b, c)):
            by_edge[e].append(i)
    return tris, by_edge


def _forward(tri, a, b) -> bool:
    """True if the cyclic order ``tri`` traverses a -> b."""
    return (tri.index(b) - tri.index(a)) % 3 == 1


def is_orientable(G: DigitalSpace) -> bool:
    """Whether the triangles of a 2-surface admit a coherent orientation.

    Raises :class:`SurfaceStructureError` unless every edge lies in one or
    two triangles.
    """
    tris, by_edge = _edge_triangle_map(G)
    for e, ts in by_edge.items():
        if len(ts) not in (1, 2):
            raise SurfaceStructureError(
                f"edge {e} lies in {len(ts)} triangles; expected 1 or 2"
            )
    orient: list[tuple[int, int, int] | None] = [None] * len(tris)
    for seed in range(len(tris)):
        if orient[seed] is not None:
            continue
        orient[seed] = tris[seed]
        queue = deque([seed])
        while queue:
            i = queue.popleft()
            o = orient[i]
            for a, b in ((o[0], o[1]), (o[1], o[2]), (o[2], o[0])):
                for j in by_edge[(a, b) if a < b else (b, a)]:
                    if j == i:
                        continue
                    if orient[j] is None:
                        (x,) = set(tris[j]) - {a, b}
                        orient[j] = (b, a, x)
                        queue.append(j)
                    elif _forward(orient[j], a, b):
                        return False
    return True


@dataclass
class SurfaceReport:
    dimension: int
    is_surface: bool
    allow_boundary: bool
    classes: dict[int, PointClass]
    euler: int
    triangle_count: int
    orientable: bool | None
    boundary_components: list[DigitalSpace] = field(default_factory=list)
    connected: bool = True

    @property
    def closed(self) -> bool:
        return not self.boundary_points

    @property
    def boundary_points(self) -> list[int]:
        return [v for v, c in self.classes.items() if c.kind is PointKind.BOUNDARY]

    @property
    def defective_points(self) -> list[int]:
        return [v for v, c in self.classes.items() if c.kind is PointKind.DEFECTIVE]

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "is_surface": self.is_surface,
            "allow_boundary": self.allow_boundary,
            "connected": self.connected,
            "euler": self.euler,
            "triangle_count": self.triangle_count,
            "orientable": self.orientable,
            "ball_convention": BALL_CONVENTION,
            "points": {str(v): c.kind.value for v, c in sorted(self.classes.items())},
            "boundary_components": [
                {"name": f"boundary-{i + 1}", "points": list(b.points),
                 "edges": [list(e) for e in b.edges]}
                for i, b in enumerate(self.boundary_components)
            ],
        }


def surface_report(G: DigitalSpace, n: int, allow_boundary: bool = True) -> SurfaceReport:
    """Classify every point of ``G`` at dimension ``n`` and collect invariants.

    With ``allow_boundary`` the verdict accepts boundary points; otherwise
    every point must be interior (a closed n-surface).
    """
    tris = triangles(G)
    euler = len(G) - G.n_edges + len(tris)
    conn = is_connected(G)
    if n == 0:
        return SurfaceReport(0, is_zero_sphere(G), allow_boundary, {}, euler,
                             len(tris), None, [], conn)
    classes = {v: classify_point(G, v, n) for v in G.points}
    kinds = {c.kind for c in classes.values()}
    if allow_boundary:
        ok = conn and PointKind.DEFECTIVE not in kinds
    else:
        ok = conn and kinds == {PointKind.INTERIOR}
    bpts = [v for v, c in classes.items() if c.kind is PointKind.BOUNDARY]
    bcomps = connected_components(induced(G, bpts)) if bpts else []
    orientable = None
    if n == 2 and conn and PointKind.DEFECTIVE not in kinds:
        try:
            orientable = is_orientable(G)
        except SurfaceStructureError:
            orientable = None
    return SurfaceReport(n, ok, allow_boundary, classes, euler, len(tris),
                         orientable, bcomps, conn)


def is_surface_with_boundary(G: DigitalSpace, n: int) -> SurfaceReport:
    return surface_report(G, n, allow_boundary=True)


def summary(report: SurfaceReport) -> dict:
    """Compact comparison key: dimension, verdict, χ, orientability, boundary count."""
    return {
        "dimension": report.dimension,
        "is_surface": report.is_surface,
        "euler": report.euler,
        "orientable": report.orientable,
        "boundary_count": len(report.boundary_components),
    }


__all__ = [
    "BALL_CONVENTION", "PointClass", "PointKind", "SurfaceReport",
    "SurfaceStructureError", "classify_point", "clique_euler", "cliques",
    "euler_characteristic", "is_ball", "is_n_surface", "is_n_surface_naive",
    "is_orientable", "is_surface_with_boundary", "is_zero_sphere",
    "summary", "surface_report", "triangles",
]
