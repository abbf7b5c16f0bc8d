"""Digital spaces as finite simple undirected graphs.

A space keeps its point labels verbatim. Rims, balls and other induced
subspaces reuse the parent's labels so results can be addressed by the
same point numbers as the original space.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable


class SpaceError(ValueError):
    """Base class for invalid-space errors."""


class DuplicatePointError(SpaceError):
    pass


class SelfLoopError(SpaceError):
    pass


class DanglingEdgeError(SpaceError):
    pass


class UnknownPointError(SpaceError, KeyError):
    pass


Edge = tuple[int, int]


@dataclass(frozen=True)
class DigitalSpace:
    """Immutable simple graph ``G = (V, W)``.

    Build instances with :func:`make_space`; the constructor assumes its
    arguments are already normalized.
    """

    points: tuple[int, ...]
    edges: tuple[Edge, ...]
    name: str = ""
    _adj: dict[int, tuple[int, ...]] = field(
        default=None, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        nbrs: dict[int, list[int]] = {p: [] for p in self.points}
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        object.__setattr__(
            self, "_adj", {p: tuple(sorted(ns)) for p, ns in nbrs.items()}
        )

    def __len__(self):
        return len(self.points)

    def __contains__(self, v):
        return v in self._adj

    def neighbors(self, v: int) -> tuple[int, ...]:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownPointError(f"point {v} is not in the space") from None

    def adjacent(self, a: int, b: int) -> bool:
        return b in self.neighbors(a)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def key(self) -> tuple:
        """Label-sensitive canonical form, used for memoizing verdicts."""
        return (self.points, self.edges)

    def renamed(self, name: str) -> "DigitalSpace":
        return DigitalSpace(self.points, self.edges, name)


def _canon(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def make_space(points: Iterable[int], edges: Iterable[Iterable[int]] = (), name: str = "") -> DigitalSpace:
    """Validate and normalize points and edges into a :class:`DigitalSpace`.

    Points keep the given order only for validation; the stored order is
    ascending. Edges are deduplicated and stored as sorted ``(low, high)``
    pairs.
    """
    pts = list(points)
    seen = set()
    for p in pts:
        if isinstance(p, bool) or not isinstance(p, int) or p < 1:
            raise SpaceError(f"point labels must be positive integers, got {p!r}")
        if p in seen:
            raise DuplicatePointError(f"duplicate point label {p}")
        seen.add(p)
    es = set()
    for e in edges:
        a, b = tuple(e)
        if a == b:
            raise SelfLoopError(f"self-loop at point {a}")
        if a not in seen or b not in seen:
            missing = a if a not in seen else b
            raise DanglingEdgeError(f"edge ({a}, {b}) has unknown endpoint {missing}")
        es.add(_canon(a, b))
    return DigitalSpace(tuple(sorted(pts)), tuple(sorted(es)), name)


def induced(G: DigitalSpace, keep: Iterable[int], name: str = "") -> DigitalSpace:
    """Induced subspace on ``keep``: every parent edge between kept points."""
    ks = set(keep)
    for v in ks:
        if v not in G:
            raise UnknownPointError(f"point {v} is not in the space")
    es = tuple(e for e in G.edges if e[0] in ks and e[1] in ks)
    return DigitalSpace(tuple(sorted(ks)), es, name)


def rim(G: DigitalSpace, v: int) -> DigitalSpace:
    """The rim ``O(v)``: induced subspace on the neighbors of ``v``."""
    return induced(G, G.neighbors(v))


def ball(G: DigitalSpace, v: int) -> DigitalSpace:
    """The ball ``U(v)``: the rim together with ``v``."""
    return induced(G, G.neighbors(v) + (v,))


def degree(G: DigitalSpace, v: int) -> int:
    return len(G.neighbors(v))


def join(G: DigitalSpace, H: DigitalSpace, name: str = "") -> DigitalSpace:
    """Join ``G * H``: disjoint union plus every edge between G and H.

    If the label sets overlap, every label of H is shifted by ``max(G)``.
    The shift is recorded in the resulting space's name.
    """
    offset = 0
    if set(G.points) & set(H.points):
        offset = max(G.points)
    hp = [p + offset for p in H.points]
    he = [(a + offset, b + offset) for a, b in H.edges]
    cross = [(g, h) for g in G.points for h in hp]
    if not name:
        name = f"join({G.name or 'G'},{H.name or 'H'})"
        if offset:
            name += f"[H+{offset}]"
    return make_space(list(G.points) + hp, list(G.edges) + he + cross, name)


def connected_components(G: DigitalSpace) -> list[DigitalSpace]:
    """Maximal connected induced subspaces, ordered by smallest label."""
    seen: set[int] = set()
    comps = []
    for s in G.points:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in G.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(induced(G, comp))
    return comps


def is_connected(G: DigitalSpace) -> bool:
    return len(G) > 0 and len(connected_components(G)) == 1
