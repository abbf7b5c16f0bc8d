"""Constructors for the standard spaces: minimal spheres and balls, grids,
the 12-point Moebius strip and an 11-point projective plane.

The projective plane is found by backtracking search rather than written
down; the first accepted graph is cached as a space file.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

from . import io
from .space import DigitalSpace, join, make_space, rim
from .topology import summary, surface_report

log = logging.getLogger(__name__)

MAX_SPHERE_DIM = 4


def build_cycle(k: int) -> DigitalSpace:
    if k < 4:
        raise ValueError(f"a digital 1-sphere needs at least 4 points, got {k}")
    edges = [(i, i % k + 1) for i in range(1, k + 1)]
    return make_space(range(1, k + 1), edges, name=f"cycle-{k}")


def zero_sphere() -> DigitalSpace:
    return make_space([1, 2], [], name="min-sphere-0")


def build_min_sphere(n: int) -> DigitalSpace:
    """Iterated join of ``n + 1`` copies of the zero-sphere (2(n+1) points)."""
    if not 0 <= n <= MAX_SPHERE_DIM:
        raise ValueError(f"sphere dimension must be in 0..{MAX_SPHERE_DIM}, got {n}")
    G = zero_sphere()
    for _ in range(n):
        G = join(G, zero_sphere())
    return G.renamed(f"min-sphere-{n}")


def build_ball(n: int) -> DigitalSpace:
    """Cone over the minimal (n-1)-sphere; the apex is point 1."""
    if not 1 <= n <= MAX_SPHERE_DIM:
        raise ValueError(f"ball dimension must be in 1..{MAX_SPHERE_DIM}, got {n}")
    apex = make_space([1])
    return join(apex, build_min_sphere(n - 1)).renamed(f"ball-{n}")


def _lattice_label(x: int, y: int, w: int) -> int:
    return y * w + x + 1


def build_square_grid(w: int, h: int) -> DigitalSpace:
    """``w x h`` lattice with 4-neighbor adjacency, labels row by row from 1."""
    if w < 3 or h < 3:
        raise ValueError("grid needs w, h >= 3")
    edges = []
    for y in range(h):
        for x in range(w):
            p = _lattice_label(x, y, w)
            if x + 1 < w:
                edges.append((p, _lattice_label(x + 1, y, w)))
            if y + 1 < h:
                edges.append((p, _lattice_label(x, y + 1, w)))
    return make_space(range(1, w * h + 1), edges, name=f"square-grid-{w}x{h}")


def build_tri_grid(w: int, h: int) -> DigitalSpace:
    """Square lattice plus the lower-left to upper-right diagonal of every cell."""
    G = build_square_grid(w, h)
    diag = [
        (_lattice_label(x, y, w), _lattice_label(x + 1, y + 1, w))
        for y in range(h - 1)
        for x in range(w - 1)
    ]
    return make_space(G.points, G.edges + tuple(diag), name=f"tri-grid-{w}x{h}")


MOEBIUS_EDGES = (
    # boundary circle
    (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 1),
    # interior circle
    (9, 10), (10, 11), (11, 12), (12, 9),
    (9, 1), (9, 4), (9, 5), (9, 8),
    (10, 1), (10, 2), (10, 5), (10, 6),
    (11, 2), (11, 3), (11, 6), (11, 7),
    (12, 3), (12, 4), (12, 7), (12, 8),
)


def build_moebius_12() -> DigitalSpace:
    """Twelve-point Moebius strip: interior points 9-12, boundary circle 1-8."""
    G = make_space(range(1, 13), MOEBIUS_EDGES, name="moebius12")
    # the two rims that pin the completion
    assert rim(G, 10).points == (1, 2, 5, 6, 9, 11)
    assert rim(G, 2).points == (1, 3, 10, 11)
    return G


# -- projective plane search -------------------------------------------------

PROJECTIVE_DEGREES = (4, 6, 6, 6, 6, 5, 5, 5, 5, 6, 6)


class InconsistentSearchSpec(ValueError):
    pass


class SearchExhausted(RuntimeError):
    def __init__(self, message: str, nodes: int):
        super().__init__(f"{message} after {nodes} search nodes")
        self.nodes = nodes


@dataclass(frozen=True)
class SearchSpec:
    """Constraints for a closed triangulated 2-surface search.

    ``degrees`` lists target degrees for points ``1..n_points``; ``None``
    leaves degrees free. ``order`` selects the candidate order for the third
    point of each new triangle ("lex" ascending, "revlex" descending).
    """

    n_points: int = 11
    degrees: tuple[int, ...] | None = PROJECTIVE_DEGREES
    euler: int = 1
    orientable: bool = False
    boundary_count: int = 0
    time_budget: float = 600.0
    node_budget: int | None = None
    order: str = "lex"

    def digest(self) -> str:
        key = {k: v for k, v in asdict(self).items()
               if k not in ("time_budget", "node_budget")}
        blob = json.dumps(key, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]

    def edge_count(self) -> int:
        # closed surface with cycle rims: 3T = 2E and V - E + T = euler
        return 3 * (self.n_points - self.euler)

    def check(self):
        n = self.n_points
        if n < 6:
            raise InconsistentSearchSpec("a closed 2-surface needs at least 6 points")
        if self.boundary_count != 0:
            raise InconsistentSearchSpec("only closed surfaces can be searched")
        if self.order not in ("lex", "revlex"):
            raise InconsistentSearchSpec(f"unknown order {self.order!r}")
        if self.edge_count() <= 0:
            raise InconsistentSearchSpec(f"euler {self.euler} impossible for {n} points")
        if self.degrees is None:
            return
        if len(self.degrees) != n:
            raise InconsistentSearchSpec("need one degree target per point")
        if sum(self.degrees) % 2:
            raise InconsistentSearchSpec("degree targets have odd sum")
        bad = [d for d in self.degrees if not 4 <= d <= n - 1]
        if bad:
            raise InconsistentSearchSpec(
                f"degrees {bad} cannot carry a rim cycle of length >= 4 in {n} points"
            )
        if sum(self.degrees) != 2 * self.edge_count():
            raise InconsistentSearchSpec(
                f"degree sum {sum(self.degrees)} != 2 * {self.edge_count()} edges "
                f"required by euler {self.euler}"
            )


class _Search:
    """Backtracking over triangles: repeatedly close the lexicographically
    smallest edge that lies in one triangle, so every rim grows as a path and
    finally closes into a cycle."""

    def __init__(self, spec: SearchSpec, accept: Callable[[DigitalSpace], bool]):
        self.spec = spec
        self.n = spec.n_points
        self.points = list(range(1, self.n + 1))
        self.cap = {p: (spec.degrees[p - 1] if spec.degrees else self.n - 1)
                    for p in self.points}
        self.free_degree = spec.degrees is None
        self.max_edges = spec.edge_count()
        self.adj = {p: set() for p in self.points}
        self.edge_total = 0
        self.face_count: dict[tuple[int, int], int] = {}
        self.link = {p: {} for p in self.points}  # rim-path adjacency per point
        self.closed = set()
        self.faces = []
        self.accept = accept
        self.nodes = 0
        self.deadline = time.monotonic() + spec.time_budget
        self.candidates = sorted(self.points, reverse=spec.order == "revlex")

    # state changes are recorded on an undo stack
    def _add_face(self, a, b, c, undo):
        for x, y in ((a, b), (a, c), (b, c)):
            e = (x, y) if x < y else (y, x)
            if e not in self.face_count:
                self.face_count[e] = 0
                self.adj[x].add(y)
                self.adj[y].add(x)
                self.edge_total += 1
                undo.append(("edge", e))
            self.face_count[e] += 1
            undo.append(("count", e))
        for v, x, y in ((a, b, c), (b, a, c), (c, a, b)):
            lk = self.link[v]
            lk.setdefault(x, set()).add(y)
            lk.setdefault(y, set()).add(x)
            undo.append(("link", v, x, y))
        self.faces.append((a, b, c))
        undo.append(("face",))

    def _undo(self, undo):
        while undo:
            op = undo.pop()
            if op[0] == "edge":
                x, y = op[1]
                del self.face_count[op[1]]
                self.adj[x].discard(y)
                self.adj[y].discard(x)
                self.edge_total -= 1
            elif op[0] == "count":
                self.face_count[op[1]] -= 1
            elif op[0] == "link":
                _, v, x, y = op
                lk = self.link[v]
                lk[x].discard(y)
                lk[y].discard(x)
                if not lk[x]:
                    del lk[x]
                if not lk[y]:
                    del lk[y]
            elif op[0] == "face":
                self.faces.pop()
            elif op[0] == "closed":
                self.closed.discard(op[1])

    def _link_state(self, v):
        """None if the rim of v is broken, else True when it is a full cycle."""
        lk = self.link[v]
        if any(len(ns) > 2 for ns in lk.values()):
            return None
        if len(lk) != len(self.adj[v]):
            return None
        if any(len(ns) != 2 for ns in lk.values()):
            return False
        # every link vertex has two link neighbors: the link is a union of cycles
        start = next(iter(lk))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in lk[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(lk):
            return None
        if len(lk) < 4:
            return None
        if not self.free_degree and len(lk) != self.cap[v]:
            return None
        return True

    def _feasible(self, touched, undo) -> bool:
        if self.edge_total > self.max_edges:
            return False
        for v in touched:
            if len(self.adj[v]) > self.cap[v]:
                return False
            state = self._link_state(v)
            if state is None:
                return False
            if state and v not in self.closed:
                self.closed.add(v)
                undo.append(("closed", v))
        # every 3-clique must end up as a triangle: an edge whose two triangles
        # are already placed cannot sit in a further clique
        for x in touched:
            for y in self.adj[x]:
                e = (x, y) if x < y else (y, x)
                common = self.adj[x] & self.adj[y]
                if len(common) > 2:
                    return False
                if self.face_count[e] == 2:
                    for z in common:
                        if not self._is_face(x, y, z):
                            return False
        return True

    def _quick_reject(self, a, b, x) -> bool:
        """Cheap necessary conditions checked before touching any state."""
        adj, cap = self.adj, self.cap
        new_x = (a not in adj[x]) + (b not in adj[x])
        if len(adj[x]) + new_x > cap[x]:
            return True
        if a not in adj[x] and len(adj[a]) >= cap[a]:
            return True
        if b not in adj[x] and len(adj[b]) >= cap[b]:
            return True
        if self.edge_total + new_x > self.max_edges:
            return True
        la, lb, lx = self.link[a], self.link[b], self.link[x]
        return (len(la.get(x, ())) >= 2 or len(lb.get(x, ())) >= 2
                or len(lx.get(a, ())) >= 2 or len(lx.get(b, ())) >= 2)

    def _is_face(self, x, y, z) -> bool:
        return z in self.link[x].get(y, ())

    def _open_edge(self):
        opened = [e for e, c in self.face_count.items() if c == 1]
        return min(opened) if opened else None

    def _third_of(self, a, b):
        return next(iter(self.link[a][b]))

    def _check_budget(self):
        self.nodes += 1
        if self.spec.node_budget is not None and self.nodes > self.spec.node_budget:
            raise SearchExhausted("node budget exhausted", self.nodes)
        if self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise SearchExhausted("time budget exhausted", self.nodes)

    def _complete(self):
        if len(self.closed) != self.n:
            return None
        G = make_space(self.points, self.face_count.keys(), name="projective-plane-11")
        return G if self.accept(G) else None

    def _recurse(self):
        self._check_budget()
        e = self._open_edge()
        if e is None:
            return self._complete()
        a, b = e
        y = self._third_of(a, b)
        for x in self.candidates:
            if x in (a, b, y) or x in self.closed:
                continue
            if self._is_face(a, b, x) or self._quick_reject(a, b, x):
                continue
            undo = []
            self._add_face(a, b, x, undo)
            if self._feasible((a, b, x), undo):
                found = self._recurse()
                if found is not None:
                    return found
            self._undo(undo)
        return None

    def run(self) -> DigitalSpace:
        # point 1 lies in some triangle; seed with each (1, a, b) in order
        others = [p for p in self.candidates if p != 1]
        for i, a in enumerate(others):
            for b in others[i + 1:]:
                undo = []
                self._add_face(1, a, b, undo)
                if self._feasible((1, a, b), undo):
                    found = self._recurse()
                    if found is not None:
                        return found
                self._undo(undo)
        raise SearchExhausted("search space exhausted without a solution", self.nodes)


def _acceptor(spec: SearchSpec) -> Callable[[DigitalSpace], bool]:
    def accept(G: DigitalSpace) -> bool:
        rep = surface_report(G, 2, allow_boundary=False)
        if not rep.is_surface or rep.euler != spec.euler:
            return False
        if rep.orientable is not spec.orientable:
            return False
        if spec.degrees is not None:
            if any(len(G.neighbors(p)) != d for p, d in zip(G.points, spec.degrees)):
                return False
        return len(rep.boundary_components) == spec.boundary_count

    return accept


def default_cache_dir() -> Path:
    env = os.environ.get("DIGISPACE_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "digispace"


def cache_path(spec: SearchSpec, cache_dir: Path | None = None) -> Path:
    d = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    return d / f"projective-plane-{spec.n_points}-{spec.digest()}.json"


def search_surface(spec: SearchSpec) -> tuple[DigitalSpace, int]:
    """Run the search without caching; returns the graph and explored nodes."""
    spec.check()
    s = _Search(spec, _acceptor(spec))
    G = s.run()
    return G, s.nodes


def find_projective_plane_11(spec: SearchSpec | None = None, cache_dir=None,
                             use_cache: bool = True) -> DigitalSpace:
    """First projective plane accepted under ``spec``'s fixed exploration order.

    The result is written to (and later read from) a space file named after
    the spec digest.
    """
    spec = spec or SearchSpec()
    spec.check()
    path = cache_path(spec, cache_dir)
    if use_cache and path.exists():
        G = io.load_space(path)
        if _acceptor(spec)(G):
            return G
        log.warning("cached space %s fails the acceptance check; searching again", path)
    G, nodes = search_surface(spec)
    log.info("projective plane found after %d search nodes", nodes)
    if use_cache:
        path.parent.mkdir(parents=True, exist_ok=True)
        io.save_space(G, path)
    return G


# -- catalog ----------------------------------------------------------------

@dataclass
class CatalogEntry:
    name: str
    build: Callable[[], DigitalSpace]
    dimension: int
    euler: int | None = None
    orientable: bool | None = None
    boundary_count: int = 0
    allow_boundary: bool = False
    expect_surface: bool = True

    def expected(self) -> dict:
        return {
            "dimension": self.dimension,
            "is_surface": self.expect_surface,
            "euler": self.euler,
            "orientable": self.orientable,
            "boundary_count": self.boundary_count,
        }


def _entries() -> list[CatalogEntry]:
    out = [
        CatalogEntry("min-sphere-0", lambda: build_min_sphere(0), 0, euler=2),
        CatalogEntry("min-sphere-1", lambda: build_min_sphere(1), 1, euler=0),
        CatalogEntry("min-sphere-2", lambda: build_min_sphere(2), 2, euler=2,
                     orientable=True),
        CatalogEntry("min-sphere-3", lambda: build_min_sphere(3), 3),
    ]
    out += [
        CatalogEntry(f"cycle-{k}", (lambda k=k: build_cycle(k)), 1, euler=0)
        for k in (4, 5, 6, 8)
    ]
    out += [
        CatalogEntry("ball-1", lambda: build_ball(1), 1, euler=1, boundary_count=2,
                     allow_boundary=True),
        CatalogEntry("ball-2", lambda: build_ball(2), 2, euler=1, orientable=True,
                     boundary_count=1, allow_boundary=True),
        CatalogEntry("ball-3", lambda: build_ball(3), 3, boundary_count=1,
                     allow_boundary=True),
        CatalogEntry("square-grid-3x3", lambda: build_square_grid(3, 3), 2,
                     boundary_count=0, allow_boundary=True, expect_surface=False),
        CatalogEntry("tri-grid-4x4", lambda: build_tri_grid(4, 4), 2, euler=1,
                     orientable=True, boundary_count=1, allow_boundary=True),
        CatalogEntry("moebius12", build_moebius_12, 2, euler=0, orientable=False,
                     boundary_count=1, allow_boundary=True),
        CatalogEntry("projective-plane-11", find_projective_plane_11, 2, euler=1,
                     orientable=False),
    ]
    return out


CATALOG: dict[str, CatalogEntry] = {}


def catalog() -> dict[str, CatalogEntry]:
    if not CATALOG:
        CATALOG.update({e.name: e for e in _entries()})
    return CATALOG


def build(name: str) -> DigitalSpace:
    try:
        entry = catalog()[name]
    except KeyError:
        raise KeyError(f"unknown catalog space {name!r}") from None
    return entry.build().renamed(name)


def check_entry(entry: CatalogEntry, space: DigitalSpace | None = None) -> dict:
    G = space if space is not None else entry.build()
    rep = surface_report(G, entry.dimension, allow_boundary=entry.allow_boundary)
    got = summary(rep)
    exp = entry.expected()
    mismatches = {k: (exp[k], got[k]) for k in exp if exp[k] is not None and exp[k] != got[k]}
    return {"name": entry.name, "ok": not mismatches, "mismatches": mismatches,
            "defective_points": rep.defective_points}


@dataclass
class SelftestReport:
    results: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.results)

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.results if not r["ok"]]


def catalog_selftest(entries=None, spaces: dict[str, DigitalSpace] | None = None) -> SelftestReport:
    """Revalidate catalog entries against their expected summaries.

    ``spaces`` optionally substitutes the space checked for a given entry
    name (e.g. one loaded from a file).
    """
    if entries is None:
        entries = list(catalog().values())
    spaces = spaces or {}
    return SelftestReport([check_entry(e, spaces.get(e.name)) for e in entries])

