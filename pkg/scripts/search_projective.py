"""Search for the 11-point projective plane under both candidate orders and
print the edge lists with a few invariants."""

import time

from digispace.catalog import SearchSpec, search_surface
from digispace.topology import surface_report

if __name__ == "__main__":
    for order in ("lex", "revlex"):
        t0 = time.perf_counter()
        G, nodes = search_surface(SearchSpec(order=order))
        dt = time.perf_counter() - t0
        rep = surface_report(G, 2, allow_boundary=False)
        print(f"{order}: {nodes} nodes, {dt:.2f}s, chi={rep.euler}, "
              f"orientable={rep.orientable}, triangles={rep.triangle_count}")
        print("  edges:", " ".join(f"{a}-{b}" for a, b in G.edges))
