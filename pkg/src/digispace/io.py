"""File formats: space files, coefficient files, initial conditions and
trajectory CSV.

Structured documents are JSON. Parse failures are re-raised as
:class:`FormatError` carrying the file name and line number.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .space import DigitalSpace, SpaceError, make_space


class FormatError(ValueError):
    pass


def _read_json(path):
    path = Path(path)
    text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if text.splitlines() else ""
        raise FormatError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}"
        ) from None


def space_to_dict(G: DigitalSpace) -> dict:
    return {"name": G.name, "points": list(G.points), "edges": [list(e) for e in G.edges]}


def space_from_dict(doc: dict, source: str = "<space>") -> DigitalSpace:
    if not isinstance(doc, dict) or "points" not in doc or "edges" not in doc:
        raise FormatError(f"{source}: space document needs 'points' and 'edges'")
    edges = doc["edges"]
    seen = set()
    for e in edges:
        if not isinstance(e, list) or len(e) != 2:
            raise FormatError(f"{source}: edge {e!r} is not a 2-element array")
        key = frozenset(e)
        if key in seen:
            raise FormatError(f"{source}: duplicate edge {e}")
        seen.add(key)
    try:
        return make_space(doc["points"], edges, name=str(doc.get("name", "")))
    except SpaceError as exc:
        raise FormatError(f"{source}: {exc}") from exc


def dumps_space(G: DigitalSpace) -> str:
    d = space_to_dict(G)
    edges = ",\n    ".join(json.dumps(e) for e in d["edges"])
    return (
        "{\n"
        f'  "name": {json.dumps(d["name"])},\n'
        f'  "points": {json.dumps(d["points"])},\n'
        f'  "edges": [\n    {edges}\n  ]\n'
        "}\n"
    )


def save_space(G: DigitalSpace, path) -> Path:
    path = Path(path)
    path.write_text(dumps_space(G))
    return path


def load_space(path) -> DigitalSpace:
    return space_from_dict(_read_json(path), str(path))


def load_coefficients_doc(path) -> dict:
    """Either ``{"entries": [[p, k, value], ...]}`` (a bare list is accepted
    too) or ``{"scheme": "lazy_uniform", "w": value}``."""
    doc = _read_json(path)
    if isinstance(doc, list):
        doc = {"entries": doc}
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: coefficient document must be an object or a list")
    if "scheme" in doc:
        if doc["scheme"] != "lazy_uniform":
            raise FormatError(f"{path}: unknown scheme {doc['scheme']!r}")
        if "w" not in doc:
            raise FormatError(f"{path}: lazy_uniform scheme needs 'w'")
        return {"scheme": "lazy_uniform", "w": float(doc["w"])}
    if "entries" not in doc:
        raise FormatError(f"{path}: expected 'entries' or 'scheme'")
    out = []
    for item in doc["entries"]:
        if not isinstance(item, list) or len(item) != 3:
            raise FormatError(f"{path}: entry {item!r} is not [p, k, value]")
        out.append((int(item[0]), int(item[1]), float(item[2])))
    return {"entries": out}


def save_coefficients(entries, path) -> Path:
    path = Path(path)
    rows = ",\n    ".join(json.dumps([p, k, v]) for (p, k), v in sorted(entries.items()))
    path.write_text('{\n  "entries": [\n    ' + rows + "\n  ]\n}\n")
    return path


def load_initial(path) -> dict[int, float]:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: initial condition must map point -> value")
    try:
        return {int(p): float(v) for p, v in doc.items()}
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: {exc}") from None


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(points, times, values, path) -> Path:
    """One row per time step: ``t,f_<p1>,...``; values printed with 17
    significant digits so they read back bit-for-bit."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"f_{p}" for p in points])
        for t, row in zip(times, values):
            w.writerow([str(t)] + [fmt(v) for v in row])
    return path


def read_trajectory_csv(path):
    """Returns ``(points, times, values)`` with values as an array (T+1, n)."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "t":
        raise FormatError(f"{path}: missing 't,f_...' header")
    points = [int(h[2:]) for h in rows[0][1:]]
    times = [int(r[0]) for r in rows[1:]]
    values = np.array([[float(x) for x in r[1:]] for r in rows[1:]], dtype=float)
    return points, times, values.reshape(len(times), len(points))


def write_series(times, values, path) -> Path:
    """Two-column ``t value`` text for plotting."""
    path = Path(path)
    with path.open("w") as fh:
        for t, v in zip(times, values):
            fh.write(f"{t} {fmt(v)}\n")
    return path


def write_json(doc, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path
