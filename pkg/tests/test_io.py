import json

import numpy as np
import pytest

from digispace import io
from digispace.catalog import build_moebius_12
from digispace.parabolic import Field, lazy_uniform, run


def test_space_roundtrip(tmp_path):
    G = build_moebius_12()
    path = io.save_space(G, tmp_path / "m.json")
    doc = json.loads(path.read_text())
    assert set(doc) == {"name", "points", "edges"}
    assert len(doc["edges"]) == 28
    assert io.load_space(path) == G


@pytest.mark.parametrize("doc, msg", [
    ({"name": "x", "points": [1, 2], "edges": [[1, 2], [2, 1]]}, "duplicate edge"),
    ({"name": "x", "points": [1, 1], "edges": []}, "duplicate point"),
    ({"name": "x", "points": [1, 2], "edges": [[1, 1]]}, "self-loop"),
    ({"name": "x", "points": [1, 2], "edges": [[1, 3]]}, "unknown endpoint"),
    ({"name": "x", "points": [1, 2], "edges": [[1, 2, 3]]}, "2-element"),
    ({"name": "x", "points": [1, 2]}, "needs 'points' and 'edges'"),
])
def test_space_errors(tmp_path, doc, msg):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(io.FormatError, match=msg):
        io.load_space(path)


def test_parse_error_has_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "points": [1, 2],\n  "edges": [[1 2]]\n}\n')
    with pytest.raises(io.FormatError, match=r"bad.json:3:"):
        io.load_space(path)


def test_coefficient_docs(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"scheme": "lazy_uniform", "w": 0.03}')
    assert io.load_coefficients_doc(p) == {"scheme": "lazy_uniform", "w": 0.03}
    p.write_text("[[1, 1, 0.5], [2, 1, 0.5]]")
    assert io.load_coefficients_doc(p) == {"entries": [(1, 1, 0.5), (2, 1, 0.5)]}
    p.write_text('{"scheme": "heat"}')
    with pytest.raises(io.FormatError):
        io.load_coefficients_doc(p)
    C = lazy_uniform(build_moebius_12(), 0.03)
    io.save_coefficients(C.entries, p)
    assert len(io.load_coefficients_doc(p)["entries"]) == len(C.entries)


def test_initial(tmp_path):
    p = tmp_path / "i.json"
    p.write_text('{"1": 12}')
    assert io.load_initial(p) == {1: 12.0}


def test_trajectory_roundtrip_bitwise(tmp_path):
    C = lazy_uniform(build_moebius_12(), 0.03)
    tr = run(C, Field.from_map(C.space, {1: 12.0}), T=100)
    path = io.write_trajectory_csv(tr.points, tr.times, tr.values, tmp_path / "t.csv")
    header = path.read_text().splitlines()[0]
    assert header == "t," + ",".join(f"f_{p}" for p in range(1, 13))
    points, times, values = io.read_trajectory_csv(path)
    assert tuple(points) == tr.points and times == list(range(101))
    assert np.array_equal(values, tr.values)
