import os

import pytest

from digispace import catalog
from digispace.catalog import build_min_sphere, build_moebius_12


@pytest.fixture(scope="session", autouse=True)
def search_cache(tmp_path_factory):
    d = tmp_path_factory.mktemp("cache")
    old = os.environ.get("DIGISPACE_CACHE")
    os.environ["DIGISPACE_CACHE"] = str(d)
    yield d
    if old is None:
        os.environ.pop("DIGISPACE_CACHE", None)
    else:
        os.environ["DIGISPACE_CACHE"] = old


@pytest.fixture(scope="session")
def moebius():
    return build_moebius_12()


@pytest.fixture(scope="session")
def octahedron():
    return build_min_sphere(2)


@pytest.fixture(scope="session")
def projective(search_cache):
    return catalog.find_projective_plane_11()


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per criterion, then assert it."""

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
