from __future__ import annotations

import contextlib
import functools
from pathlib import Path

import pytest

from stabpart.generator import generate_polygon
from stabpart.geometry import build_arrangement, validate_polygon
from stabpart.rectio import read_rect

DATA = Path(__file__).parent / "data"

# fixed seed list for the generated corpus: 100 polygons with 6 to 12 vertices
CORPUS = [((6, 8, 10, 12)[i % 4], i) for i in range(100)]

_RESULTS: list[tuple[str, bool, str]] = []


@contextlib.contextmanager
def criterion(name: str):
    """Record one PASS/FAIL line for the acceptance summary."""
    detail = {"text": ""}
    try:
        yield detail
    except BaseException:
        _RESULTS.append((name, False, detail["text"]))
        raise
    _RESULTS.append((name, True, detail["text"]))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, text in _RESULTS:
        line = f"{'PASS' if ok else 'FAIL'} {name}"
        if text:
            line += f"  ({text})"
        terminalreporter.write_line(line)


@functools.lru_cache(maxsize=None)
def corpus_polygon(n: int, seed: int):
    return generate_polygon(n, seed)


@functools.lru_cache(maxsize=None)
def corpus_arrangement(n: int, seed: int):
    return build_arrangement(corpus_polygon(n, seed))


@pytest.fixture(scope="session")
def L6():
    return read_rect(DATA / "L6.rect")


@pytest.fixture(scope="session")
def S3():
    return read_rect(DATA / "S3.rect")


@pytest.fixture(scope="session")
def A_L6(L6):
    return build_arrangement(L6)


@pytest.fixture(scope="session")
def A_S3(S3):
    return build_arrangement(S3)


@pytest.fixture(scope="session")
def square():
    return validate_polygon([(0, 0), (3, 0), (3, 3), (0, 3)])


@pytest.fixture(scope="session")
def data_dir():
    return DATA
