import json
import os
from functools import lru_cache
from pathlib import Path

import pytest

from shardlat.lattice import weyl_poset

DATA = Path(__file__).parent / "data"

STRETCH = os.environ.get("SHARDLAT_STRETCH", "") not in ("", "0")


@lru_cache(maxsize=None)
def poset(kind, n):
    """Shared, read-only shard intersection orders."""
    return weyl_poset(kind, n)


def load_json(name):
    return json.loads((DATA / name).read_text())


def pytest_addoption(parser):
    parser.addoption("--stretch", action="store_true", default=False,
                     help="also run the stretch-scale acceptance checks")


def pytest_configure(config):
    global STRETCH
    if config.getoption("--stretch"):
        STRETCH = True
        os.environ["SHARDLAT_STRETCH"] = "1"


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion_report():
    def report(number, ok, detail):
        ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    return report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
