from functools import lru_cache

import pytest

from iwahori.affine import AffineWeylGroup
from iwahori.qbg import QuantumBruhatGraph
from iwahori.rootsys import build_root_system
from iwahori.weyl import WeylGroup

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)


@lru_cache(maxsize=None)
def group(name: str, lattice: str = "sc") -> WeylGroup:
    return WeylGroup(build_root_system(name, lattice))


@lru_cache(maxsize=None)
def affine(name: str, lattice: str = "sc") -> AffineWeylGroup:
    return AffineWeylGroup(group(name, lattice))


@lru_cache(maxsize=None)
def graph(name: str) -> QuantumBruhatGraph:
    return QuantumBruhatGraph(group(name))


@pytest.fixture
def A2():
    return affine("A2")


@pytest.fixture
def C2():
    return affine("C2")
