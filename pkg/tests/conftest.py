from pathlib import Path

import pytest

from slnc.network import Network, parse_network

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_network(name: str) -> Network:
    return parse_network((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def butterfly() -> Network:
    return load_network("butterfly.net")


@pytest.fixture(scope="session")
def butterfly_gf2() -> Network:
    return load_network("butterfly_gf2.net")


@pytest.fixture(scope="session")
def parallel2_gf2() -> Network:
    return load_network("parallel2_gf2.net")


@pytest.fixture(scope="session")
def parallel3_gf2() -> Network:
    return load_network("parallel3_gf2.net")


@pytest.fixture(scope="session")
def parallel3_gf5() -> Network:
    return load_network("parallel3_gf5.net")
