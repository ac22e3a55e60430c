import os

import pytest
from hypothesis import HealthCheck, settings

from hurwitz_engine.services.lattice_cache import reset_lattice_cache
from hurwitz_engine.services.real_orbit_group import build_group, preset_datum
from hurwitz_engine.services.subgroup_lattice import enumerate_lattice
from hurwitz_engine.services.wreath_core import GroupSpec, WreathGroup
from hurwitz_engine.tools.group_tools import reset_group_memo

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile(
    "acceptance",
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


def wreath(m, p, n):
    return WreathGroup(GroupSpec(m, p, n))


@pytest.fixture(scope="session")
def s3():
    return wreath(1, 1, 3)


@pytest.fixture(scope="session")
def s4():
    return wreath(1, 1, 4)


@pytest.fixture(scope="session")
def g212():
    return wreath(2, 1, 2)


@pytest.fixture(scope="session")
def d3():
    return wreath(2, 2, 3)


@pytest.fixture(scope="session")
def g312():
    return wreath(3, 1, 2)


@pytest.fixture(scope="session")
def g333():
    return wreath(3, 3, 3)


@pytest.fixture(scope="session")
def g412():
    return wreath(4, 1, 2)


@pytest.fixture(scope="session")
def g213():
    return wreath(2, 1, 3)


@pytest.fixture(scope="session")
def g443():
    return wreath(4, 4, 3)


@pytest.fixture(scope="session")
def g224():
    return wreath(2, 2, 4)


@pytest.fixture(scope="session")
def a2():
    return build_group(preset_datum("A2"))


@pytest.fixture(scope="session")
def a3():
    return build_group(preset_datum("A3"))


@pytest.fixture(scope="session")
def b2():
    return build_group(preset_datum("B2"))


@pytest.fixture(scope="session")
def b3():
    return build_group(preset_datum("B3"))


@pytest.fixture(scope="session")
def lattices():
    """Lattice per group, built on first use."""
    built = {}

    def get(group):
        if id(group) not in built:
            built[id(group)] = enumerate_lattice(group)
        return built[id(group)]

    return get


@pytest.fixture
def isolated_env(tmp_path, monkeypatch):
    """Fresh memo tables and a throwaway cache directory."""
    monkeypatch.setenv("HURWITZ_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.delenv("HURWITZ_CONFIG", raising=False)
    monkeypatch.delenv("HURWITZ_CACHE_DISABLED", raising=False)
    reset_lattice_cache()
    reset_group_memo()
    yield tmp_path
    reset_lattice_cache()
    reset_group_memo()
