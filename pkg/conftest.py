# this file tells pytest what to ignore and holds the shared solutions
import pytest

collect_ignore_glob = ["examples/*"]


@pytest.fixture(scope="session")
def hm_solution():
    """Hastings-McLeod solution at the default resolution, uncached"""
    from airy2_cli.painleve2 import solve_hastings_mcleod

    return solve_hastings_mcleod()


@pytest.fixture(scope="session")
def profile(hm_solution):
    from airy2_cli.tw_core import build_profile

    return build_profile(hm_solution)


@pytest.fixture(scope="session")
def utable(hm_solution):
    from airy2_cli.tw_core import build_u_table

    return build_u_table(hm_solution)


@pytest.fixture(scope="session")
def moment_set(profile):
    from airy2_cli.tw_core import moments

    return moments(profile)


@pytest.fixture()
def cache_dir(tmp_path, monkeypatch):
    """Point the on-disk cache at a per-test directory"""
    monkeypatch.setenv("AIRY2_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"
