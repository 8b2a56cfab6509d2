import os

import pytest

from greenberg.fields import FiniteField, alg_build


@pytest.fixture(autouse=True, scope="session")
def _law_cache(tmp_path_factory):
    os.environ.setdefault("GREENBERG_CACHE", str(tmp_path_factory.mktemp("cache")))
    yield


@pytest.fixture(scope="session")
def F2():
    return FiniteField(2)


@pytest.fixture(scope="session")
def F3():
    return FiniteField(3)


@pytest.fixture(scope="session")
def F4():
    return FiniteField(2, (1, 1, 1))


@pytest.fixture(scope="session")
def dual2(F2):
    return alg_build("dual_numbers", F2, 2)
