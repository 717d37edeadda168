import os

import pytest

from rkpairs.ffield import make_ctx

EXTENDED = os.environ.get("RKPAIRS_EXTENDED") == "1"

extended = pytest.mark.skipif(
    not EXTENDED, reason="extended replication sweep; set RKPAIRS_EXTENDED=1"
)


def pytest_collection_modifyitems(config, items):
    for item in items:
        if "extended" in item.keywords and not EXTENDED:
            item.add_marker(pytest.mark.skip(reason="set RKPAIRS_EXTENDED=1"))


@pytest.fixture(scope="session")
def ctx77():
    return make_ctx(7, 1, 7)


@pytest.fixture(scope="session")
def ctx57():
    return make_ctx(5, 1, 7)


@pytest.fixture(scope="session")
def ctx58():
    return make_ctx(5, 1, 8)


@pytest.fixture(scope="session")
def ctx137():
    return make_ctx(13, 1, 7)


@pytest.fixture(scope="session")
def ctx72():
    return make_ctx(7, 1, 2)


@pytest.fixture(scope="session")
def ctx34():
    return make_ctx(3, 1, 4)


@pytest.fixture(scope="session")
def witness_cache():
    """Shared witness results so the acceptance criteria reuse heavy scans."""
    return {}
