import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

LONG = os.environ.get("ETCENSUS_LONG", "").strip() not in ("", "0")


def pytest_collection_modifyitems(config, items):
    if LONG:
        return
    skip = pytest.mark.skip(reason="long run; set ETCENSUS_LONG=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def catalogue():
    from etcensus.transcat import shipped_catalogue

    return shipped_catalogue()


@pytest.fixture(scope="session")
def worthy_cache():
    return {}


@pytest.fixture(scope="session")
def bipartite_upto16(catalogue, worthy_cache):
    """Bipartite census records for n = 1..16 and the time it took."""
    from etcensus.census import bipartite_census

    t0 = time.time()
    out = {n: bipartite_census(n, catalogue, worthy_cache=worthy_cache) for n in range(1, 17)}
    return out, time.time() - t0


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])
