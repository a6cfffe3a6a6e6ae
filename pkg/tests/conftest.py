import warnings

import numpy as np
import pytest

from petridetect.fixtures import FIXTURES, load_fixture, random_valid_corpus

VALID_FIXTURES = ("fig1", "fig4", "fig7", "branch", "xm_gap", "loop_gap")
CORPUS_SEED = 20240601

_criteria: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    if call.when != "call":
        return
    for marker in item.iter_markers("criterion"):
        _criteria.setdefault(marker.args[0], []).append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok = all(_criteria[n])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}")


@pytest.fixture(scope="session")
def fig1():
    return load_fixture("fig1")


@pytest.fixture(scope="session")
def fig4():
    return load_fixture("fig4")


@pytest.fixture(scope="session")
def named_valid():
    return {name: load_fixture(name) for name in VALID_FIXTURES}


@pytest.fixture(scope="session")
def named_all():
    return {name: load_fixture(name) for name in FIXTURES}


@pytest.fixture(scope="session")
def corpus():
    """120 random valid nets, fixed seed."""
    return random_valid_corpus(CORPUS_SEED, 120)


@pytest.fixture(autouse=True)
def _quiet_vacuous_warnings():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="BRG has no cycles")
        yield


def rng(seed):
    return np.random.default_rng(seed)
