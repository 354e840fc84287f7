import numpy as np
import pytest

from tcpmip.instances import example1, example2, example3

SQRT6 = np.sqrt(6.0)


@pytest.fixture
def ex1():
    return example1()


@pytest.fixture
def ex2():
    return example2()


@pytest.fixture
def ex3():
    return example3()


# -- acceptance report: one PASS/FAIL line per criterion ---------------------

_CRITERIA: dict[tuple[int, str], list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None and (rep.when == "call" or rep.failed):
        _CRITERIA.setdefault(tuple(mark.args), []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), oks in sorted(_CRITERIA.items()):
        verdict = "PASS" if all(oks) else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {num:>2}: {title}  [{sum(oks)}/{len(oks)} checks]")
