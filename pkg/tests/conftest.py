import re
from pathlib import Path

import pytest

from hadsimplex import normalize_last_column, paley_I, sylvester

DATA = Path(__file__).parent / "data"
ORDER16_DIR = DATA / "order16"


def hadamard_of_order(m):
    if m & (m - 1) == 0:
        return sylvester(m.bit_length() - 1)
    return paley_I(m - 1)


@pytest.fixture(scope="session")
def normalized():
    cache = {}

    def get(m):
        if m not in cache:
            cache[m] = normalize_last_column(hadamard_of_order(m))
        return cache[m]

    return get


_acceptance = {}
_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        m = _CRITERION.match(name)
        key = int(m.group(1)) if m else name
        _acceptance.setdefault(key, []).append((name, report.outcome == "passed"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance, key=str):
        cases = _acceptance[key]
        failed = [name for name, ok in cases if not ok]
        label = f"criterion {key}" if isinstance(key, int) else key
        status = "FAIL" if failed else "PASS"
        line = f"{status}  {label} ({len(cases) - len(failed)}/{len(cases)} cases)"
        if failed:
            line += ": " + ", ".join(failed)
        terminalreporter.write_line(line)
