import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cmtorsion.classnum import class_number_sweep  # noqa: E402

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def table_2e6():
    """h(-l) for every qualifying l <= 2*10^6 + 1, enough for degrees up to 10^6."""
    return class_number_sweep(2 * 10**6 + 1)


@pytest.fixture(scope="session")
def table_1e5(table_2e6):
    return table_2e6.restrict(10**5)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("CMTORSION_CACHE", str(tmp_path / "cache"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {msg}")
