import pytest

from henon_escape import make_map

ACCEPTANCE = {}


@pytest.fixture
def exp_map():
    """F(z, w) = (2w + e^{-z}, z)."""
    return make_map(2.0, [(1.0, 1.0)])


@pytest.fixture
def linear_map():
    return make_map(2.0, [])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split(".")[0]), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"AC{key:<6} {'PASS' if ok else 'FAIL'}  {detail}")
