import pytest
from hypothesis import settings

# exact-arithmetic oracles are slow but deterministic; timing limits only add flakiness
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")

# filled in by test_acceptance.record(); printed after the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture
def acceptance():
    return ACCEPTANCE
