import pytest

# criterion id -> (status, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda c: int(c.rstrip("abc"))):
        status, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {status}  {detail}")


@pytest.fixture
def record():
    def _record(criterion: str, ok, detail: str) -> None:
        status = ok if isinstance(ok, str) else ("PASS" if ok else "FAIL")
        ACCEPTANCE[criterion] = (status, detail)
        print(f"criterion {criterion}: {status}  {detail}")

    return _record
