import pytest

# criterion number -> (title, passed); filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split(".")[0]), k)):
        title, ok = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def record():
    def _record(key, title, ok):
        ACCEPTANCE[key] = (title, bool(ok))
        print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {title}")
        return ok

    return _record
