import pytest

from toricquiver.builtin import example_fan


@pytest.fixture(scope="session")
def p1():
    return example_fan("p1")


@pytest.fixture(scope="session")
def p2():
    return example_fan("p2")


@pytest.fixture(scope="session")
def fan1():
    return example_fan("fan1")


@pytest.fixture(scope="session")
def c2():
    return example_fan("cn:2")


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance verdict; the lines are printed in the terminal summary."""

    def record(number, title, ok, detail=""):
        ACCEPTANCE_LINES.append((number, "PASS" if ok else "FAIL", title, detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, verdict, title, detail in sorted(ACCEPTANCE_LINES):
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"[{verdict}] {number:>2}. {title}{suffix}")
