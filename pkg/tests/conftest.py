import pytest

from besicovitch.data import load_table, load_tags


@pytest.fixture(scope="session")
def table():
    return load_table()


@pytest.fixture(scope="session")
def tags():
    return load_tags()


def trial_division_is_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
