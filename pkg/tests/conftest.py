import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def record_criterion(request):
    """Record one acceptance line; printed in the terminal summary."""
    lines = request.config.stash[_LINES]

    def record(number, description, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        lines.append(f"[{status}] criterion {number}: {description} -- {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash[_LINES]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
