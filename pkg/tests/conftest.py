import numpy as np
import pytest

_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_log(request):
    """Record one verdict line per acceptance criterion; printed in the terminal summary."""
    log = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(number: int, label: str, ok: bool, detail: str) -> None:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {label}: {detail}"
        log[(number, label)] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_ACCEPTANCE, {})
    if log:
        terminalreporter.section("acceptance criteria")
        for key in sorted(log):
            terminalreporter.write_line(log[key])
