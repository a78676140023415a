import pytest

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")


@pytest.fixture(scope="session")
def amps_cache():
    from squeezejc import amplitudes, params_from_means

    cache = {}

    def get(n_c, n_s):
        key = (float(n_c), float(n_s))
        if key not in cache:
            cache[key] = amplitudes(params_from_means(n_c, n_s))
        return cache[key]

    return get
