import itertools

import pytest


def all_strings(max_len):
    """Every bit string of standard length <= max_len, shortest first."""
    for n in range(max_len + 1):
        for bits in itertools.product("01", repeat=n):
            yield "".join(bits)


def brute_klen(k, s, marked="1"):
    return sum(k if b == marked else 1 for b in s)


def brute_level(k, n, marked="1"):
    # a string of k-length n has standard length <= n
    return sorted(s for s in all_strings(n) if brute_klen(k, s, marked) == n)


@pytest.fixture
def level_oracle():
    return brute_level


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
