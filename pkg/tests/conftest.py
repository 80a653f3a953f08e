import pytest

from helpers import arch_document, make_spec


@pytest.fixture(scope="session")
def table1_spec():
    """The 50x50 / 30-qubit case-study hardware setup used across tests."""
    return make_spec()


@pytest.fixture()
def table1_document():
    return arch_document()


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\n[acceptance] {name}: {outcome}", flush=True)
