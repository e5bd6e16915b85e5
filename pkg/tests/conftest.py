import numpy as np
import pytest

from sidmetrics import backend


def pytest_runtest_logreport(report):
    # one visible PASS/FAIL line per acceptance criterion
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    print(f"\n[{status}] {name} ({report.duration:.2f}s)", flush=True)


@pytest.fixture(params=backend.available_backends())
def each_backend(request):
    """Run a test under every kernel backend, restoring the default after."""
    previous = backend.active_backend()
    backend.set_backend(request.param)
    yield request.param
    backend.set_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
