import numpy as np
import pytest
from hypothesis import settings

from fluordimer.atomic import DriveField, Geometry

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@pytest.fixture
def reference_geometry():
    return Geometry(0.04, np.pi / 2, np.pi / 4)


@pytest.fixture
def far_geometry():
    return Geometry(10.0, np.pi / 2, np.pi / 4)


@pytest.fixture
def drive():
    return DriveField(10.0, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_hermitian(rng, n=16):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


def random_density(rng, n=16):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    report = getattr(module, "REPORT", None)
    if report:
        terminalreporter.section("acceptance criteria")
        for key in sorted(report):
            terminalreporter.write_line(report[key])
