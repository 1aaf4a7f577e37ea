import pytest

from casimir_bec import RB87, derive_quasi1d, lateral_coefficients
from casimir_bec.benchmarks import (
    benchmark_surface,
    benchmark_trap,
    near_surface_surface,
)


@pytest.fixture(scope="session")
def params():
    """Derived quasi-1D parameters of the reference scenario."""
    return derive_quasi1d(benchmark_trap(), RB87)


@pytest.fixture(scope="session")
def surface():
    return benchmark_surface()


@pytest.fixture(scope="session")
def pot(surface):
    return lateral_coefficients(surface, RB87)


@pytest.fixture(scope="session")
def q_1(surface):
    return surface.fundamentals[0].k_c / 2.0


@pytest.fixture(scope="session")
def near_surface():
    return near_surface_surface()
