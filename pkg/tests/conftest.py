import pytest
from hypothesis import HealthCheck, settings

from mesoc._pava import warmup

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session", autouse=True)
def warm_kernel():
    # first kernel call may JIT-compile; keep that out of timed tests
    warmup()
