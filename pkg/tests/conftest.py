import pytest
from hypothesis import HealthCheck, settings

from cdglab.scalars import QQ, FieldSpec

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F5 = FieldSpec(5)


@pytest.fixture(params=[QQ, F5], ids=["Q", "F5"])
def field(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = [mod.RESULTS[n] for n in sorted(mod.RESULTS)] if mod else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
