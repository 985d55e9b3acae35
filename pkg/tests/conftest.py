import pytest

from orthocoll.files import builtin, fan_from_dict
from orthocoll.toric import m_resolve_fan, minimal_resolution


@pytest.fixture(scope="session")
def x_fan():
    return fan_from_dict(builtin("x_fan.json"))


@pytest.fixture(scope="session")
def z0_fan():
    return fan_from_dict(builtin("z0_fan.json"))


@pytest.fixture(scope="session")
def z0(x_fan, z0_fan):
    """Resolved model of the M-resolved cubic example with fixture names, and its blocks."""
    mr = m_resolve_fan(x_fan)
    assert mr.fan.rays == z0_fan.rays
    rename = dict(zip(mr.fan.names, z0_fan.names))
    from orthocoll.toric import MBlock

    blocks = [MBlock(b.cone, b.t, tuple(rename[r] for r in b.rays), b.cones) for b in mr.blocks]
    return minimal_resolution(z0_fan), blocks


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
