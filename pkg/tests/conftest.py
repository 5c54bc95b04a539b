import sys

import numpy as np
import pytest

from becbell.node import NodeParams, build_linear_model, derive_node


@pytest.fixture(scope="session")
def ref_node():
    return derive_node(NodeParams())


@pytest.fixture(scope="session")
def ref_model(ref_node):
    return build_linear_model(ref_node)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(acceptance.LINES, key=int):
        terminalreporter.write_line(acceptance.LINES[key])
