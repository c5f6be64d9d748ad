import importlib
import math

import numpy as np
import pytest

from ionbell import _kernels, _pykernels
from ionbell.hilbert import FockCutoffs, PureState
from ionbell.operators import SystemParams
from ionbell.propagation import blue_support_ok, red_support_ok

try:
    from ionbell import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [pytest.param(_pykernels, id="python")]
BACKENDS.append(
    pytest.param(_ckernels, id="cython", marks=pytest.mark.skipif(_ckernels is None, reason="extension not built"))
)


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per kernel implementation."""
    monkeypatch.setattr(_kernels, "sideband_propagate", request.param.sideband_propagate)
    monkeypatch.setattr(_kernels, "apply_phases", request.param.apply_phases)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def red_params():
    return SystemParams.for_sideband("red", eta=0.1, g=10.0, nu=500.0, omega0=1e4)


@pytest.fixture
def blue_params():
    return SystemParams.for_sideband("blue", eta=0.1, g=10.0, nu=500.0, omega0=1e4)


def random_state(rng, cutoffs, support=None):
    """Random normalized state, optionally restricted to ``support(cutoffs, n, m, q)``."""
    vec = rng.normal(size=cutoffs.total_dim) + 1j * rng.normal(size=cutoffs.total_dim)
    if support is not None:
        for i in range(cutoffs.total_dim):
            if not support(cutoffs, *cutoffs.labels(i)):
                vec[i] = 0.0
    return PureState.from_vector(cutoffs, vec)


def random_red_state(rng, cutoffs):
    return random_state(rng, cutoffs, red_support_ok)


def random_blue_state(rng, cutoffs):
    return random_state(rng, cutoffs, blue_support_ok)


# acceptance reporting: one PASS/FAIL line per criterion in the terminal summary
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    label = marker.args[0]
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    prev = _CRITERIA.get(label, (True, ""))
    _CRITERIA[label] = (prev[0] and report.passed, detail or prev[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split()[0][2:])):
        ok, detail = _CRITERIA[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))
