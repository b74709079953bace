from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from polysu11.algebra import AlgebraSpec
from polysu11.oscillator import OscillatorParams, cubic_algebra_spec

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

# coefficient choices for the p = 1, 2, 3 families used across the suite
ALPHAS = {1: (1.0,), 2: (1.0, 0.5), 3: (1.0, 0.5, 0.25)}
KS = (0.6, 7.0 / 8.0, 1.5)
GAMMAS = (0.1, 0.25, 0.4)


def make_spec(p: int, k: float) -> AlgebraSpec:
    return AlgebraSpec(p, ALPHAS[p], k)


@pytest.fixture
def linear_k1():
    return AlgebraSpec.linear(1.0)


@pytest.fixture
def cubic_quarter():
    return cubic_algebra_spec(OscillatorParams.g_zero(0.25))


_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_acceptance(criterion: int, passed: bool, detail: str):
    line = f"{'PASS' if passed else 'FAIL'} criterion {criterion}: {detail}"
    _ACCEPTANCE[criterion] = (passed, line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[criterion][1])
