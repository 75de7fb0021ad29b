"""Shared fixtures: session-cached expansions so the suite stays fast."""

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def g2_expansion():
    from mahlercf.contfrac import expand_family

    return expand_family(2, "G", 40)


@pytest.fixture(scope="session")
def g3_expansion():
    from mahlercf.contfrac import expand_family

    return expand_family(3, "G", 40)


@pytest.fixture(scope="session")
def betas_d2():
    from mahlercf.structure import beta_sequence

    return beta_sequence(2, 40)


@pytest.fixture(scope="session")
def betas_d3():
    from mahlercf.structure import beta_sequence

    return beta_sequence(3, 40)
