import pytest
from hypothesis import settings, HealthCheck

from energygames.corpus import fig1, fig3

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def g1():
    return fig1()


@pytest.fixture
def g3():
    return fig3()
