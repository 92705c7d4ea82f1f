import math

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from magnetophoton.params import ModelParams

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def bench():
    """kappa1=1, kappa2=2, eB=0.5, m=1 with the light-cone momentum set so that omega=0.5."""
    return ModelParams(kappa1=1.0, kappa2=2.0, eB=0.5, m=1.0, epsilon=0.01, ng=1.0)


@pytest.fixture
def bench_free_ng():
    return ModelParams(kappa1=1.0, kappa2=2.0, eB=0.5, m=1.0, epsilon=1e-4)


@st.composite
def model_params(draw, eps_min=1e-6, eps_max=0.05, landau=True):
    k1 = draw(st.floats(0.5, 2.0))
    ratio = draw(st.floats(1.5, 5.0))
    eB = draw(st.floats(0.01, 5.0))
    m = draw(st.floats(0.5, 5.0))
    eps = 10 ** draw(st.floats(math.log10(eps_min), math.log10(eps_max)))
    N0 = draw(st.integers(0, 3)) if landau else 0
    return ModelParams(kappa1=k1, kappa2=k1 * ratio, eB=eB, m=m, epsilon=eps, N0=N0)


def off_resonance(p, margin=1e-3):
    return all(abs(p.omega - k) > margin * k for k in p.kappas)
