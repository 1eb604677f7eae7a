import numpy as np
import pytest
from hypothesis import strategies as st

from ppas.surface import SurfaceConfig, TorusPoint

unit = st.floats(min_value=0.0, max_value=1.0, exclude_max=True, allow_nan=False)
torus_points = st.tuples(unit, unit, unit, unit).map(TorusPoint.from_vector)


@pytest.fixture(scope="session")
def cfg():
    return SurfaceConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
