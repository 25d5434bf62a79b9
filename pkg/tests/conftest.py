import pytest
from hypothesis import settings, strategies as st

from porcupine.catalog import infinite_emitter, toeplitz
from porcupine.graph import OMEGA, Bundle, Graph
from porcupine.ideal import make_admissible_pair

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def T():
    return toeplitz()


@pytest.fixture
def X():
    return infinite_emitter()


@pytest.fixture
def toeplitz_pair(T):
    return make_admissible_pair(T, {"v"})


@pytest.fixture
def ie_pair(X):
    return make_admissible_pair(X, {"v"}, {"w"})


@st.composite
def graphs(draw, max_vertices=5, max_bundles=8, omega=True, max_count=2):
    n = draw(st.integers(1, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    m = draw(st.integers(0, max_bundles))
    omega_at = draw(st.one_of(st.none(), st.integers(0, max(m - 1, 0)))) if omega and m else None
    bundles = []
    for i in range(m):
        src = draw(st.sampled_from(vs))
        dst = draw(st.sampled_from(vs))
        count = OMEGA if i == omega_at else draw(st.integers(1, max_count))
        bundles.append(Bundle(f"b{i}", src, dst, count))
    return Graph(tuple(vs), tuple(bundles))
