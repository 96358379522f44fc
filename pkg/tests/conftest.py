import random

import pytest
from hypothesis import strategies as st

from su2bundles.core import as_matrix, random_unimodular
from su2bundles.manifold import ManifoldPresentation
from su2bundles.verify import random_presentation
from su2bundles.wedge import Pi7Wedge

HYPERBOLIC = ((0, 1), (1, 0))


@pytest.fixture
def s4xs4():
    return ManifoldPresentation.from_gram(HYPERBOLIC, (0, 0))


@pytest.fixture
def k2odd():
    return ManifoldPresentation.from_gram(((1, 0), (0, 1)), (2, 2))


@st.composite
def wedges(draw, max_k=5):
    k = draw(st.integers(1, max_k))
    small = st.integers(-30, 30)
    w = draw(st.lists(small, min_size=k * (k - 1) // 2, max_size=k * (k - 1) // 2))
    s = draw(st.lists(small, min_size=k, max_size=k))
    t = draw(st.lists(st.integers(0, 11), min_size=k, max_size=k))
    return Pi7Wedge(k, tuple(w), tuple(s), tuple(t))


@st.composite
def square_matrices(draw, k):
    return as_matrix(draw(st.lists(st.lists(st.integers(-4, 4), min_size=k, max_size=k),
                                   min_size=k, max_size=k)))


@st.composite
def presentations(draw, ks=(2, 3, 4, 5)):
    k = draw(st.sampled_from(ks))
    odd = k % 2 == 1 or draw(st.booleans())
    return random_presentation(random.Random(draw(st.integers(0, 2**31))), k, odd)


def unimodular(k, seed, moves=10):
    return random_unimodular(k, seed, moves)
