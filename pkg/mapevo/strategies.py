"""Hypothesis strategies shared by the app test suites."""
from fractions import Fraction

from hypothesis import strategies as st

from measures.laws import MappingLaw
from transforms.transformation import Transformation


@st.composite
def transformations(draw, n):
    images = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return Transformation(tuple(images))


@st.composite
def mapping_laws(draw, max_points=6, max_generators=3, max_weight=9):
    """Random laws on |V| <= max_points with up to max_generators support points."""
    n = draw(st.integers(1, max_points))
    maps = draw(st.lists(transformations(n), min_size=1, max_size=max_generators, unique=True))
    raw = draw(st.lists(st.integers(1, max_weight), min_size=len(maps), max_size=len(maps)))
    total = sum(raw)
    return MappingLaw({f: Fraction(w, total) for f, w in zip(maps, raw)})


@st.composite
def rational_weights(draw, size, max_weight=9, allow_zero=False):
    """`size` nonnegative Fractions summing to 1."""
    low = 0 if allow_zero else 1
    raw = draw(st.lists(st.integers(low, max_weight), min_size=size, max_size=size)
               .filter(lambda ws: sum(ws) > 0))
    total = sum(raw)
    return [Fraction(w, total) for w in raw]
