"""Shared hypothesis strategies for randomized fact and rule inputs."""

from fractions import Fraction

from hypothesis import strategies as st

from atkit.facts import Fact, FactSet, Ident, is_identifier

IDENT_CHARS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_:.-"

identifiers = st.text(IDENT_CHARS, min_size=1, max_size=12).filter(is_identifier)

texts = st.text(max_size=20)

integers = st.integers(min_value=-10**6, max_value=10**6)

rationals = st.builds(
    Fraction,
    st.integers(min_value=-1000, max_value=1000),
    st.integers(min_value=1, max_value=1000),
)

objects = st.one_of(
    identifiers.map(Ident),
    texts,
    integers,
    rationals,
)

fact_sets = st.builds(
    FactSet,
    st.lists(st.builds(Fact, identifiers, identifiers, objects), max_size=30),
)
