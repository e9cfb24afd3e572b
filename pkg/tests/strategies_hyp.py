"""Hypothesis generators shared by the property tests."""

from hypothesis import strategies as st

from energygames.oracle import random_game


@st.composite
def small_games(draw, max_v=3, d=2, wmax=1, max_out=2):
    nv = draw(st.integers(1, max_v))
    seed = draw(st.integers(0, 10_000))
    return random_game(nv, d, wmax, seed=seed, max_out=max_out)


vectors2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
nonzero2 = vectors2.filter(any)
