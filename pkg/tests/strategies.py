"""Hypothesis strategies for random algebra elements."""

from __future__ import annotations

from hypothesis import strategies as st

from twistlab.core_algebra import from_words


@st.composite
def letters(draw, n: int, max_len: int = 3):
    k = draw(st.integers(0, max_len))
    return [(draw(st.integers(1, n)), draw(st.integers(1, n))) for _ in range(k)]


@st.composite
def elements(draw, n: int | None = None, rank: int = 1, order: int = 2, max_terms: int = 3, max_len: int = 3):
    """Random elements built from unordered letter products (so straightening is exercised)."""
    if n is None:
        n = draw(st.integers(1, 5))
    items = []
    for _ in range(draw(st.integers(1, max_terms))):
        d = draw(st.integers(0, order))
        legs = [draw(letters(n, max_len)) for _ in range(rank)]
        c = draw(st.fractions(min_value=-5, max_value=5, max_denominator=6))
        items.append((d, legs, f"{c.numerator}/{c.denominator}"))
    return from_words(n, rank, order, items)


@st.composite
def same_n_pair(draw, count: int = 2, rank: int = 1, order: int = 2, max_n: int = 5):
    n = draw(st.integers(1, max_n))
    return [draw(elements(n, rank, order)) for _ in range(count)]
