from __future__ import annotations

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import free_reduce, library_words
from strategies import elements, letters, same_n_pair
from twistlab.core_algebra import (
    AlgebraError,
    ResourceBudgetExceeded,
    SeriesElement,
    commutator,
    commutator_generators,
    embed_leg,
    format_rational,
    from_words,
    get_term_budget,
    normal_form,
    parse_series,
    rational,
    serialize_series,
    set_term_budget,
    straighten,
    tensor,
)
from twistlab.hopf import log_series

G = SeriesElement.generator


def test_rational_lowest_terms():
    assert format_rational(rational("6/4")) == "3/2"
    assert format_rational(rational(0)) == "0/1"
    assert format_rational(rational("-3/6")) == "-1/2"
    with pytest.raises(AlgebraError):
        rational("1/0")


def test_generator_bounds():
    with pytest.raises(AlgebraError):
        G(3, 0, 1)
    with pytest.raises(AlgebraError):
        G(3, 1, 4)


@pytest.mark.parametrize(
    "a, b, expect",
    [
        ((1, 2), (2, 1), {(1, 1): 1, (2, 2): -1}),
        ((1, 2), (3, 4), {}),
        ((1, 4), (2, 1), {(2, 4): -1}),
    ],
)
def test_commutator_generators(a, b, expect):
    n = 4
    got = commutator_generators(a, b, n)
    want = SeriesElement.zero(n, 1)
    for (i, j), c in expect.items():
        want = want + G(n, i, j, coeff=c)
    assert got == want


def test_already_ordered_product():
    x = G(2, 2, 1) * G(2, 1, 2)
    assert library_words(x) == {((2, 1), (1, 2)): 1}


def test_one_straightening_step():
    x = G(2, 1, 2) * G(2, 2, 1)
    assert library_words(x) == {((2, 1), (1, 2)): 1, ((1, 1),): 1, ((2, 2),): -1}
    assert library_words(x) == free_reduce(2, {((1, 2), (2, 1)): 1})


def test_truncated_overflow():
    x = G(2, 1, 2, order=1, t=1)
    assert (x * x).is_zero()


def test_identity_central_and_sl2_relation():
    n = 3
    ident = SeriesElement.diagonal(n, {i: 1 for i in range(1, n + 1)})
    assert commutator(ident, G(n, 1, 3)).is_zero()
    H = SeriesElement.diagonal(2, {1: mpq(1, 2), 2: mpq(-1, 2)})
    assert commutator(H, G(2, 1, 2)) == G(2, 1, 2)


def test_log_bracket_matches_nilpotent_adjoint():
    # [ln(1 + t E14), E21] = -t E24 (1 + t E14)^{-1}; E24 and E14 commute
    n, N = 4, 5
    sig = log_series(SeriesElement.one(n, 1, N) + G(n, 1, 4, N, t=1))
    got = commutator(sig, G(n, 2, 1, N))
    want = SeriesElement.zero(n, 1, N)
    power = SeriesElement.one(n, 1, N)
    for k in range(N):
        want = want + (G(n, 2, 4, N) * power).scale(-((-1) ** k), k + 1)
        power = power * G(n, 1, 4, N)
    assert got == want


def test_embed_leg():
    n = 2
    x = tensor(G(n, 1, 2), G(n, 2, 1))
    one = SeriesElement.one(n)
    assert embed_leg(x, "13") == tensor(G(n, 1, 2), one, G(n, 2, 1))
    assert embed_leg(tensor(one, one), "23") == SeriesElement.one(n, 3)
    H = SeriesElement.diagonal(n, {1: mpq(1, 2), 2: mpq(-1, 2)})
    E = G(n, 1, 2)
    y = tensor(H, E) + tensor(E, H)
    assert embed_leg(y, "12") == tensor(H, E, one) + tensor(E, H, one)


def test_rank_and_order_mismatch():
    with pytest.raises(AlgebraError):
        G(2, 1, 2) * tensor(G(2, 1, 2), G(2, 1, 2))
    with pytest.raises(AlgebraError):
        G(2, 1, 2, order=2) * G(2, 1, 2, order=3)


def test_json_layout():
    x = G(2, 1, 2, t=1, coeff="2/3") + SeriesElement.one(2)
    assert serialize_series(x) == (
        '{"rank":1,"n":2,"order":3,"terms":['
        '{"t":0,"legs":[[]],"coeff":"1/1"},'
        '{"t":1,"legs":[[[1,2,1]]],"coeff":"2/3"}]}'
    )


def test_term_budget():
    old = get_term_budget()
    set_term_budget(10)
    try:
        x = from_words(4, 1, 0, [(0, [[(i, j)]], 1) for i in range(1, 5) for j in range(1, 5)])
        with pytest.raises(ResourceBudgetExceeded):
            x * x * x
    finally:
        set_term_budget(old)


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=100)
@given(same_n_pair(count=3, order=2))
def test_associativity(triple):
    x, y, z = triple
    assert (x * y) * z == x * (y * z)


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), letters(n, 4))))
def test_straighten_matches_free_reduction(case):
    n, word = case
    alg = SeriesElement.one(n).algebra
    got = {tuple(alg.gens[g] for g in w): c for w, c in straighten(n, word).items()}
    assert got == free_reduce(n, {tuple(word): 1})


@settings(max_examples=60)
@given(elements(rank=2))
def test_serialize_round_trip(x):
    text = serialize_series(x)
    back = parse_series(text)
    assert back == x
    assert serialize_series(back) == text


@settings(max_examples=60)
@given(elements(rank=1))
def test_normal_form_idempotent(x):
    assert normal_form(x) == x
    assert normal_form(normal_form(x)) == normal_form(x)


@settings(max_examples=60)
@given(same_n_pair(count=2, order=3), st.integers(0, 2))
def test_truncation_coherence(pair, lower):
    x, y = pair
    assert (x.truncate(lower) * y.truncate(lower)) == (x * y).truncate(lower)


@settings(max_examples=40)
@given(same_n_pair(count=4, order=2, max_n=3))
def test_disjoint_legs_multiply_independently(quad):
    a, b, c, d = quad
    assert tensor(a, SeriesElement.one(a.n, 1, a.order)) * tensor(SeriesElement.one(a.n, 1, a.order), d) == tensor(a, d)
    assert tensor(a, b) * tensor(c, d) == tensor(a * c, b * d)
