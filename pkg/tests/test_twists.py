from __future__ import annotations

import pytest
from gmpy2 import mpq

from oracles import (
    GAMMA_11,
    H_PERP_11,
    HAT_CARTAN_11,
    PSI_11,
    diag_element,
    printed_external,
    printed_sigma,
    sigma_table_entry,
)
from twistlab.core_algebra import AlgebraError, SeriesElement, commutator
from twistlab.rep import fundamental
from twistlab.twists import (
    BUILDERS,
    ParamSet,
    TwistElement,
    b2_jordanian,
    build_twist,
    chi,
    external_coordinate,
    full_chain,
    h_perp,
    hat_cartan,
    identity_twist,
    jordanian,
    make_plan,
    parabolic_twist,
    sigma,
)

N11, ORDER = 11, 3


def test_chi_and_plan_small():
    assert [chi(4, l) for l in (1, 2)] == [3, 2]
    p3 = make_plan(3)
    assert (p3.m, p3.p) == (1, 1)
    assert make_plan(2).p == 0


def test_plan_sl11():
    plan = make_plan(N11)
    assert (plan.m, plan.p) == (5, 5)
    assert set(plan.psi) == PSI_11
    assert set(plan.gamma) == GAMMA_11


def test_hat_cartan_sl11():
    plan = make_plan(N11)
    for l, (ident, coeffs) in HAT_CARTAN_11.items():
        assert hat_cartan(l, plan, ORDER) == diag_element(N11, ident, coeffs), l


def test_h_perp_sl11():
    plan = make_plan(N11)
    for s, (ident, coeffs) in H_PERP_11.items():
        assert h_perp(s, plan, ORDER) == diag_element(N11, ident, coeffs), s


def test_external_coordinates_sl11():
    plan = make_plan(N11)
    for s in range(1, 6):
        assert external_coordinate(s, plan, order=ORDER) == printed_external(s), s


def test_sigma_table_sl11():
    plan = make_plan(N11)
    N = 3
    Es = {s: external_coordinate(s, plan, order=N) for s in range(1, 6)}
    for l in range(1, 6):
        sg = sigma(l, plan, order=N)
        assert sg == printed_sigma(l, N)
        for s in range(1, 6):
            got = commutator(sg, Es[s])
            want = sigma_table_entry(l, s, N)
            if want is None:
                assert got.is_zero(), (l, s)
            else:
                assert got == want, (l, s)


def test_rho_hat_cartan_sl4():
    M = fundamental(hat_cartan(1, make_plan(4), 1), 4)
    assert M.entries() == [(0, 0, mpq(1, 4)), (1, 1, mpq(1, 4)), (2, 2, mpq(1, 4)), (3, 3, mpq(-3, 4))]


def test_chain_display_sl4():
    F = full_chain(make_plan(4))
    assert F.factor_names() == ["link:2", "link:1"]
    assert F.describe() == (
        "[link:2] exp(Ĥ2⊗σ2,3) · [link:1] exp(t·E1,2⊗E2,4·exp(-σ1,4) + t·E1,3⊗E3,4·exp(-σ1,4))"
        "·exp(Ĥ1⊗σ1,4)"
    )


def test_parabolic_structure_sl11():
    names = parabolic_twist(make_plan(N11), order=1).factor_names()
    assert len(names) == 11
    assert sum(x.startswith("quasi-jordanian") for x in names) == 5
    assert names.count("rotation") == 1
    assert sum(x.startswith("link") for x in names) == 5


def test_chain_n2_is_jordanian():
    assert build_twist("chain", 2).element == b2_jordanian(n=2).element


def test_negative_t_power_rejected():
    with pytest.raises(AlgebraError):
        SeriesElement.generator(3, 1, 2, t=-1)


def test_identity_twist():
    assert identity_twist(3).element == SeriesElement.one(3, 2)


def test_jordanian_rejects_bad_pair():
    H = SeriesElement.diagonal(2, {1: 1, 2: -1})
    E = SeriesElement.generator(2, 1, 2, t=1)
    with pytest.raises(AlgebraError):
        jordanian(H, E)
    Hh = SeriesElement.diagonal(2, {1: mpq(1, 2), 2: mpq(-1, 2)})
    with pytest.raises(AlgebraError):
        jordanian(Hh, SeriesElement.generator(2, 1, 2))


def test_sl4_variants_need_n4():
    with pytest.raises(AlgebraError):
        build_twist("sl4-p1", 5)
    with pytest.raises(AlgebraError):
        build_twist("nope", 3)


@pytest.mark.parametrize("kind", sorted(BUILDERS))
def test_twist_json_round_trip(kind):
    n = 4
    F = build_twist(kind, n, order=2)
    text = F.to_json()
    back = TwistElement.from_json(text)
    assert back.element == F.element
    assert back.to_json() == text
    assert back.factor_names() == F.factor_names()


def test_params_change_twist():
    plan = make_plan(4)
    a = full_chain(plan, ParamSet.build(plan, ["2", "1/3"], ["1"]), 2)
    assert a.element != full_chain(plan, order=2).element
    with pytest.raises(AlgebraError):
        ParamSet.build(plan, ["0", "1"], ["1"])
