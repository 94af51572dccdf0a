from __future__ import annotations

import json

import pytest
from gmpy2 import mpq

from twistlab.core_algebra import SeriesElement, tensor
from twistlab.hopf import exp_series, log_series
from twistlab.reports import PAPER_CLAIM, VerificationReport
from twistlab.twists import (
    TwistElement,
    b2_jordanian,
    corrupt_sign_flip,
    full_chain,
    h_perp,
    hat_cartan,
    identity_twist,
    link,
    make_plan,
    parabolic_twist,
    sigma,
)
from twistlab.verify import (
    Workspace,
    audit,
    b2_lemma_suite,
    carrier,
    carrier_check,
    classical_r,
    coassociativity_check,
    cocycle_check,
    composition_check,
    counit_check,
    cybe_check,
    primitive_defect,
    qybe_check,
    r_matrix,
    relations_suite,
)

G = SeriesElement.generator


def _H2(order=3):
    return SeriesElement.diagonal(2, {1: mpq(1, 2), 2: mpq(-1, 2)}, order)


def test_report_schema():
    r = cocycle_check(identity_twist(2))
    doc = json.loads(r.to_json())
    assert {"check", "n", "order", "status", "residual", "category"} <= set(doc)
    assert "ms" not in doc
    assert "ms" in json.loads(r.to_json(timing=True))
    assert r.passed and r.residual == []


def test_identity_twist_checks():
    F = identity_twist(3)
    assert cocycle_check(F).passed
    assert counit_check(F).passed
    R = r_matrix(F)
    assert R == SeriesElement.one(3, 2)
    assert qybe_check(R).passed
    assert classical_r(F).is_zero()


def test_jordanian_is_a_twist_to_t5():
    F = b2_jordanian(5)
    assert cocycle_check(F).passed
    assert counit_check(F).passed


def test_non_twist_fails_first_at_t2():
    # frozen by brute-force expansion: exp(t E12 (x) E21) violates the twist equation at t^2
    n, N = 2, 4
    X = tensor(G(n, 1, 2, N, t=1), G(n, 2, 1, N))
    F = TwistElement.from_series(exp_series(X))
    r = cocycle_check(F)
    assert not r.passed
    assert r.first_order == 2
    assert all(term["t"] >= 2 for term in r.residual)


def test_counit_counterexample():
    n = 2
    one = SeriesElement.one(n)
    F = TwistElement.from_series(tensor(one, one) + tensor(one, G(n, 1, 2)).scale(1, 1))
    assert not counit_check(F).passed


def test_jordanian_qybe_to_t3():
    assert qybe_check(r_matrix(b2_jordanian(3))).passed


def test_parabolic_qybe_sl4():
    assert qybe_check(r_matrix(parabolic_twist(make_plan(4), order=3))).passed


def test_classical_r_jordanian():
    F = b2_jordanian(2)
    H, E = _H2(0), G(2, 1, 2, 0)
    assert classical_r(F) == tensor(H, E) - tensor(E, H)
    assert cybe_check(classical_r(F)).passed


def test_classical_r_chain3():
    plan = make_plan(3)
    r = classical_r(full_chain(plan, order=2))
    H = hat_cartan(1, plan, 0)
    E13 = G(3, 1, 3, 0)
    ext = tensor(G(3, 1, 2, 0), G(3, 2, 3, 0))
    assert r == tensor(H, E13) - tensor(E13, H) + ext - ext.permute_legs((1, 0))
    assert cybe_check(r).passed


def test_classical_r_antisymmetric():
    r = classical_r(parabolic_twist(make_plan(5), order=1))
    assert r + r.permute_legs((1, 0)) == SeriesElement.zero(5, 2, 0)


def test_coassociativity_agrees_with_cocycle():
    plan = make_plan(3)
    good = full_chain(plan, order=2)
    bad = corrupt_sign_flip(good)
    assert coassociativity_check(good).passed and cocycle_check(good).passed
    assert not coassociativity_check(bad).passed and not cocycle_check(bad).passed


def test_composition_both_ways():
    plan = make_plan(4)
    reports = composition_check(link(1, plan, order=3), link(2, plan, order=3))
    assert [r.passed for r in reports] == [True, True, True]


def test_carrier_chain4():
    c = carrier(full_chain(make_plan(4)))
    assert len(c.cartan_span) == 2
    assert len(c.positive_roots) == 6
    assert c.negative_roots == []
    assert not c.is_parabolic


def test_carrier_b2():
    c = carrier(b2_jordanian(2))
    assert c.positive_roots == [(1, 2)]
    assert c.cartan_span == ["(1/2·E1,1 - 1/2·E2,2)"]
    assert c.negative_roots == []


def test_carrier_parabolic_sl11():
    plan = make_plan(11)
    c = carrier(parabolic_twist(plan, order=1), plan)
    assert c.is_parabolic and c.matches_plan
    assert c.negative_roots == [(j + 1, j) for j in (1, 3, 5, 7, 9)]
    assert len(c.levi_blocks) == 5
    assert carrier_check(parabolic_twist(plan, order=1), plan).passed


def test_relations_sl4_defect():
    plan = make_plan(4)
    ws = Workspace(plan, None, 3)
    # the primitive defect of the chain-twisted E^_1 is -2 H_perp_1 (x) t E_24 exp(-sigma_14)
    want = tensor(h_perp(1, plan, 3), G(4, 2, 4, 3, t=1) * exp_series(-sigma(1, plan, order=3))).scale(-2)
    assert primitive_defect(ws.chain, ws.E(1)) == want
    names = {r.check: r.passed for r in relations_suite(plan, order=3)}
    assert all(names.values()), [k for k, v in names.items() if not v]


def test_relations_degenerate_n3():
    assert all(r.passed for r in relations_suite(make_plan(3), order=3))


def test_b2_lemma():
    assert all(r.passed for r in b2_lemma_suite(4))


def test_audit_trivial_and_sl4():
    assert all(r.passed for r in audit(2))
    rs = {r.check: r for r in audit(4)}
    assert not rs["(4k-property) as printed: 2H_{n-3,n-2}+Ĥ_{n-2}-Ĥ_{n-3} = 0"].passed
    assert rs["Ĥ1-Ĥ2 = 2H_{3,4}"].passed
    assert rs["Ĥ1-Ĥ2 = 2H_{3,4}"].category == PAPER_CLAIM


def test_report_line():
    r = VerificationReport("x", 2, 3, "fail", [{"t": 2}], stats={"first_order": 2})
    assert r.line() == "FAIL  x (first nonzero order t^2)"


@pytest.mark.parametrize("n", [3, 4])
def test_log_of_c_plus_d_is_defined(n):
    plan = make_plan(n)
    ws = Workspace(plan, None, 2)
    for s in range(1, plan.p + 1):
        w = log_series(ws.C(s) + ws.D(s))
        assert w.order == 2
