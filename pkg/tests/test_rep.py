from __future__ import annotations

import json

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import same_n_pair
from twistlab.core_algebra import AlgebraError, SeriesElement, tensor
from twistlab.rep import (
    CAVEAT,
    SparseMatrix,
    dump_matrix,
    exp_nilpotent,
    fundamental,
    inverse_unipotent,
    log_unipotent,
    rep_cocycle_check,
    rep_qybe_check,
    rep_twist,
)
from twistlab.twists import (
    b2_jordanian,
    build_twist,
    corrupt_sign_flip,
    full_chain,
    identity_twist,
    make_plan,
    parabolic_twist,
    sigma,
)
from twistlab.verify import cocycle_check


def test_sparse_basics():
    A = SparseMatrix.from_entries(2, [(0, 1, 1), (1, 1, 0)])
    assert A.nnz == 1
    assert (A @ A).is_zero()
    assert A + A == A.scale(2)
    assert (A - A).is_zero()
    K = SparseMatrix.identity(2).kron(A)
    assert K.dim == 4 and K.entries() == [(0, 1, 1), (2, 3, 1)]


def test_permute_legs_is_a_swap():
    A = SparseMatrix.unit(2, 0, 1)
    B = SparseMatrix.unit(2, 1, 1)
    assert A.kron(B).permute_legs(2, (1, 0)) == B.kron(A)


def test_exp_log_inverse_unipotent():
    N = SparseMatrix.from_entries(3, [(0, 1, 2), (1, 2, "1/3")])
    U = exp_nilpotent(N)
    assert log_unipotent(U) == N
    assert U @ inverse_unipotent(U) == SparseMatrix.identity(3)
    with pytest.raises(AlgebraError):
        exp_nilpotent(SparseMatrix.identity(2))


def test_rho_generator():
    assert fundamental(SeriesElement.generator(2, 1, 2), 2).entries() == [(0, 1, 1)]


def test_rho_sigma_terminates():
    M = fundamental(sigma(1, make_plan(4), order=3), 4, 1)
    assert M.entries() == [(0, 3, mpq(1))]


def test_identity_and_jordanian_images():
    assert rep_twist(identity_twist(3)) == SparseMatrix.identity(9)
    U = rep_twist(b2_jordanian(3), 2, 1)
    Y = U - SparseMatrix.identity(4)
    assert not Y.is_zero() and (Y @ Y).is_zero()


@settings(max_examples=100)
@given(same_n_pair(count=2, order=2), st.sampled_from(["1", "1/2", "-3"]))
def test_rho_is_a_homomorphism(pair, t):
    x, y = pair
    # the truncated product drops t-degrees above the order, so compare at full degree
    N = x.order * 2
    x, y = x.with_order(N), y.with_order(N)
    assert fundamental(x * y, x.n, t) == fundamental(x, x.n, t) @ fundamental(y, y.n, t)


@settings(max_examples=30)
@given(same_n_pair(count=2, order=1, max_n=3))
def test_rho_on_tensors(pair):
    x, y = (e.with_order(2) for e in pair)
    assert fundamental(tensor(x, y), x.n, 1) == fundamental(x, x.n, 1).kron(fundamental(y, y.n, 1))


@pytest.mark.parametrize("kind, n", [("chain", 3), ("parabolic", 3), ("chain", 4)])
def test_rep_matches_series(kind, n):
    # every series terminates in the representation, so the truncated element agrees exactly
    F = build_twist(kind, n, order=5)
    assert fundamental(F.element, n, "1/2") == rep_twist(F, n, "1/2")


def test_rep_checks_carry_caveat():
    r = rep_cocycle_check(b2_jordanian(2), t_value=1)
    assert r.passed and r.note == CAVEAT


@pytest.mark.parametrize("t", ["1", "1/2"])
def test_parabolic_rep_small(t):
    F = parabolic_twist(make_plan(5), order=1)
    assert rep_cocycle_check(F, t_value=t).passed
    assert rep_qybe_check(F, t_value=t).passed


def test_sign_flip_fails_in_both_paths():
    plan = make_plan(4)
    good = full_chain(plan, order=3)
    bad = corrupt_sign_flip(good)
    assert rep_cocycle_check(good).passed and cocycle_check(good).passed
    assert not rep_cocycle_check(bad).passed
    assert not cocycle_check(bad).passed


def test_dump_matrix(tmp_path):
    M = rep_twist(b2_jordanian(2), 2, "1/2")
    path = tmp_path / "m.json"
    dump_matrix(M, str(path))
    assert SparseMatrix.from_payload(json.loads(path.read_text())) == M
