"""Primitive Hopf structure on U(gl(n))[[t]] and the twisting calculus."""

from __future__ import annotations

from typing import Callable, Protocol, Sequence

from gmpy2 import mpq

from .core_algebra import (
    ZERO,
    AlgebraError,
    SeriesElement,
    _check_budget,
    embed_leg,
    multiply,
)


def coproduct(x: SeriesElement) -> SeriesElement:
    """Delta0 extended multiplicatively from E -> E(x)1 + 1(x)E."""
    if x.rank != 1:
        raise AlgebraError("coproduct takes a rank-1 element")
    return coproduct_leg(x, 0)


def coproduct_leg(x: SeriesElement, leg: int) -> SeriesElement:
    """Apply Delta0 to one leg of a rank-k element (rank k+1 result).

    leg=0 on a rank-2 element is (Delta (x) id), leg=1 is (id (x) Delta).
    """
    if not 0 <= leg < x.rank:
        raise AlgebraError(f"leg {leg} out of range for rank {x.rank}")
    alg = x.algebra
    out = []
    for d in range(x.order + 1):
        nd: dict = {}
        for legs, c in x.degree_terms(d).items():
            for (a, b), k in alg.coproduct_word(legs[leg]).items():
                key = legs[:leg] + (a, b) + legs[leg + 1:]
                nd[key] = nd.get(key, ZERO) + c * k
        out.append({k: v for k, v in nd.items() if v})
        _check_budget(sum(len(o) for o in out))
    return SeriesElement._raw(x.n, x.rank + 1, x.order, out)


def counit(x: SeriesElement) -> list[mpq]:
    """epsilon on a rank-1 element, as the list of t-coefficients."""
    if x.rank != 1:
        raise AlgebraError("counit takes a rank-1 element")
    return [x.coefficient(d, ((),)) for d in range(x.order + 1)]


def counit_leg(x: SeriesElement, leg: int) -> SeriesElement:
    """(id..eps..id) on one leg; rank drops by one (a rank-0 result is a scalar series)."""
    if not 0 <= leg < x.rank:
        raise AlgebraError(f"leg {leg} out of range for rank {x.rank}")
    out = []
    for d in range(x.order + 1):
        nd: dict = {}
        for legs, c in x.degree_terms(d).items():
            if legs[leg]:
                continue
            key = legs[:leg] + legs[leg + 1:]
            nd[key] = nd.get(key, ZERO) + c
        out.append({k: v for k, v in nd.items() if v})
    return SeriesElement._raw(x.n, x.rank - 1, x.order, out)


def _antipode_word(alg, w):
    # S(x1...xL) = (-1)^L xL...x1
    acc = {(): 1}
    for g in reversed(w):
        nxt: dict = {}
        for u, c in acc.items():
            for u2, c2 in alg.times_letter(u, g).items():
                nxt[u2] = nxt.get(u2, 0) + c * c2
        acc = nxt
    sign = -1 if len(w) % 2 else 1
    return {u: sign * c for u, c in acc.items() if c}


def antipode(x: SeriesElement, leg: int = 0) -> SeriesElement:
    """Undeformed antipode S(E) = -E, applied to one leg."""
    if not 0 <= leg < x.rank:
        raise AlgebraError(f"leg {leg} out of range for rank {x.rank}")
    alg = x.algebra
    out = []
    for d in range(x.order + 1):
        nd: dict = {}
        for legs, c in x.degree_terms(d).items():
            for w, k in _antipode_word(alg, legs[leg]).items():
                key = legs[:leg] + (w,) + legs[leg + 1:]
                nd[key] = nd.get(key, ZERO) + c * k
        out.append({k: v for k, v in nd.items() if v})
    return SeriesElement._raw(x.n, x.rank, x.order, out)


def multiply_legs(x: SeriesElement) -> SeriesElement:
    """The multiplication map m: U^{(x)2} -> U."""
    if x.rank != 2:
        raise AlgebraError("multiply_legs takes a rank-2 element")
    alg = x.algebra
    out = []
    for d in range(x.order + 1):
        nd: dict = {}
        for (u, v), c in x.degree_terms(d).items():
            for w, k in alg.mul(u, v).items():
                nd[(w,)] = nd.get((w,), ZERO) + c * k
        out.append({k: val for k, val in nd.items() if val})
    return SeriesElement._raw(x.n, 1, x.order, out)


def _require_positive_valuation(x: SeriesElement, what: str) -> None:
    if x.degree_terms(0):
        raise AlgebraError(f"{what}: argument has a t^0 part; the series is not defined order by order")


def exp_series(x: SeriesElement) -> SeriesElement:
    """sum_{k<=N} x^k / k!  for x of t-valuation >= 1."""
    _require_positive_valuation(x, "exp_series")
    result = SeriesElement.one(x.n, x.rank, x.order)
    term = result
    for k in range(1, x.order + 1):
        term = multiply(term, x).scale(mpq(1, k))
        if term.is_zero():
            break
        result = result + term
    return result


def log_series(x: SeriesElement) -> SeriesElement:
    """sum_{k<=N} (-1)^{k+1} (x-1)^k / k  for x = 1 + O(t)."""
    if not x.is_unit_constant():
        raise AlgebraError("log_series: constant term must be the unit")
    y = x - 1
    result = SeriesElement.zero(x.n, x.rank, x.order)
    power = SeriesElement.one(x.n, x.rank, x.order)
    for k in range(1, x.order + 1):
        power = multiply(power, y)
        if power.is_zero():
            break
        result = result + power.scale(mpq((-1) ** (k + 1), k))
    return result


def invert_series(x: SeriesElement) -> SeriesElement:
    """Inverse of 1 + O(t) as sum_k (1 - x)^k."""
    if not x.is_unit_constant():
        raise AlgebraError("invert_series: constant term must be the unit tensor")
    y = 1 - x
    result = SeriesElement.one(x.n, x.rank, x.order)
    power = result
    for _ in range(1, x.order + 1):
        power = multiply(power, y)
        if power.is_zero():
            break
        result = result + power
    return result


def adjoint_exp(exponent: SeriesElement, y: SeriesElement) -> SeriesElement:
    """exp(X) y exp(-X) = sum_k ad_X^k(y)/k!, for X of positive t-valuation."""
    _require_positive_valuation(exponent, "adjoint_exp")
    result = y
    term = y
    for k in range(1, y.order + 1):
        term = (multiply(exponent, term) - multiply(term, exponent)).scale(mpq(1, k))
        if term.is_zero():
            break
        result = result + term
    return result


class Twisting(Protocol):
    """Anything usable as a twisting element: an expanded series plus, optionally,
    the list of rank-2 exponents whose ordered exponentials multiply to it."""

    element: SeriesElement

    def exponents(self) -> Sequence[SeriesElement]: ...


def _as_element(F) -> SeriesElement:
    return F.element if hasattr(F, "element") else F


def _at_order(X: SeriesElement, order: int) -> SeriesElement:
    if X.order < order:
        raise AlgebraError(f"twist known to order {X.order}, needed to order {order}")
    return X.truncate(order)


def conjugate(F, y: SeriesElement, *, by_factors: bool = True) -> SeriesElement:
    """F y F^{-1}.

    When F carries its factor exponents, conjugation is done factor by factor with
    exp(ad X); otherwise by explicit series multiplication with the inverse.
    """
    exps = None
    if by_factors and hasattr(F, "exponents"):
        exps = F.exponents()
    if exps is not None:
        # rightmost factor acts first
        for X in reversed(list(exps)):
            y = adjoint_exp(_at_order(X, y.order), y)
        return y
    Fe = _at_order(_as_element(F), y.order)
    return multiply(multiply(Fe, y), invert_series(Fe))


class CoproductContext:
    """A (possibly twisted) coproduct: Delta_G(a) = G Delta0(a) G^{-1}.

    ``twist`` is None for the primitive coproduct.  The context also applies the
    coproduct to one leg of higher-rank elements.
    """

    def __init__(self, twist=None, *, by_factors: bool = True):
        self.twist = twist
        self.by_factors = by_factors

    @property
    def is_primitive(self) -> bool:
        return self.twist is None

    def __call__(self, x: SeriesElement) -> SeriesElement:
        return self.apply(x)

    def apply(self, x: SeriesElement) -> SeriesElement:
        d0 = coproduct(x)
        if self.twist is None:
            return d0
        return conjugate(self.twist, d0, by_factors=self.by_factors)

    def apply_leg(self, x: SeriesElement, leg: int) -> SeriesElement:
        d0 = coproduct_leg(x, leg)
        if self.twist is None:
            return d0
        if x.rank != 2:
            raise AlgebraError("twisted leg coproduct is implemented for rank-2 inputs only")
        placement = "12" if leg == 0 else "23"
        if self.by_factors and getattr(self.twist, "exponents", lambda: None)() is not None:
            y = d0
            for X in reversed(list(self.twist.exponents() or [])):
                y = adjoint_exp(embed_leg(_at_order(X, x.order), placement), y)
            return y
        G3 = embed_leg(_at_order(_as_element(self.twist), x.order), placement)
        return multiply(multiply(G3, d0), invert_series(G3))


def twist_coproduct(F, x: SeriesElement, base: CoproductContext | None = None) -> SeriesElement:
    """Delta_F(a) = F Delta(a) F^{-1} for a rank-1 element a."""
    if x.rank != 1:
        raise AlgebraError("twist_coproduct takes a rank-1 element")
    Fe = _as_element(F)
    if not Fe.is_unit_constant():
        raise AlgebraError("twisting element must have unit constant term")
    d = coproduct(x) if base is None else base.apply(x)
    return conjugate(F, d)


class TwistedAntipode:
    """v = sum f1 S(f2) and S_F(a) = v S(a) v^{-1}."""

    def __init__(self, F):
        Fe = _as_element(F)
        if Fe.rank != 2:
            raise AlgebraError("twisted antipode needs a rank-2 twist")
        if not Fe.is_unit_constant():
            raise AlgebraError("twisting element must have unit constant term")
        self.v = multiply_legs(antipode(Fe, leg=1))
        self.v_inv = invert_series(self.v)

    def __call__(self, a: SeriesElement) -> SeriesElement:
        return multiply(multiply(self.v, antipode(a)), self.v_inv)


def twisted_antipode(F) -> tuple[SeriesElement, Callable[[SeriesElement], SeriesElement]]:
    s = TwistedAntipode(F)
    return s.v, s
