"""Root plans, the distinguished elements of the construction, and twist factors.

Every object is produced as a recipe (see ``expr``) and can be expanded to a
truncated series on demand.  A ``TwistElement`` keeps its factors as ordered
lists of exponentials ``exp(sum c t^k a (x) b)``, stored left to right as the
product is written; the rightmost factor acts first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

from gmpy2 import mpq

from .core_algebra import (
    DEFAULT_ORDER,
    AlgebraError,
    SeriesElement,
    format_rational,
    rational,
    tensor,
)
from .expr import (
    ONE_EXPR,
    Const,
    Exp,
    Expr,
    Given,
    Lin,
    Log,
    Named,
    Prod,
    Scaled,
    SeriesBackend,
    Sum,
    diag,
    gen,
    lin_scale,
    lin_sum,
)
from .hopf import exp_series

# ---------------------------------------------------------------------------
# root plan


def chi(n: int, l: int) -> int:
    """n - l for odd l, l for even l."""
    return (n + (n - 2 * l) * (-1) ** (l + 1)) // 2


@dataclass(frozen=True)
class RootPlan:
    n: int
    m: int
    p: int
    chi: dict
    psi: frozenset
    gamma: frozenset
    initial_roots: tuple
    constituents: tuple

    def j(self, s: int) -> int:
        return self.n - self.chi[s]

    def degenerate(self, s: int) -> bool:
        """True for the last external coordinate when n is odd."""
        return self.n % 2 == 1 and s == self.p

    def simple_root(self, k: int) -> tuple[int, int]:
        return (k, k + 1)


def make_plan(n: int) -> RootPlan:
    if n < 2:
        raise AlgebraError("a root plan needs n >= 2")
    m = n // 2
    p = n - 1 - m
    chis = {l: chi(n, l) for l in range(1, max(m, p) + 1)}
    psi = {chis[s] for s in range(1, p + 1)}
    if n % 2 == 0:
        psi.add(n // 2)
    gamma = frozenset(n - chis[s] for s in range(1, p + 1))
    initial = tuple((l, n - l + 1) for l in range(1, m + 1))
    constituents = tuple(tuple(range(l + 1, n - l + 1)) for l in range(1, m + 1))
    plan = RootPlan(n, m, p, chis, frozenset(psi), gamma, initial, constituents)
    if plan.psi & plan.gamma or len(plan.psi | plan.gamma) != n - 1:
        raise AlgebraError("psi and gamma do not partition the simple roots")
    return plan


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class ParamSet:
    """Deformation parameters xi_l = xi[l-1]*t and zeta_s = zeta[s-1]*t."""

    xi: tuple
    zeta: tuple

    @classmethod
    def default(cls, plan: RootPlan) -> "ParamSet":
        return cls(tuple([mpq(1)] * plan.m), tuple([mpq(1)] * plan.p))

    @classmethod
    def build(cls, plan: RootPlan, xi: Sequence | None = None, zeta: Sequence | None = None) -> "ParamSet":
        xs = tuple(rational(v) for v in xi) if xi is not None else (mpq(1),) * plan.m
        zs = tuple(rational(v) for v in zeta) if zeta is not None else (mpq(1),) * plan.p
        if len(xs) != plan.m or len(zs) != plan.p:
            raise AlgebraError(f"need {plan.m} link and {plan.p} quasi-Jordanian parameters")
        if any(v == 0 for v in xs + zs):
            raise AlgebraError("deformation parameters must be nonzero")
        return cls(xs, zs)

    def to_payload(self) -> dict:
        return {"xi": [format_rational(v) for v in self.xi], "zeta": [format_rational(v) for v in self.zeta]}

    @classmethod
    def from_payload(cls, payload) -> "ParamSet":
        return cls(tuple(rational(v) for v in payload["xi"]), tuple(rational(v) for v in payload["zeta"]))


def _params(plan: RootPlan, params: ParamSet | None) -> ParamSet:
    if params is None:
        return ParamSet.default(plan)
    if len(params.xi) != plan.m or len(params.zeta) != plan.p:
        raise AlgebraError("parameter set does not match the root plan")
    return params


def letter(plan: RootPlan, params: ParamSet, i: int, j: int, coeff=1) -> Lin:
    """E_ij conjugated by diag(d), d_i = xi_i for i <= m and 1 otherwise."""
    c = rational(coeff)
    k = 0
    if i <= plan.m:
        c *= params.xi[i - 1]
        k += 1
    if j <= plan.m:
        c /= params.xi[j - 1]
        k -= 1
    if k < 0:
        raise AlgebraError(f"E{i},{j} would carry a negative power of t")
    return Lin(((i, j, c, k),))


def _check(idx: int, lo: int, hi: int, what: str) -> None:
    if not lo <= idx <= hi:
        raise AlgebraError(f"{what} index {idx} outside [{lo}..{hi}]")


# ---------------------------------------------------------------------------
# distinguished elements (recipes)


def sigma_expr(l: int, plan: RootPlan, params: ParamSet | None = None) -> Expr:
    params = _params(plan, params)
    _check(l, 1, plan.m, "link")
    k = plan.n - l + 1
    return Named(f"σ{l},{k}", Log(Sum((ONE_EXPR, letter(plan, params, l, k)))))


def hat_cartan_expr(l: int, plan: RootPlan) -> Lin:
    _check(l, 1, plan.m, "link")
    n = plan.n
    a = mpq(2 * l - 1, n)
    if l % 2:
        low = {u: -1 for u in range(1, l)}
        high = {u: -1 for u in range(n - l + 1, n + 1)}
        return diag(n, {**low, **high}, identity=a)
    low = {u: 1 for u in range(1, l + 1)}
    high = {u: 1 for u in range(n - l + 2, n + 1)}
    return diag(n, {**low, **high}, identity=-a)


def h_perp_expr(s: int, plan: RootPlan) -> Lin:
    _check(s, 1, plan.p, "quasi-Jordanian")
    n = plan.n
    coeffs: dict = {}
    for u in range(1, s + 1):
        coeffs[u] = coeffs.get(u, 0) + 1
        coeffs[n - u + 1] = coeffs.get(n - u + 1, 0) + 1
    base = diag(n, coeffs, identity=mpq(-2 * s, n))
    return lin_scale(base, (-1) ** s)


def canonical_cartan_expr(l: int, plan: RootPlan) -> Lin:
    """H_{lambda0} = (E_ll - E_kk)/2: eigenvalue 1 on E_{l,k}, 1/2 on constituents."""
    _check(l, 1, plan.m, "link")
    return diag(plan.n, {l: mpq(1, 2), plan.n - l + 1: mpq(-1, 2)})


def external_coordinate_expr(s: int, plan: RootPlan, params: ParamSet | None = None) -> Expr:
    params = _params(plan, params)
    _check(s, 1, plan.p, "external coordinate")
    n = plan.n
    if plan.degenerate(s):
        if s % 2:
            # xi_s * phi(E_{s+1,s}) = E_{s+1,s}
            return Named(f"Ê{s}", gen(s + 1, s))
        return Named(f"Ê{s}", Sum((
            letter(plan, params, n - s + 1, n - s),
            Scaled(mpq(-1), 0, Prod((hat_cartan_expr(s, plan), letter(plan, params, s, n - s)))),
        )))
    if s % 2:
        rot = Exp(Sum((sigma_expr(s + 1, plan, params), Scaled(mpq(-1), 0, sigma_expr(s, plan, params)))))
        return Named(f"Ê{s}", Sum((
            letter(plan, params, s + 1, s),
            Prod((letter(plan, params, n - s, n - s + 1), rot)),
        )))
    dh = lin_sum(hat_cartan_expr(s + 1, plan), lin_scale(hat_cartan_expr(s, plan), -1))
    return Named(f"Ê{s}", Sum((
        letter(plan, params, n - s + 1, n - s),
        Prod((dh, letter(plan, params, s, n - s))),
        letter(plan, params, s, s + 1),
    )))


def ln_c_expr(s: int, plan: RootPlan, params: ParamSet | None = None) -> Expr:
    params = _params(plan, params)
    _check(s, 1, plan.p, "quasi-Jordanian")
    if s > plan.m:
        raise AlgebraError("C_s needs s <= m links")
    parts = tuple(Scaled(mpq(2), 0, sigma_expr(i, plan, params)) for i in range(1, s + 1))
    return Named(f"lnC{s}", Sum(parts) if len(parts) > 1 else parts[0])


def c_element_expr(s: int, plan: RootPlan, params: ParamSet | None = None) -> Expr:
    return Named(f"C{s}", Exp(ln_c_expr(s, plan, params)))


def d_coordinate_expr(s: int, plan: RootPlan, params: ParamSet | None = None) -> Expr:
    params = _params(plan, params)
    E = external_coordinate_expr(s, plan, params)
    body = Prod((E, c_element_expr(s, plan, params))) if s % 2 else E
    return Named(f"D{s}", Scaled(params.zeta[s - 1], 1, body))


def omega_expr(s: int, plan: RootPlan, params: ParamSet | None = None) -> Expr:
    params = _params(plan, params)
    return Named(f"ω{s}", Log(Sum((c_element_expr(s, plan, params), d_coordinate_expr(s, plan, params)))))


def extension_partner_expr(s: int, plan: RootPlan, params: ParamSet | None = None) -> Expr:
    """The positive-root element paired with Ê_s inside the chain carrier."""
    params = _params(plan, params)
    n = plan.n
    if s % 2:
        return Prod((letter(plan, params, s + 1, n - s + 1),
                     Exp(Scaled(mpq(-1), 0, sigma_expr(s, plan, params)))))
    return letter(plan, params, s, n - s)


# ---------------------------------------------------------------------------
# series-valued wrappers


def _series(node: Expr, n: int, order: int) -> SeriesElement:
    return SeriesBackend(n, order)(node)


def sigma(l: int, plan: RootPlan, params: ParamSet | None = None, order: int = DEFAULT_ORDER) -> SeriesElement:
    return _series(sigma_expr(l, plan, params), plan.n, order)


def hat_cartan(l: int, plan: RootPlan, order: int = DEFAULT_ORDER) -> SeriesElement:
    return _series(hat_cartan_expr(l, plan), plan.n, order)


def h_perp(s: int, plan: RootPlan, order: int = DEFAULT_ORDER) -> SeriesElement:
    return _series(h_perp_expr(s, plan), plan.n, order)


def external_coordinate(s: int, plan: RootPlan, params: ParamSet | None = None,
                        order: int = DEFAULT_ORDER) -> SeriesElement:
    return _series(external_coordinate_expr(s, plan, params), plan.n, order)


def c_element(s: int, plan: RootPlan, params: ParamSet | None = None, order: int = DEFAULT_ORDER) -> SeriesElement:
    return _series(c_element_expr(s, plan, params), plan.n, order)


def d_coordinate(s: int, plan: RootPlan, params: ParamSet | None = None, order: int = DEFAULT_ORDER) -> SeriesElement:
    return _series(d_coordinate_expr(s, plan, params), plan.n, order)


def omega(s: int, plan: RootPlan, params: ParamSet | None = None, order: int = DEFAULT_ORDER) -> SeriesElement:
    return _series(omega_expr(s, plan, params), plan.n, order)


# ---------------------------------------------------------------------------
# twist elements


@dataclass(frozen=True)
class Piece:
    """exp(sum_k coeff_k t^{deg_k} a_k (x) b_k)."""

    terms: tuple  # ((coeff, tdeg, a, b), ...)

    def __str__(self):
        out = []
        for c, k, a, b in self.terms:
            cs = str(Const(c, k))
            lead = "" if cs == "1" else ("-" if cs == "-1" else cs + "·")
            out.append(f"{lead}{a}⊗{b}")
        return "exp(" + " + ".join(out).replace("+ -", "- ") + ")"


@dataclass(frozen=True)
class Factor:
    name: str
    pieces: tuple  # Piece, left to right

    def __str__(self):
        return "·".join(str(p) for p in self.pieces)


def _piece(*terms) -> Piece:
    return Piece(tuple((rational(c), k, a, b) for c, k, a, b in terms))


@dataclass
class TwistElement:
    """An ordered product of exponential factors, left to right as written."""

    n: int
    order: int
    factors: tuple
    params: ParamSet | None = None
    kind: str = "custom"
    _element: SeriesElement | None = field(default=None, repr=False)

    @cached_property
    def backend(self) -> SeriesBackend:
        return SeriesBackend(self.n, self.order)

    def pieces(self) -> list[Piece]:
        return [p for f in self.factors for p in f.pieces]

    def piece_exponent(self, piece: Piece) -> SeriesElement:
        acc = SeriesElement.zero(self.n, 2, self.order)
        for c, k, a, b in piece.terms:
            acc = acc + tensor(self.backend(a), self.backend(b)).scale(c, k)
        if acc.degree_terms(0):
            raise AlgebraError("factor exponent has a t^0 part")
        return acc

    def exponents(self) -> list[SeriesElement] | None:
        if not self.factors:
            return []
        if self._from_series_only:
            return None
        return [self.piece_exponent(p) for p in self.pieces()]

    @property
    def _from_series_only(self) -> bool:
        return self._element is not None and not self.factors

    @property
    def element(self) -> SeriesElement:
        if self._element is None:
            acc = SeriesElement.one(self.n, 2, self.order)
            for X in self.exponents():
                acc = acc * exp_series(X)
            self._element = acc
        return self._element

    def factor_names(self) -> list[str]:
        return [f.name for f in self.factors]

    def describe(self) -> str:
        return " · ".join(f"[{f.name}] {f}" for f in self.factors) or "1⊗1"

    def compose(self, other: "TwistElement", kind: str | None = None) -> "TwistElement":
        """self · other (other acts first)."""
        if self.n != other.n:
            raise AlgebraError("cannot compose twists on different algebras")
        order = min(self.order, other.order)
        return TwistElement(self.n, order, self.factors + other.factors,
                            self.params or other.params, kind or f"{self.kind}*{other.kind}")

    def with_order(self, order: int) -> "TwistElement":
        if self._from_series_only:
            if order > self.order:
                raise AlgebraError("a bare series twist cannot be extended to higher order")
            return TwistElement(self.n, order, (), self.params, self.kind, self._element.truncate(order))
        return replace(self, order=order, _element=None)

    # serialization --------------------------------------------------------

    def to_payload(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "order": self.order,
            "params": self.params.to_payload() if self.params else None,
            "factors": [{"name": f.name, "formula": str(f)} for f in self.factors],
            "element": self.element.to_payload(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_series(cls, element: SeriesElement, kind: str = "custom", params: ParamSet | None = None):
        if element.rank != 2:
            raise AlgebraError("a twist is a rank-2 element")
        return cls(element.n, element.order, (), params, kind, element)

    @classmethod
    def from_payload(cls, payload) -> "TwistElement":
        """Rebuild from a payload; keeps the factor list only if it reproduces the stored element."""
        element = SeriesElement.from_payload(payload["element"])
        params = ParamSet.from_payload(payload["params"]) if payload.get("params") else None
        kind = payload.get("kind", "custom")
        if kind in BUILDERS:
            try:
                rebuilt = build_twist(kind, payload["n"], order=payload["order"], params=params)
            except AlgebraError:
                rebuilt = None
            if rebuilt is not None and rebuilt.element == element:
                return rebuilt
        return cls.from_series(element, kind="custom" if kind in BUILDERS else kind, params=params)

    @classmethod
    def from_json(cls, text: str) -> "TwistElement":
        return cls.from_payload(json.loads(text))


def identity_twist(n: int, order: int = DEFAULT_ORDER) -> TwistElement:
    return TwistElement(n, order, (), None, "identity")


def jordanian(H, E_arg, order: int = DEFAULT_ORDER, name: str = "jordanian") -> TwistElement:
    """exp(H (x) ln(1 + E)) after checking [H, E] = E and val(E) >= 1."""
    Hx = H if isinstance(H, Expr) else Given(H, "H")
    Ex = E_arg if isinstance(E_arg, Expr) else Given(E_arg, "E")
    n = _infer_n(H, E_arg)
    be = SeriesBackend(n, order)
    h, e = be(Hx), be(Ex)
    if e.degree_terms(0):
        raise AlgebraError("jordanian: E must have t-valuation >= 1")
    if not (h * e - e * h - e).is_zero():
        raise AlgebraError("jordanian: [H, E] = E fails")
    sig = Named("σ", Log(Sum((ONE_EXPR, Ex))))
    return TwistElement(n, order, (Factor(name, (_piece((1, 0, Hx, sig)),)),), None, "jordanian")


def _infer_n(*xs) -> int:
    for x in xs:
        if isinstance(x, SeriesElement):
            return x.n
        if isinstance(x, Given):
            return x.series.n
    for x in xs:
        if isinstance(x, Lin):
            return max(max(i, j) for i, j, _, _ in x.terms)
    raise AlgebraError("cannot infer n; pass a series or a Lin")


def b2_jordanian(order: int = DEFAULT_ORDER, xi=1, n: int = 2) -> TwistElement:
    """The basic Jordanian twist on span{H_1n, E_1n} in gl(n)."""
    H = diag(n, {1: mpq(1, 2), n: mpq(-1, 2)})
    E = gen(1, n, xi, 1)
    tw = jordanian(H, E, order)
    return tw


def _link_factor(l: int, plan: RootPlan, params: ParamSet, cartan: Lin, ext_weight: mpq,
                 name: str) -> Factor:
    n = plan.n
    sig = sigma_expr(l, plan, params)
    pieces = []
    ks = plan.constituents[l - 1]
    if ks:
        if ext_weight:
            damp = Exp(Scaled(-ext_weight, 0, sig))
        terms = []
        for k in ks:
            second = gen(k, n - l + 1) if not ext_weight else Prod((gen(k, n - l + 1), damp))
            terms.append((params.xi[l - 1], 1, gen(l, k), second))
        pieces.append(_piece(*terms))
    pieces.append(_piece((1, 0, Named(f"Ĥ{l}" if name.startswith("link") else f"H{l}", cartan), sig)))
    return Factor(name, tuple(pieces))


def link(l: int, plan: RootPlan, params: ParamSet | None = None, order: int = DEFAULT_ORDER) -> TwistElement:
    """One link of the full chain: extension(s) times exp(Ĥ_l (x) σ_l)."""
    params = _params(plan, params)
    _check(l, 1, plan.m, "link")
    weight = mpq(1) if l % 2 else mpq(0)
    f = _link_factor(l, plan, params, hat_cartan_expr(l, plan), weight, f"link:{l}")
    return TwistElement(plan.n, order, (f,), params, "link")


def generic_link(l: int, plan: RootPlan, params: ParamSet | None = None,
                 order: int = DEFAULT_ORDER) -> TwistElement:
    """Link built on the canonical Cartan element with the e^{-σ/2} extension."""
    params = _params(plan, params)
    _check(l, 1, plan.m, "link")
    f = _link_factor(l, plan, params, canonical_cartan_expr(l, plan), mpq(1, 2), f"generic-link:{l}")
    return TwistElement(plan.n, order, (f,), params, "generic-link")


def generic_chain(plan: RootPlan, upto: int | None = None, params: ParamSet | None = None,
                  order: int = DEFAULT_ORDER) -> TwistElement:
    params = _params(plan, params)
    upto = plan.m if upto is None else upto
    _check(upto, 0, plan.m, "chain length")
    factors = tuple(generic_link(l, plan, params, order).factors[0] for l in range(upto, 0, -1))
    return TwistElement(plan.n, order, factors, params, "generic-chain")


def full_chain(plan: RootPlan, params: ParamSet | None = None, order: int = DEFAULT_ORDER,
               upto: int | None = None) -> TwistElement:
    params = _params(plan, params)
    upto = plan.m if upto is None else upto
    _check(upto, 0, plan.m, "chain length")
    factors = tuple(link(l, plan, params, order).factors[0] for l in range(upto, 0, -1))
    return TwistElement(plan.n, order, factors, params, "chain")


def rotation_twist(plan: RootPlan, params: ParamSet | None = None, order: int = DEFAULT_ORDER) -> TwistElement:
    params = _params(plan, params)
    terms = []
    for s in range(1, plan.p + 1):
        hp = Named(f"H⊥{s}", h_perp_expr(s, plan))
        lc = ln_c_expr(s, plan, params)
        terms.append((1, 0, lc, hp) if s % 2 == 0 else (-1, 0, hp, lc))
    factors = (Factor("rotation", (_piece(*terms),)),) if terms else ()
    return TwistElement(plan.n, order, factors, params, "rotation")


def rotated_chain(plan: RootPlan, params: ParamSet | None = None, order: int = DEFAULT_ORDER) -> TwistElement:
    params = _params(plan, params)
    tw = rotation_twist(plan, params, order).compose(full_chain(plan, params, order))
    tw.kind = "rotated-chain"
    return tw


def quasi_jordanian(s: int, plan: RootPlan, params: ParamSet | None = None,
                    order: int = DEFAULT_ORDER) -> TwistElement:
    params = _params(plan, params)
    _check(s, 1, plan.p, "quasi-Jordanian")
    f = Factor(f"quasi-jordanian:{s}",
               (_piece((1, 0, Named(f"H⊥{s}", h_perp_expr(s, plan)), omega_expr(s, plan, params))),))
    return TwistElement(plan.n, order, (f,), params, "quasi-jordanian")


def quasi_jordanian_product(plan: RootPlan, params: ParamSet | None = None,
                            order: int = DEFAULT_ORDER) -> TwistElement:
    params = _params(plan, params)
    factors = tuple(quasi_jordanian(s, plan, params, order).factors[0] for s in range(plan.p, 0, -1))
    return TwistElement(plan.n, order, factors, params, "quasi-jordanian-product")


def parabolic_twist(plan: RootPlan, params: ParamSet | None = None, order: int = DEFAULT_ORDER) -> TwistElement:
    params = _params(plan, params)
    factors = (quasi_jordanian_product(plan, params, order).factors
               + rotation_twist(plan, params, order).factors
               + full_chain(plan, params, order).factors)
    return TwistElement(plan.n, order, factors, params, "parabolic")


def general_quasi_jordanian(H, C, D, order: int = DEFAULT_ORDER, n: int | None = None) -> TwistElement:
    """exp(H (x) ln(C + D)) for arbitrary recipes or series (no preconditions checked)."""
    Hx, Cx, Dx = (x if isinstance(x, Expr) else Given(x, lbl) for x, lbl in ((H, "H"), (C, "C"), (D, "D")))
    n = n or _infer_n(H, C, D)
    f = Factor("quasi-jordanian", (_piece((1, 0, Hx, Named("ω", Log(Sum((Cx, Dx)))))),))
    return TwistElement(n, order, (f,), None, "quasi-jordanian")


# ---------------------------------------------------------------------------
# sl(4) variants


def sl4_e1_expr(params: ParamSet) -> Expr:
    plan = make_plan(4)
    return external_coordinate_expr(1, plan, params)


def sl4_e3_expr(params: ParamSet) -> Expr:
    plan = make_plan(4)
    dh = lin_sum(hat_cartan_expr(2, plan), lin_scale(hat_cartan_expr(1, plan), -1))
    return Named("Ê3", Sum((
        letter(plan, params, 4, 3),
        Prod((dh, letter(plan, params, 1, 3))),
        letter(plan, params, 1, 2),
    )))


def sl4_c3_expr(params: ParamSet) -> Expr:
    plan = make_plan(4)
    return Named("C3", Exp(Sum((sigma_expr(1, plan, params), Scaled(mpq(-1), 0, sigma_expr(2, plan, params))))))


def sl4_d3_expr(params: ParamSet) -> Expr:
    return Named("D3", Scaled(params.zeta[0], 1, Prod((sl4_e3_expr(params), sl4_c3_expr(params)))))


def sl4_special(variant: str, params: ParamSet | None = None, order: int = DEFAULT_ORDER) -> TwistElement:
    plan = make_plan(4)
    params = _params(plan, params)
    hp = Named("H⊥1", h_perp_expr(1, plan))
    chain = full_chain(plan, params, order)
    v = variant.upper()
    if v == "P1":
        d1 = Named("D1", Scaled(params.zeta[0], 1, sl4_e1_expr(params)))
        f = Factor("jordanian:1", (_piece((1, 0, hp, Named("ω1", Log(Sum((ONE_EXPR, d1)))))),))
    elif v == "P3":
        om = Named("ω3", Log(Sum((sl4_c3_expr(params), sl4_d3_expr(params)))))
        f = Factor("quasi-jordanian:3", (_piece((-1, 0, hp, om)),))
    else:
        raise AlgebraError(f"unknown sl(4) variant {variant!r}")
    return TwistElement(4, order, (f,) + chain.factors, params, f"sl4-{v.lower()}")


# ---------------------------------------------------------------------------
# deliberate corruptions (negative controls)


def corrupt_sign_flip(tw: TwistElement, factor_name: str = "link:1") -> TwistElement:
    """Flip the sign of the first exponential inside the named factor."""
    out = []
    for f in tw.factors:
        if f.name == factor_name:
            p0 = f.pieces[0]
            flipped = Piece(tuple((-c, k, a, b) for c, k, a, b in p0.terms))
            f = Factor(f.name + "(sign-flipped)", (flipped,) + f.pieces[1:])
        out.append(f)
    if out == list(tw.factors):
        raise AlgebraError(f"no factor named {factor_name!r}")
    return TwistElement(tw.n, tw.order, tuple(out), tw.params, "custom")


def corrupt_drop_extension(tw: TwistElement, factor_name: str = "link:1") -> TwistElement:
    """Remove the extension exponential of a link, keeping its Jordanian part."""
    out = []
    hit = False
    for f in tw.factors:
        if f.name == factor_name and len(f.pieces) > 1:
            f = Factor(f.name + "(no-extension)", f.pieces[1:])
            hit = True
        out.append(f)
    if not hit:
        raise AlgebraError(f"factor {factor_name!r} has no extension")
    return TwistElement(tw.n, tw.order, tuple(out), tw.params, "custom")


def corrupt_cartan(tw: TwistElement, plan: RootPlan, l: int = 1) -> TwistElement:
    """Replace Ĥ_l in link l by the canonical H_{lambda0} (extension left unchanged)."""
    name = f"link:{l}"
    out = []
    hit = False
    for f in tw.factors:
        if f.name == name:
            last = f.pieces[-1]
            (c, k, _, b), = last.terms
            f = Factor(name + "(wrong-cartan)", f.pieces[:-1] + (Piece(((c, k, canonical_cartan_expr(l, plan), b),)),))
            hit = True
        out.append(f)
    if not hit:
        raise AlgebraError(f"no factor named {name!r}")
    return TwistElement(tw.n, tw.order, tuple(out), tw.params, "custom")


# ---------------------------------------------------------------------------
# registry


def _b2(n, order, params):
    if n == 2:
        return full_chain(make_plan(2), params, order)
    return b2_jordanian(order, params.xi[0] if params else 1, n)


BUILDERS = {
    "identity": lambda n, order, params: identity_twist(n, order),
    "jordanian": _b2,
    "chain": lambda n, order, params: full_chain(make_plan(n), params, order),
    "generic-chain": lambda n, order, params: generic_chain(make_plan(n), None, params, order),
    "rotation": lambda n, order, params: rotation_twist(make_plan(n), params, order),
    "rotated-chain": lambda n, order, params: rotated_chain(make_plan(n), params, order),
    "quasi-jordanian-product": lambda n, order, params: quasi_jordanian_product(make_plan(n), params, order),
    "parabolic": lambda n, order, params: parabolic_twist(make_plan(n), params, order),
    "sl4-p1": lambda n, order, params: _sl4(n, "P1", order, params),
    "sl4-p3": lambda n, order, params: _sl4(n, "P3", order, params),
}


def _sl4(n, variant, order, params):
    if n != 4:
        raise AlgebraError("sl4 variants require n = 4")
    return sl4_special(variant, params, order)


def build_twist(kind: str, n: int, order: int = DEFAULT_ORDER, params: ParamSet | None = None) -> TwistElement:
    if kind not in BUILDERS:
        raise AlgebraError(f"unknown twist kind {kind!r}; choose from {sorted(BUILDERS)}")
    tw = BUILDERS[kind](n, order, params)
    tw.kind = kind
    return tw
