"""Exact PBW-ordered arithmetic in U(gl(n))^{(x)k}[[t]] / t^{N+1}.

Generators are the matrix units E_ij.  They are totally ordered as

    E_ij with i > j (lexicographic), then E_ii (ascending), then E_ij with i < j

and a PBW monomial is stored as a non-decreasing tuple of generator ranks.
A tensor monomial is a tuple of such words, one per leg.  Elements are
immutable; every operation returns a fresh :class:`SeriesElement`.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping

from gmpy2 import mpq

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))

Word = tuple  # tuple[int, ...], non-decreasing generator ranks
Legs = tuple  # tuple[Word, ...]

ZERO = mpq(0)
ONE = mpq(1)

DEFAULT_ORDER = 3


class AlgebraError(ValueError):
    """Malformed input to an algebra operation (rank, order, index...)."""


class ResourceBudgetExceeded(RuntimeError):
    """Raised when an intermediate result grows past the term budget."""


_budget = {"terms": 4_000_000}


def set_term_budget(terms: int) -> None:
    _budget["terms"] = int(terms)


def get_term_budget() -> int:
    return _budget["terms"]


def rational(x) -> mpq:
    """Coerce ints, Fractions, mpq and "p/q" strings to an exact rational."""
    if isinstance(x, str):
        x = x.strip()
        try:
            return mpq(Fraction(x))
        except (ValueError, ZeroDivisionError) as exc:
            raise AlgebraError(f"not a rational literal: {x!r}") from exc
    if isinstance(x, float):
        raise AlgebraError("floating point coefficients are not allowed")
    return mpq(x)


def format_rational(c) -> str:
    c = mpq(c)
    return f"{c.numerator}/{c.denominator}"


class GL:
    """Structure tables and product caches for U(gl(n))."""

    def __init__(self, n: int):
        if n < 1:
            raise AlgebraError("n must be positive")
        self.n = n
        lower = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i > j]
        diag = [(i, i) for i in range(1, n + 1)]
        upper = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i < j]
        self.gens: list[tuple[int, int]] = lower + diag + upper
        self.index: dict[tuple[int, int], int] = {g: k for k, g in enumerate(self.gens)}
        self.bracket = [[self._bracket(a, b) for b in self.gens] for a in self.gens]
        self._times_letter_cache: dict = {}
        self._mul_cache: dict = {}
        self._coproduct_cache: dict = {}

    def _bracket(self, a, b):
        # [E_ij, E_kl] = d_jk E_il - d_li E_kj
        (i, j), (k, l) = a, b
        out: dict[int, int] = {}
        if j == k:
            g = self.index[(i, l)]
            out[g] = out.get(g, 0) + 1
        if l == i:
            g = self.index[(k, j)]
            out[g] = out.get(g, 0) - 1
        return tuple((g, c) for g, c in out.items() if c)

    def gen(self, i: int, j: int) -> int:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise AlgebraError(f"generator E_{i},{j} out of range for n={self.n}")
        return self.index[(i, j)]

    def times_letter(self, u: Word, x: int) -> dict:
        """Normal form of the word u followed by the single letter x."""
        key = (u, x)
        hit = self._times_letter_cache.get(key)
        if hit is not None:
            return hit
        if not u or u[-1] <= x:
            res = {u + (x,): 1}
        else:
            y = u[-1]
            head = u[:-1]
            res: dict = {}
            # head y x = (head x) y + head [y, x]
            for w, c in self.times_letter(head, x).items():
                for w2, c2 in self.times_letter(w, y).items():
                    res[w2] = res.get(w2, 0) + c * c2
            for z, cz in self.bracket[y][x]:
                for w2, c2 in self.times_letter(head, z).items():
                    res[w2] = res.get(w2, 0) + cz * c2
            res = {w: c for w, c in res.items() if c}
        self._times_letter_cache[key] = res
        return res

    def mul(self, u: Word, v: Word) -> dict:
        """Normal form of the product of two PBW words (integer coefficients)."""
        if not v:
            return {u: 1}
        if not u or u[-1] <= v[0]:
            return {u + v: 1}
        key = (u, v)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        acc = {u: 1}
        for x in v:
            nxt: dict = {}
            for w, c in acc.items():
                for w2, c2 in self.times_letter(w, x).items():
                    nxt[w2] = nxt.get(w2, 0) + c * c2
            acc = {w: c for w, c in nxt.items() if c}
        self._mul_cache[key] = acc
        return acc

    def coproduct_word(self, u: Word) -> dict:
        """Primitive coproduct of a PBW word as {(left, right): int}."""
        hit = self._coproduct_cache.get(u)
        if hit is not None:
            return hit
        groups: list[tuple[int, int]] = []
        for x in u:
            if groups and groups[-1][0] == x:
                groups[-1] = (x, groups[-1][1] + 1)
            else:
                groups.append((x, 1))
        res: dict = {((), ()): 1}
        for x, e in groups:
            nxt: dict = {}
            for (a, b), c in res.items():
                for k in range(e + 1):
                    key = (a + (x,) * k, b + (x,) * (e - k))
                    nxt[key] = nxt.get(key, 0) + c * _binom(e, k)
            res = nxt
        self._coproduct_cache[u] = res
        return res

    def word_to_factors(self, u: Word) -> list[list[int]]:
        out: list[list[int]] = []
        for x in u:
            i, j = self.gens[x]
            if out and out[-1][0] == i and out[-1][1] == j:
                out[-1][2] += 1
            else:
                out.append([i, j, 1])
        return out

    def factors_to_word(self, factors) -> Word:
        """Parse [[i,j,e],...]; the factors need not be ordered."""
        acc = {(): 1}
        for f in factors:
            if len(f) != 3:
                raise AlgebraError(f"bad factor {f!r}")
            i, j, e = (int(v) for v in f)
            if e < 1:
                raise AlgebraError("exponents must be positive")
            g = self.gen(i, j)
            for _ in range(e):
                nxt: dict = {}
                for w, c in acc.items():
                    for w2, c2 in self.times_letter(w, g).items():
                        nxt[w2] = nxt.get(w2, 0) + c * c2
                acc = nxt
        if len(acc) != 1 or next(iter(acc.values())) != 1:
            raise AlgebraError("monomial factors are not in normal order")
        return next(iter(acc))


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


@lru_cache(maxsize=None)
def gl(n: int) -> GL:
    return GL(n)


def _check_budget(count: int) -> None:
    if count > _budget["terms"]:
        raise ResourceBudgetExceeded(
            f"intermediate result has {count} terms, budget is {_budget['terms']}"
        )


class SeriesElement:
    """Truncated t-series with PBW-ordered tensor coefficients."""

    __slots__ = ("n", "rank", "order", "_terms")

    def __init__(self, n: int, rank: int, order: int, terms: Iterable[Mapping] | None = None):
        if rank < 0:
            raise AlgebraError("rank must be non-negative")
        if order < 0:
            raise AlgebraError("truncation order must be non-negative")
        self.n = n
        self.rank = rank
        self.order = order
        if terms is None:
            self._terms = tuple({} for _ in range(order + 1))
        else:
            terms = list(terms)
            if len(terms) != order + 1:
                raise AlgebraError("need one coefficient map per t-degree")
            self._terms = tuple({k: v for k, v in d.items() if v} for d in terms)

    # construction ---------------------------------------------------------

    @classmethod
    def _raw(cls, n, rank, order, terms) -> "SeriesElement":
        obj = cls.__new__(cls)
        obj.n, obj.rank, obj.order, obj._terms = n, rank, order, tuple(terms)
        return obj

    @classmethod
    def zero(cls, n: int, rank: int = 1, order: int = DEFAULT_ORDER) -> "SeriesElement":
        return cls(n, rank, order)

    @classmethod
    def one(cls, n: int, rank: int = 1, order: int = DEFAULT_ORDER, coeff=1) -> "SeriesElement":
        return cls.scalar(n, coeff, rank=rank, order=order)

    @classmethod
    def scalar(cls, n: int, coeff, rank: int = 1, order: int = DEFAULT_ORDER, t: int = 0):
        if t < 0:
            raise AlgebraError("negative t-power")
        terms = [{} for _ in range(order + 1)]
        c = rational(coeff)
        if t <= order and c:
            terms[t][((),) * rank] = c
        return cls._raw(n, rank, order, terms)

    @classmethod
    def generator(cls, n: int, i: int, j: int, order: int = DEFAULT_ORDER, coeff=1, t: int = 0):
        g = gl(n).gen(i, j)
        if t < 0:
            raise AlgebraError("negative t-power")
        terms = [{} for _ in range(order + 1)]
        c = rational(coeff)
        if t <= order and c:
            terms[t][((g,),)] = c
        return cls._raw(n, 1, order, terms)

    @classmethod
    def diagonal(cls, n: int, coeffs: Mapping[int, object], order: int = DEFAULT_ORDER):
        """sum_i coeffs[i] E_ii (rank 1, t-degree 0)."""
        alg = gl(n)
        d0 = {}
        for i, c in coeffs.items():
            c = rational(c)
            if c:
                d0[((alg.gen(i, i),),)] = c
        return cls._raw(n, 1, order, [d0] + [{} for _ in range(order)])

    @classmethod
    def from_items(cls, n, rank, order, items: Iterable[tuple[int, Legs, object]]):
        terms = [{} for _ in range(order + 1)]
        for d, legs, c in items:
            if d < 0:
                raise AlgebraError("negative t-degree")
            if d > order:
                continue
            c = rational(c)
            terms[d][legs] = terms[d].get(legs, ZERO) + c
        return cls(n, rank, order, terms)

    # inspection -----------------------------------------------------------

    @property
    def algebra(self) -> GL:
        return gl(self.n)

    def degree_terms(self, d: int) -> Mapping:
        return self._terms[d] if d <= self.order else {}

    def items(self) -> Iterator[tuple[int, Legs, mpq]]:
        for d, dd in enumerate(self._terms):
            for legs, c in dd.items():
                yield d, legs, c

    def __len__(self) -> int:
        return sum(len(d) for d in self._terms)

    def is_zero(self) -> bool:
        return not any(self._terms)

    def valuation(self) -> int | None:
        for d, dd in enumerate(self._terms):
            if dd:
                return d
        return None

    def constant_term(self) -> "SeriesElement":
        return SeriesElement._raw(self.n, self.rank, self.order,
                                  [dict(self._terms[0])] + [{} for _ in range(self.order)])

    def is_unit_constant(self) -> bool:
        return self._terms[0] == {((),) * self.rank: ONE}

    def coefficient(self, d: int, legs: Legs) -> mpq:
        return self.degree_terms(d).get(legs, ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesElement):
            return NotImplemented
        return (self.n, self.rank, self.order, self._terms) == (
            other.n, other.rank, other.order, other._terms)

    def __hash__(self):
        return hash((self.n, self.rank, self.order, str(self.canonical_items())))

    # linear structure -----------------------------------------------------

    def _compatible(self, other: "SeriesElement") -> None:
        if not isinstance(other, SeriesElement):
            raise AlgebraError(f"expected SeriesElement, got {type(other).__name__}")
        if self.n != other.n:
            raise AlgebraError(f"size mismatch: n={self.n} vs n={other.n}")
        if self.rank != other.rank:
            raise AlgebraError(f"rank mismatch: {self.rank} vs {other.rank}")
        if self.order != other.order:
            raise AlgebraError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if not isinstance(other, SeriesElement):
            if other == 0:
                return self
            other = SeriesElement.scalar(self.n, other, self.rank, self.order)
        self._compatible(other)
        out = []
        for a, b in zip(self._terms, other._terms):
            if not b:
                out.append(a)
                continue
            d = dict(a)
            for k, v in b.items():
                s = d.get(k, ZERO) + v
                if s:
                    d[k] = s
                else:
                    d.pop(k, None)
            out.append(d)
        return SeriesElement._raw(self.n, self.rank, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return SeriesElement._raw(self.n, self.rank, self.order,
                                  [{k: -v for k, v in d.items()} for d in self._terms])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c, t: int = 0) -> "SeriesElement":
        """Multiply by the scalar c * t^t (dropping overflow)."""
        c = rational(c)
        out = [{} for _ in range(self.order + 1)]
        if c:
            for d in range(self.order + 1 - t):
                out[d + t] = {k: v * c for k, v in self._terms[d].items()}
        return SeriesElement._raw(self.n, self.rank, self.order, out)

    def __mul__(self, other):
        if isinstance(other, SeriesElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def truncate(self, order: int) -> "SeriesElement":
        if order > self.order:
            raise AlgebraError("cannot raise the truncation order")
        return SeriesElement._raw(self.n, self.rank, order, self._terms[: order + 1])

    def with_order(self, order: int) -> "SeriesElement":
        """Truncate, or pad with zeros (exact only if the element is polynomial)."""
        if order <= self.order:
            return self.truncate(order)
        return SeriesElement._raw(self.n, self.rank, order,
                                  list(self._terms) + [{} for _ in range(order - self.order)])

    def permute_legs(self, perm: tuple[int, ...]) -> "SeriesElement":
        """New leg k is old leg perm[k]."""
        if sorted(perm) != list(range(self.rank)):
            raise AlgebraError(f"bad leg permutation {perm}")
        out = [{tuple(legs[p] for p in perm): c for legs, c in d.items()} for d in self._terms]
        return SeriesElement._raw(self.n, self.rank, self.order, out)

    # output ---------------------------------------------------------------

    def canonical_items(self) -> list[tuple[int, list, mpq]]:
        alg = self.algebra
        rows = []
        for d, legs, c in self.items():
            rows.append((d, [alg.word_to_factors(w) for w in legs], c))
        rows.sort(key=lambda r: (r[0], r[1]))
        return rows

    def to_payload(self) -> dict:
        return {
            "rank": self.rank,
            "n": self.n,
            "order": self.order,
            "terms": [
                {"t": d, "legs": legs, "coeff": format_rational(c)}
                for d, legs, c in self.canonical_items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), separators=(",", ":"))

    @classmethod
    def from_payload(cls, payload: Mapping) -> "SeriesElement":
        try:
            rank, n, order = int(payload["rank"]), int(payload["n"]), int(payload["order"])
            alg = gl(n)
            items = []
            for term in payload["terms"]:
                legs = term["legs"]
                if len(legs) != rank:
                    raise AlgebraError("term has wrong number of legs")
                items.append((int(term["t"]), tuple(alg.factors_to_word(f) for f in legs),
                              rational(term["coeff"])))
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed series payload: {exc}") from exc
        for d, _, _ in items:
            if not 0 <= d <= order:
                raise AlgebraError(f"t-degree {d} outside [0, {order}]")
        return cls.from_items(n, rank, order, items)

    @classmethod
    def from_json(cls, text: str) -> "SeriesElement":
        return cls.from_payload(json.loads(text))

    def format_term(self, d: int, legs: Legs, c) -> str:
        alg = self.algebra
        parts = []
        for w in legs:
            if not w:
                parts.append("1")
                continue
            s = []
            for i, j, e in alg.word_to_factors(w):
                s.append(f"E{i},{j}" + (f"^{e}" if e > 1 else ""))
            parts.append("·".join(s))
        tpart = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
        coeff = format_rational(c)
        if coeff.endswith("/1"):
            coeff = coeff[:-2]
        return " ".join(x for x in (coeff, tpart, " ⊗ ".join(parts)) if x)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        rows = []
        for d, legs, c in self.items():
            rows.append((d, legs, c))
        rows.sort(key=lambda r: (r[0], r[1]))
        return " + ".join(self.format_term(*r) for r in rows)

    def __repr__(self) -> str:
        return f"SeriesElement(n={self.n}, rank={self.rank}, order={self.order}, terms={len(self)})"


# ---------------------------------------------------------------------------
# products


def _leg_products(alg: GL, a: Legs, b: Legs) -> list[tuple[Legs, int]]:
    if len(a) == 1:
        return [((w,), c) for w, c in alg.mul(a[0], b[0]).items()]
    per_leg = [list(alg.mul(u, v).items()) for u, v in zip(a, b)]
    if all(len(p) == 1 for p in per_leg):
        c = 1
        for p in per_leg:
            c *= p[0][1]
        return [(tuple(p[0][0] for p in per_leg), c)]
    out = []
    for combo in product(*per_leg):
        c = 1
        for _, k in combo:
            c *= k
        out.append((tuple(w for w, _ in combo), c))
    return out


def multiply(x: SeriesElement, y: SeriesElement) -> SeriesElement:
    """Leg-wise product in U(gl(n))^{(x)rank}, truncated at the common order."""
    x._compatible(y)
    alg = x.algebra
    N = x.order
    out = [dict() for _ in range(N + 1)]
    total = 0
    for d1, tx in enumerate(x._terms):
        if not tx:
            continue
        for d2 in range(N - d1 + 1):
            ty = y._terms[d2]
            if not ty:
                continue
            acc = out[d1 + d2]
            for mx, cx in tx.items():
                for my, cy in ty.items():
                    c = cx * cy
                    for legs, k in _leg_products(alg, mx, my):
                        acc[legs] = acc.get(legs, ZERO) + c * k
            total = sum(len(o) for o in out)
            _check_budget(total)
    out = [{k: v for k, v in d.items() if v} for d in out]
    return SeriesElement._raw(x.n, x.rank, N, out)


def commutator(x: SeriesElement, y: SeriesElement) -> SeriesElement:
    return multiply(x, y) - multiply(y, x)


def commutator_generators(a: tuple[int, int], b: tuple[int, int], n: int,
                          order: int = DEFAULT_ORDER) -> SeriesElement:
    """[E_a, E_b] from the gl(n) structure constants."""
    alg = gl(n)
    ga, gb = alg.gen(*a), alg.gen(*b)
    d0 = {((g,),): mpq(c) for g, c in alg.bracket[ga][gb]}
    return SeriesElement._raw(n, 1, order, [d0] + [{} for _ in range(order)])


def tensor(*elements: SeriesElement) -> SeriesElement:
    """Tensor product; t-degrees add and the result keeps the common order."""
    if not elements:
        raise AlgebraError("tensor of nothing")
    first = elements[0]
    for e in elements[1:]:
        if e.n != first.n or e.order != first.order:
            raise AlgebraError("tensor factors must share n and order")
    acc = first
    for e in elements[1:]:
        N = acc.order
        out = [dict() for _ in range(N + 1)]
        for d1, t1 in enumerate(acc._terms):
            for d2 in range(N - d1 + 1):
                t2 = e._terms[d2]
                if not t1 or not t2:
                    continue
                o = out[d1 + d2]
                for l1, c1 in t1.items():
                    for l2, c2 in t2.items():
                        k = l1 + l2
                        o[k] = o.get(k, ZERO) + c1 * c2
        acc = SeriesElement(acc.n, acc.rank + e.rank, N, out)
    return acc


_PLACEMENTS = {"12": (0, 1), "13": (0, 2), "23": (1, 2)}


def embed_leg(x: SeriesElement, placement: str) -> SeriesElement:
    """Place a rank-2 element into legs 12, 13 or 23 of a rank-3 tensor."""
    if x.rank != 2:
        raise AlgebraError("embed_leg needs a rank-2 element")
    try:
        a, b = _PLACEMENTS[str(placement)]
    except KeyError:
        raise AlgebraError(f"placement must be one of 12, 13, 23, got {placement!r}") from None
    out = []
    for d in x._terms:
        nd = {}
        for (u, v), c in d.items():
            legs = [(), (), ()]
            legs[a], legs[b] = u, v
            nd[tuple(legs)] = c
        out.append(nd)
    return SeriesElement._raw(x.n, 3, x.order, out)


def parse_series(text: str) -> SeriesElement:
    return SeriesElement.from_json(text)


def serialize_series(x: SeriesElement) -> str:
    return x.to_json()


def straighten(n: int, letters: Iterable[tuple[int, int]]) -> dict:
    """Normal form of an arbitrary (unordered) product of matrix units."""
    alg = gl(n)
    acc: dict = {(): 1}
    for i, j in letters:
        g = alg.gen(i, j)
        nxt: dict = {}
        for w, c in acc.items():
            for w2, c2 in alg.times_letter(w, g).items():
                nxt[w2] = nxt.get(w2, 0) + c * c2
        acc = {w: c for w, c in nxt.items() if c}
    return acc


def from_words(n: int, rank: int, order: int, items) -> SeriesElement:
    """Build an element from (t, legs, coeff) with each leg an unordered letter list."""
    terms: list[dict] = [{} for _ in range(order + 1)]
    for d, legs, c in items:
        if len(legs) != rank:
            raise AlgebraError("leg count does not match rank")
        if d < 0:
            raise AlgebraError("negative t-degree")
        if d > order:
            continue
        c = rational(c)
        expanded: dict = {(): c}
        for leg in legs:
            nxt: dict = {}
            for key, v in expanded.items():
                for w, k in straighten(n, leg).items():
                    nxt[key + (w,)] = nxt.get(key + (w,), ZERO) + v * k
            expanded = nxt
        for key, v in expanded.items():
            terms[d][key] = terms[d].get(key, ZERO) + v
    return SeriesElement(n, rank, order, terms)


def normal_form(x: SeriesElement) -> SeriesElement:
    """Re-straighten every word of x; the identity on well-formed elements."""
    alg = x.algebra
    items = []
    for d, legs, c in x.items():
        items.append((d, [[alg.gens[g] for g in w] for w in legs], c))
    return from_words(x.n, x.rank, x.order, items)
