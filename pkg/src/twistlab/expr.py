"""Symbolic recipes for rank-1 elements of U(gl(n))[[t]].

Twist factors are kept as recipes rather than only as expanded series so that the
same object can be evaluated three ways: as a truncated PBW series, as an exact
matrix in a representation (where every exponent is nilpotent), and as a list of
Lie algebra directions for carrier analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Protocol

from gmpy2 import mpq

from .core_algebra import AlgebraError, SeriesElement, format_rational, rational
from .hopf import exp_series, log_series


def _fmt_coeff(c: mpq, tdeg: int) -> str:
    s = format_rational(c)
    if s.endswith("/1"):
        s = s[:-2]
    if tdeg:
        tt = "t" if tdeg == 1 else f"t^{tdeg}"
        s = tt if s == "1" else ("-" + tt if s == "-1" else f"{s}{tt}")
    return s


class Expr:
    """Base class; concrete nodes are frozen dataclasses (hashable, comparable)."""

    def __add__(self, other: "Expr") -> "Expr":
        return Sum((self, other))

    def __sub__(self, other: "Expr") -> "Expr":
        return Sum((self, Scaled(mpq(-1), 0, other)))

    def __neg__(self) -> "Expr":
        return Scaled(mpq(-1), 0, self)

    def __mul__(self, other: "Expr") -> "Expr":
        return Prod((self, other))

    def scaled(self, c, tdeg: int = 0) -> "Expr":
        return Scaled(rational(c), tdeg, self)


@dataclass(frozen=True)
class Lin(Expr):
    """sum c * t^k * E_ij, a linear element of gl(n) with scalar t-powers."""

    terms: tuple  # ((i, j, coeff, tdeg), ...)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, j, c, k in self.terms:
            cs = _fmt_coeff(c, k)
            g = f"E{i},{j}"
            parts.append(g if cs == "1" else ("-" + g if cs == "-1" else f"{cs}·{g}"))
        s = " + ".join(parts).replace("+ -", "- ")
        return s if len(parts) == 1 else f"({s})"

    def diagonal_vector(self, n: int) -> list[mpq] | None:
        vec = [mpq(0)] * n
        hit = False
        for i, j, c, k in self.terms:
            if i == j:
                vec[i - 1] += c
                hit = True
        return vec if hit else None

    def off_diagonal(self) -> set[tuple[int, int]]:
        return {(i, j) for i, j, c, _ in self.terms if i != j and c}


@dataclass(frozen=True)
class Const(Expr):
    coeff: mpq
    tdeg: int = 0

    def __str__(self):
        return _fmt_coeff(self.coeff, self.tdeg)


@dataclass(frozen=True)
class Sum(Expr):
    parts: tuple

    def __str__(self):
        s = " + ".join(str(p) for p in self.parts).replace("+ -", "- ")
        return f"({s})"


@dataclass(frozen=True)
class Prod(Expr):
    parts: tuple

    def __str__(self):
        return "·".join(str(p) for p in self.parts)


@dataclass(frozen=True)
class Scaled(Expr):
    coeff: mpq
    tdeg: int
    arg: Expr

    def __str__(self):
        cs = _fmt_coeff(self.coeff, self.tdeg)
        if cs == "1":
            return str(self.arg)
        if cs == "-1":
            return f"-{self.arg}"
        return f"{cs}·{self.arg}"


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr

    def __str__(self):
        return f"exp({self.arg})"


@dataclass(frozen=True)
class Log(Expr):
    arg: Expr

    def __str__(self):
        return f"ln({self.arg})"


@dataclass(frozen=True)
class Named(Expr):
    """A labelled subexpression (σ_{l,k}, Ĥ_l, ...); evaluation is transparent."""

    label: str
    arg: Expr

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Given(Expr):
    """A literal truncated series (evaluates exactly in any representation)."""

    series: SeriesElement
    label: str = "x"

    def __hash__(self):
        return hash(("given", self.label, self.series.to_json()))

    def __str__(self):
        return self.label


def gen(i: int, j: int, coeff=1, tdeg: int = 0) -> Lin:
    return Lin(((i, j, rational(coeff), tdeg),))


def diag(n: int, coeffs: Mapping[int, object], identity=0) -> Lin:
    """sum_i coeffs[i] E_ii + identity * I, collected per E_ii."""
    total = {i: rational(identity) for i in range(1, n + 1)}
    for i, c in coeffs.items():
        total[i] += rational(c)
    return Lin(tuple((i, i, c, 0) for i, c in sorted(total.items()) if c))


def lin_sum(*parts: Lin) -> Lin:
    acc: dict = {}
    for p in parts:
        for i, j, c, k in p.terms:
            acc[(i, j, k)] = acc.get((i, j, k), mpq(0)) + c
    return Lin(tuple((i, j, c, k) for (i, j, k), c in sorted(acc.items()) if c))


def lin_scale(p: Lin, c) -> Lin:
    c = rational(c)
    return Lin(tuple((i, j, v * c, k) for i, j, v, k in p.terms if v * c))


ONE_EXPR = Const(mpq(1))


# ---------------------------------------------------------------------------
# evaluation


class Backend(Protocol):
    def lin(self, node: Lin): ...
    def const(self, coeff: mpq, tdeg: int): ...
    def given(self, series: SeriesElement): ...
    def add(self, a, b): ...
    def mul(self, a, b): ...
    def scale(self, a, coeff: mpq, tdeg: int): ...
    def exp(self, a): ...
    def log(self, a): ...


def evaluate(node: Expr, backend: Backend, memo: dict | None = None):
    if memo is None:
        memo = {}
    key = node
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(node, Lin):
        val = backend.lin(node)
    elif isinstance(node, Const):
        val = backend.const(node.coeff, node.tdeg)
    elif isinstance(node, Given):
        val = backend.given(node.series)
    elif isinstance(node, Sum):
        parts = [evaluate(p, backend, memo) for p in node.parts]
        val = parts[0]
        for p in parts[1:]:
            val = backend.add(val, p)
    elif isinstance(node, Prod):
        parts = [evaluate(p, backend, memo) for p in node.parts]
        val = parts[0]
        for p in parts[1:]:
            val = backend.mul(val, p)
    elif isinstance(node, Scaled):
        val = backend.scale(evaluate(node.arg, backend, memo), node.coeff, node.tdeg)
    elif isinstance(node, Exp):
        val = backend.exp(evaluate(node.arg, backend, memo))
    elif isinstance(node, Log):
        val = backend.log(evaluate(node.arg, backend, memo))
    elif isinstance(node, Named):
        val = evaluate(node.arg, backend, memo)
    else:
        raise AlgebraError(f"unknown expression node {type(node).__name__}")
    memo[key] = val
    return val


class SeriesBackend:
    """Evaluate recipes as truncated PBW series in U(gl(n))[[t]]/t^{N+1}."""

    def __init__(self, n: int, order: int):
        self.n = n
        self.order = order
        self.memo: dict = {}

    def __call__(self, node: Expr) -> SeriesElement:
        return evaluate(node, self, self.memo)

    def lin(self, node: Lin) -> SeriesElement:
        acc = SeriesElement.zero(self.n, 1, self.order)
        for i, j, c, k in node.terms:
            if k < 0:
                raise AlgebraError(f"negative t-power on E{i},{j}")
            acc = acc + SeriesElement.generator(self.n, i, j, self.order, coeff=c, t=k)
        return acc

    def const(self, coeff, tdeg):
        return SeriesElement.scalar(self.n, coeff, 1, self.order, t=tdeg)

    def given(self, series):
        if series.n != self.n or series.rank != 1:
            raise AlgebraError("literal series does not fit this backend")
        if series.order < self.order:
            raise AlgebraError("literal series is truncated below the requested order")
        return series.truncate(self.order)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def scale(self, a, coeff, tdeg):
        if tdeg < 0:
            raise AlgebraError("negative t-power in a scalar")
        return a.scale(coeff, tdeg)

    def exp(self, a):
        return exp_series(a)

    def log(self, a):
        return log_series(a)


# ---------------------------------------------------------------------------
# structure


def walk(node: Expr):
    yield node
    if isinstance(node, (Sum, Prod)):
        for p in node.parts:
            yield from walk(p)
    elif isinstance(node, (Scaled, Exp, Log, Named)):
        yield from walk(node.arg)


def directions(node: Expr, n: int) -> tuple[set[tuple[int, int]], list[list[mpq]]]:
    """Root directions and diagonal (Cartan) directions named by a recipe."""
    roots: set[tuple[int, int]] = set()
    cartans: list[list[mpq]] = []
    for sub in walk(node):
        if isinstance(sub, Lin):
            roots |= sub.off_diagonal()
            vec = sub.diagonal_vector(n)
            if vec is not None and any(vec):
                cartans.append(vec)
        elif isinstance(sub, Given):
            alg = sub.series.algebra
            for _, legs, _ in sub.series.items():
                for w in legs:
                    for g in w:
                        i, j = alg.gens[g]
                        if i != j:
                            roots.add((i, j))
                        else:
                            vec = [mpq(0)] * n
                            vec[i - 1] = mpq(1)
                            cartans.append(vec)
    return roots, cartans
