"""Exact evaluation in the fundamental representation.

Every exponent of the constructed twists maps to a nilpotent matrix, so the images
are polynomial in t and all identities can be checked exactly at rational values
of t.  The representation is not faithful on tensor powers of U(gl(n)); a pass here
is a necessary condition only.
"""

from __future__ import annotations

import json
import time
from typing import Iterable

from gmpy2 import mpq

from .core_algebra import AlgebraError, SeriesElement, format_rational, rational
from .expr import Expr, evaluate
from .reports import PAPER_CLAIM, SELF_CONSISTENCY, VerificationReport, stamp

CAVEAT = "necessary condition only: the fundamental representation is not faithful on tensor powers"


class SparseMatrix:
    """Square matrix stored as {row: {col: mpq}} with no explicit zeros."""

    __slots__ = ("dim", "rows")

    def __init__(self, dim: int, rows: dict | None = None):
        self.dim = dim
        self.rows = rows if rows is not None else {}

    @classmethod
    def identity(cls, dim: int, coeff=1) -> "SparseMatrix":
        c = rational(coeff)
        return cls(dim, {i: {i: c} for i in range(dim)} if c else {})

    @classmethod
    def unit(cls, dim: int, i: int, j: int, coeff=1) -> "SparseMatrix":
        return cls(dim, {i: {j: rational(coeff)}})

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[tuple[int, int, object]]) -> "SparseMatrix":
        rows: dict = {}
        for i, j, v in entries:
            r = rows.setdefault(i, {})
            r[j] = r.get(j, mpq(0)) + rational(v)
        return cls(dim, _prune(rows))

    def entries(self) -> list[tuple[int, int, mpq]]:
        return [(i, j, v) for i in sorted(self.rows) for j, v in sorted(self.rows[i].items())]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseMatrix) and self.dim == other.dim and self.rows == other.rows

    def _same(self, other: "SparseMatrix") -> None:
        if self.dim != other.dim:
            raise AlgebraError(f"dimension mismatch {self.dim} vs {other.dim}")

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._same(other)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                tgt[j] = tgt.get(j, mpq(0)) + v
        return SparseMatrix(self.dim, _prune(rows))

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "SparseMatrix":
        c = rational(c)
        if not c:
            return SparseMatrix(self.dim)
        return SparseMatrix(self.dim, {i: {j: v * c for j, v in r.items()} for i, r in self.rows.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._same(other)
        rows: dict = {}
        orows = other.rows
        for i, r in self.rows.items():
            acc: dict = {}
            for k, v in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, w in ok.items():
                    acc[j] = acc.get(j, 0) + v * w
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                rows[i] = acc
        return SparseMatrix(self.dim, rows)

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        d = other.dim
        rows: dict = {}
        for i, r in self.rows.items():
            for k, r2 in other.rows.items():
                rows[i * d + k] = {j * d + l: v * w for j, v in r.items() for l, w in r2.items()}
        return SparseMatrix(self.dim * d, rows)

    def permute_legs(self, base: int, perm: tuple[int, ...]) -> "SparseMatrix":
        """Reorder tensor legs of a matrix on V^{(x)k}; leg q of the result is leg perm[q] of self."""
        k = len(perm)

        def remap(idx: int) -> int:
            digits = []
            for _ in range(k):
                digits.append(idx % base)
                idx //= base
            digits.reverse()
            out = 0
            for q in range(k):
                out = out * base + digits[perm[q]]
            return out

        rows: dict = {}
        for i, r in self.rows.items():
            rows[remap(i)] = {remap(j): v for j, v in r.items()}
        return SparseMatrix(self.dim, rows)

    def to_payload(self) -> dict:
        return {"dim": self.dim, "entries": [[i, j, format_rational(v)] for i, j, v in self.entries()]}

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), separators=(",", ":"))

    @classmethod
    def from_payload(cls, payload) -> "SparseMatrix":
        return cls.from_entries(payload["dim"], ((i, j, v) for i, j, v in payload["entries"]))

    def __repr__(self):
        return f"SparseMatrix(dim={self.dim}, nnz={self.nnz})"


def _prune(rows: dict) -> dict:
    out = {}
    for i, r in rows.items():
        r = {j: v for j, v in r.items() if v}
        if r:
            out[i] = r
    return out


def exp_nilpotent(X: SparseMatrix) -> SparseMatrix:
    """Exact exponential of a nilpotent matrix; raises if X is not nilpotent."""
    result = SparseMatrix.identity(X.dim)
    term = result
    for k in range(1, X.dim + 1):
        term = (term @ X).scale(mpq(1, k))
        if term.is_zero():
            return result
        result = result + term
    raise AlgebraError("exponent is not nilpotent in this representation")


def log_unipotent(U: SparseMatrix) -> SparseMatrix:
    Y = U - SparseMatrix.identity(U.dim)
    result = SparseMatrix(U.dim)
    power = SparseMatrix.identity(U.dim)
    for k in range(1, U.dim + 1):
        power = power @ Y
        if power.is_zero():
            return result
        result = result + power.scale(mpq((-1) ** (k + 1), k))
    raise AlgebraError("argument of the logarithm is not unipotent in this representation")


def inverse_unipotent(U: SparseMatrix) -> SparseMatrix:
    Y = SparseMatrix.identity(U.dim) - U
    result = SparseMatrix.identity(U.dim)
    power = result
    for _ in range(U.dim + 1):
        power = power @ Y
        if power.is_zero():
            return result
        result = result + power
    raise AlgebraError("matrix is not unipotent")


# ---------------------------------------------------------------------------
# the representation


class RepBackend:
    """rho^{(x)copies} composed with the iterated primitive coproduct, at t = t_value."""

    def __init__(self, n: int, t_value, copies: int = 1):
        self.n = n
        self.t = rational(t_value)
        self.copies = copies
        self.dim = n ** copies
        self.memo: dict = {}
        self._gen_cache: dict = {}

    def __call__(self, node: Expr) -> SparseMatrix:
        return evaluate(node, self, self.memo)

    def generator(self, i: int, j: int) -> SparseMatrix:
        key = (i, j)
        hit = self._gen_cache.get(key)
        if hit is None:
            n = self.n
            acc = SparseMatrix(self.dim)
            for q in range(self.copies):
                m = SparseMatrix.identity(n ** q).kron(SparseMatrix.unit(n, i - 1, j - 1))
                m = m.kron(SparseMatrix.identity(n ** (self.copies - q - 1)))
                acc = acc + m
            hit = self._gen_cache[key] = acc
        return hit

    def _tpow(self, c, k):
        return rational(c) * self.t ** k

    def lin(self, node):
        acc = SparseMatrix(self.dim)
        for i, j, c, k in node.terms:
            acc = acc + self.generator(i, j).scale(self._tpow(c, k))
        return acc

    def const(self, coeff, tdeg):
        return SparseMatrix.identity(self.dim, self._tpow(coeff, tdeg))

    def given(self, series: SeriesElement) -> SparseMatrix:
        return self.series(series)

    def series(self, x: SeriesElement) -> SparseMatrix:
        if x.rank != 1:
            raise AlgebraError("rank-1 series expected")
        alg = x.algebra
        acc = SparseMatrix(self.dim)
        for d, (w,), c in x.items():
            m = SparseMatrix.identity(self.dim)
            for g in w:
                m = m @ self.generator(*alg.gens[g])
            acc = acc + m.scale(c * self.t ** d)
        return acc

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a @ b

    def scale(self, a, coeff, tdeg):
        return a.scale(self._tpow(coeff, tdeg))

    def exp(self, a):
        return exp_nilpotent(a)

    def log(self, a):
        return log_unipotent(a)


def fundamental(x, n: int, t_value=1) -> SparseMatrix:
    """rho applied leg-wise to a series (rank 1, 2 or 3) or to a rank-1 recipe."""
    if isinstance(x, Expr):
        return RepBackend(n, t_value)(x)
    if x.rank == 1:
        return RepBackend(n, t_value).series(x)
    be = RepBackend(n, t_value)
    t = rational(t_value)
    alg = x.algebra
    acc = SparseMatrix(n ** x.rank)
    for d, legs, c in x.items():
        m = None
        for w in legs:
            leg = SparseMatrix.identity(n)
            for g in w:
                leg = leg @ be.generator(*alg.gens[g])
            m = leg if m is None else m.kron(leg)
        acc = acc + m.scale(c * t ** d)
    return acc


def _piece_matrix(piece, left: RepBackend, right: RepBackend) -> SparseMatrix:
    acc = None
    for c, k, a, b in piece.terms:
        m = left(a).kron(right(b)).scale(rational(c) * left.t ** k)
        acc = m if acc is None else acc + m
    return acc


def _factor_product(F, left: RepBackend, right: RepBackend, inverse: bool = False) -> SparseMatrix:
    pieces = F.pieces()
    acc = SparseMatrix.identity(left.dim * right.dim)
    seq = reversed(pieces) if inverse else pieces
    for p in seq:
        X = _piece_matrix(p, left, right)
        acc = acc @ exp_nilpotent(X.scale(-1) if inverse else X)
    return acc


def _require_factors(F) -> None:
    if F.exponents() is None:
        raise AlgebraError("representation checks need the factor list of the twist")


def rep_twist(F, n: int | None = None, t_value=1, inverse: bool = False) -> SparseMatrix:
    _require_factors(F)
    n = n or F.n
    be = RepBackend(n, t_value)
    return _factor_product(F, be, be, inverse)


def _entries_residual(M: SparseMatrix, limit: int = 50) -> list:
    out = []
    for i, j, v in M.entries()[:limit]:
        out.append({"row": i, "col": j, "value": format_rational(v)})
    return out


def _report(check, F, diff: SparseMatrix, start, category, t, extra: dict) -> VerificationReport:
    ok = diff.is_zero()
    rep = VerificationReport(check, F.n, None, "pass" if ok else "fail",
                             [] if ok else _entries_residual(diff), 0.0,
                             {"t": format_rational(rational(t)), **extra, **({} if ok else {"nonzero_entries": diff.nnz})},
                             category, CAVEAT)
    return stamp(rep, start)


def rep_cocycle_check(F, n: int | None = None, t_value=1, category: str = SELF_CONSISTENCY) -> VerificationReport:
    """F12 (Delta (x) id)F = F23 (id (x) Delta)F as n^3 x n^3 matrices."""
    start = time.perf_counter()
    _require_factors(F)
    n = n or F.n
    one = RepBackend(n, t_value, 1)
    two = RepBackend(n, t_value, 2)
    Fm = _factor_product(F, one, one)
    I = SparseMatrix.identity(n)
    lhs = Fm.kron(I) @ _factor_product(F, two, one)
    rhs = I.kron(Fm) @ _factor_product(F, one, two)
    return _report("rep-cocycle", F, lhs - rhs, start, category, t_value,
                   {"dim": n ** 3, "twist_nnz": Fm.nnz})


def rep_r_matrix(F, n: int | None = None, t_value=1) -> SparseMatrix:
    _require_factors(F)
    n = n or F.n
    be = RepBackend(n, t_value)
    Fm = _factor_product(F, be, be)
    Finv = _factor_product(F, be, be, inverse=True)
    return Fm.permute_legs(n, (1, 0)) @ Finv


def rep_qybe_check(F, n: int | None = None, t_value=1, category: str = SELF_CONSISTENCY) -> VerificationReport:
    start = time.perf_counter()
    n = n or F.n
    R = rep_r_matrix(F, n, t_value)
    I = SparseMatrix.identity(n)
    R12 = R.kron(I)
    R23 = I.kron(R)
    R13 = R12.permute_legs(n, (0, 2, 1))
    diff = R12 @ R13 @ R23 - R23 @ R13 @ R12
    return _report("rep-qybe", F, diff, start, category, t_value, {"dim": n ** 3})


def dump_matrix(M: SparseMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(M.to_json())
        fh.write("\n")


__all__ = [
    "CAVEAT",
    "SparseMatrix",
    "exp_nilpotent",
    "log_unipotent",
    "inverse_unipotent",
    "fundamental",
    "rep_twist",
    "rep_r_matrix",
    "rep_cocycle_check",
    "rep_qybe_check",
    "dump_matrix",
    "PAPER_CLAIM",
]
