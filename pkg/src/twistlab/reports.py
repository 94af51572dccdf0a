"""Report records shared by the symbolic and representation checkers."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from .core_algebra import SeriesElement, format_rational

PAPER_CLAIM = "paper-claim"
SELF_CONSISTENCY = "self-consistency"


def series_residual(x: SeriesElement, limit: int | None = None) -> list[dict]:
    """Canonically sorted (t, legs, coeff) triples of a nonzero difference."""
    out = []
    for d, legs, c in x.canonical_items():
        out.append({"t": d, "legs": legs, "coeff": format_rational(c)})
        if limit is not None and len(out) >= limit:
            break
    return out


@dataclass
class VerificationReport:
    check: str
    n: int
    order: int | None
    status: str
    residual: list = field(default_factory=list)
    ms: float = 0.0
    stats: dict = field(default_factory=dict)
    category: str = SELF_CONSISTENCY
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @classmethod
    def from_difference(cls, check: str, diff: SeriesElement, *, category: str = SELF_CONSISTENCY,
                        note: str = "", stats: dict | None = None, limit: int | None = 200) -> "VerificationReport":
        status = "pass" if diff.is_zero() else "fail"
        st = dict(stats or {})
        if status == "fail":
            st.setdefault("residual_terms", len(diff))
            st.setdefault("first_order", diff.valuation())
        return cls(check, diff.n, diff.order, status, series_residual(diff, limit), 0.0, st, category, note)

    @classmethod
    def from_bool(cls, check: str, n: int, order: int | None, ok: bool, *, category: str = SELF_CONSISTENCY,
                  note: str = "", residual: list | None = None) -> "VerificationReport":
        return cls(check, n, order, "pass" if ok else "fail", [] if ok else list(residual or []), 0.0, {},
                   category, note)

    @property
    def first_order(self) -> int | None:
        return self.stats.get("first_order")

    def to_payload(self, timing: bool = False) -> dict:
        out = {
            "check": self.check,
            "n": self.n,
            "order": self.order,
            "status": self.status,
            "residual": self.residual,
            "category": self.category,
        }
        if self.note:
            out["note"] = self.note
        if self.stats:
            out["stats"] = self.stats
        if timing:
            out["ms"] = round(self.ms, 3)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_payload(timing), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    def line(self) -> str:
        extra = ""
        if not self.passed and self.first_order is not None:
            extra = f" (first nonzero order t^{self.first_order})"
        return f"{self.status.upper():4}  {self.check}{extra}"


@contextmanager
def timed(report_holder: list):
    """Stamp wall time (ms) onto every report appended to ``report_holder`` inside the block."""
    start = time.perf_counter()
    before = len(report_holder)
    yield
    ms = (time.perf_counter() - start) * 1000
    for r in report_holder[before:]:
        r.ms = ms


def stamp(report: VerificationReport, start: float) -> VerificationReport:
    report.ms = (time.perf_counter() - start) * 1000
    return report
