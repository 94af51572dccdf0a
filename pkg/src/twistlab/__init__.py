"""Exact construction and verification of parabolic twists for U(sl(n))."""

from __future__ import annotations

from .core_algebra import (
    AlgebraError,
    ResourceBudgetExceeded,
    SeriesElement,
    commutator,
    commutator_generators,
    embed_leg,
    multiply,
    tensor,
)

__all__ = [
    "AlgebraError",
    "ResourceBudgetExceeded",
    "SeriesElement",
    "commutator",
    "commutator_generators",
    "embed_leg",
    "multiply",
    "tensor",
]
__version__ = "0.1.0"
