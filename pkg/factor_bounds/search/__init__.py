"""Constructions, verification and exhaustive searches over factorizations."""

from factor_bounds.search.cases import (
    CaseReport,
    FactorizationCase,
    HeightRecord,
    ratio,
    verify_case,
    weakly_irreducible,
)

__all__ = [
    "CaseReport",
    "FactorizationCase",
    "HeightRecord",
    "ratio",
    "verify_case",
    "weakly_irreducible",
]
