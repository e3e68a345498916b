"""Brute-force ground truth by linear algebra over F_q."""
from .fixed import (
    MONOMIAL_BOUND,
    DimTable,
    fixed_dim,
    fixed_space,
    graded_monomials,
    hilbert_table,
    monomial_count,
    steinberg_table,
)
from .linalg import FqLinalg, linalg_for
from .verify import VerifyReport, verify_free_basis

__all__ = [
    "MONOMIAL_BOUND",
    "DimTable",
    "FqLinalg",
    "fixed_dim",
    "fixed_space",
    "graded_monomials",
    "hilbert_table",
    "linalg_for",
    "monomial_count",
    "steinberg_table",
    "VerifyReport",
    "verify_free_basis",
]
