"""Twisted Dickson-Mui invariants of parabolic subgroups of GL_n(q).

Exact arithmetic in F_q[x_1..x_n] (x) E[y_1..y_n], the classical invariants
and free bases for P_I, closed-form Hilbert series, and a linear-algebra
oracle that recomputes every table from scratch.
"""
from .algebra import SuperAlgebra, SuperElement, SuperMonomial, exact_divide, row_det, substitute
from .errors import DMSTError
from .gf import Field, FieldElement, arith, enumerate_field, field_create, frobenius, gf
from .groups import Composition, GroupMatrix, SubgroupSpec, act, enumerate_subgroup, generators
from .invariants import BasisFamily, basis_family, dickson_Q, dickson_VL, mui_M, parabolic_gens
from .series import RationalSeries, SeriesTable, closed_form, compositions, curtis_sum, expand, module_series, rational_equal

__version__ = "0.1.0"

__all__ = [
    "BasisFamily",
    "Composition",
    "DMSTError",
    "Field",
    "FieldElement",
    "GroupMatrix",
    "RationalSeries",
    "SeriesTable",
    "SubgroupSpec",
    "SuperAlgebra",
    "SuperElement",
    "SuperMonomial",
    "act",
    "arith",
    "basis_family",
    "closed_form",
    "compositions",
    "curtis_sum",
    "dickson_Q",
    "dickson_VL",
    "enumerate_field",
    "enumerate_subgroup",
    "exact_divide",
    "expand",
    "field_create",
    "frobenius",
    "generators",
    "gf",
    "module_series",
    "mui_M",
    "parabolic_gens",
    "rational_equal",
    "row_det",
    "substitute",
]
