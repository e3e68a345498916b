"""Invariant dimensions per bidegree by exact null-space computation."""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from ..algebra import SuperAlgebra, SuperMonomial, Substitution, set_to_mask
from ..errors import DegreeTooLargeError
from ..gf import Field
from ..groups import (
    GroupMatrix,
    SubgroupSpec,
    enumerate_subgroup,
    generators,
    normalize_twist,
    substitution_for,
)
from ..series import SeriesTable, compositions
from .linalg import linalg_for

MONOMIAL_BOUND = 20_000


def _weak_compositions(total: int, parts: int):
    """Exponent vectors of the given total, in descending lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def graded_monomials(n: int, bidegree: tuple[int, int], field: Field | None = None) -> list[SuperMonomial]:
    """Basis x^a y_S of S^i(V) (x) wedge^j(V); ``field`` is accepted for symmetry and unused."""
    i, j = bidegree
    if i < 0 or not 0 <= j <= n:
        return []
    ys = list(itertools.combinations(range(1, n + 1), j))
    return [SuperMonomial(x, S) for x in _weak_compositions(i, n) for S in ys]


def monomial_count(n: int, bidegree: tuple[int, int]) -> int:
    i, j = bidegree
    if i < 0 or not 0 <= j <= n:
        return 0
    return comb(i + n - 1, n - 1) * comb(n, j)


def _torus_allowed(spec: SubgroupSpec, k: int, mono: SuperMonomial) -> bool:
    """Whether the diagonal torus of ``spec`` fixes this monomial under the Det^k twist."""
    q1 = spec.field.q - 1
    if q1 == 1 or spec.kind == "U":
        return True
    S = set(mono.y)
    weights = [(a + (idx + 1 in S) + k) % q1 for idx, a in enumerate(mono.x)]
    if spec.kind in ("GL", "P"):
        return not any(weights)
    if spec.kind == "SL":
        return len(set(weights)) == 1
    comp = spec.composition
    return all(len({weights[v] for v in comp.block_range(i)}) == 1 for i in range(1, comp.length + 1))


@lru_cache(maxsize=None)
def _substitution(g: GroupMatrix, algebra: SuperAlgebra) -> Substitution:
    return substitution_for(g, algebra)


@lru_cache(maxsize=None)
def _group_elements(spec: SubgroupSpec, all_elements: bool) -> tuple[GroupMatrix, ...]:
    if all_elements:
        return tuple(g for g in enumerate_subgroup(spec) if not g.is_identity())
    return tuple(generators(spec))


def _action_columns(g: GroupMatrix, algebra: SuperAlgebra, k: int, monos, index, cols, la) -> np.ndarray:
    """Matrix of f -> det(g)^k g.f restricted to the monomials at positions ``cols``."""
    F = algebra.field
    sub = _substitution(g, algebra)
    scale = F.pow(g.det_code(), k) if k else 1
    out = la.zeros((len(monos), len(cols)))
    for c, pos in enumerate(cols):
        m = monos[pos]
        image = sub.apply_terms({(m.x, set_to_mask(m.y)): scale})
        for key, code in image.items():
            out[index[key], c] = code
    return out


def fixed_space(
    spec: SubgroupSpec,
    k: int,
    bidegree: tuple[int, int],
    *,
    torus: bool = True,
    all_elements: bool = False,
    bound: int = MONOMIAL_BOUND,
    group=None,
) -> tuple[list[SuperMonomial], np.ndarray]:
    """(monomial basis, matrix whose columns span the twisted invariants in that basis).

    The invariant subspace is intersected one group element at a time.  With
    ``torus`` the search starts from the monomials the diagonal torus fixes,
    which contain every invariant since the torus acts diagonally.
    """
    n = spec.n
    if monomial_count(n, bidegree) > bound:
        raise DegreeTooLargeError(f"{monomial_count(n, bidegree)} monomials at {bidegree} exceed {bound}")
    k = normalize_twist(k, spec.field)
    la = linalg_for(spec.field)
    algebra = SuperAlgebra(spec.field, n)
    monos = graded_monomials(n, bidegree)
    index = {(m.x, set_to_mask(m.y)): pos for pos, m in enumerate(monos)}
    start = [p for p, m in enumerate(monos) if not torus or _torus_allowed(spec, k, m)]
    W = la.zeros((len(monos), len(start)))
    W[start, np.arange(len(start))] = 1
    elements = group if group is not None else _group_elements(spec, all_elements)
    for g in elements:
        if W.shape[1] == 0:
            break
        support = np.flatnonzero(W.any(axis=1))
        rho = _action_columns(g, algebra, k, monos, index, support, la)
        moved = la.sub(la.matmul(rho, W[support]), W)
        W = la.matmul(W, la.nullspace(moved))
    return monos, W


def fixed_dim(spec: SubgroupSpec, k: int, bidegree: tuple[int, int], **kw) -> int:
    """dim over F_q of the Det^k-twisted invariants of bidegree (i, j)."""
    return fixed_space(spec, k, bidegree, **kw)[1].shape[1]


@dataclass(eq=False)
class DimTable(SeriesTable):
    """Per-bidegree dimensions for 0 <= i <= T, 0 <= j <= n."""

    label: str = ""
    n: int = 0
    q: int = 0
    k: int = 0

    def rows(self, s_max: int | None = None):
        return super().rows(self.n if s_max is None else s_max)

    def to_dict(self) -> dict:
        return {
            "spec": self.label,
            "q": self.q,
            "k": self.k,
            "T": self.T,
            "dims": [[t, s, int(v)] for t, s, v in self.rows()],
        }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("DMST_THREADS", "1")))
    except ValueError:
        return 1


def hilbert_table(spec: SubgroupSpec, k: int, T: int, *, torus: bool = True, all_elements: bool = False, threads: int | None = None) -> DimTable:
    """fixed_dim for every cell 0 <= i <= T, 0 <= j <= n."""
    k = normalize_twist(k, spec.field)
    cells = [(i, j) for i in range(T + 1) for j in range(spec.n + 1)]

    def cell(c):
        return fixed_dim(spec, k, c, torus=torus, all_elements=all_elements)

    workers = threads or _threads()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            dims = list(pool.map(cell, cells))
    else:
        dims = [cell(c) for c in cells]
    coeffs = {c: d for c, d in zip(cells, dims) if d}
    return DimTable(T, coeffs, label=spec.label(), n=spec.n, q=spec.field.q, k=k)


def steinberg_table(n: int, field: Field, k: int, T: int, **kw) -> DimTable:
    """Alternating sum over compositions I of n of the P_I tables (Curtis)."""
    k = normalize_twist(k, field)
    total: dict = {}
    for I in compositions(n):
        table = hilbert_table(SubgroupSpec.P(field, I), k, T, **kw)
        sign = 1 if (n - I.length) % 2 == 0 else -1
        for key, v in table.coeffs.items():
            total[key] = total.get(key, 0) + sign * v
    coeffs = {key: v for key, v in total.items() if v}
    return DimTable(T, coeffs, label=f"St_{n}({field.q})", n=n, q=field.q, k=k)

