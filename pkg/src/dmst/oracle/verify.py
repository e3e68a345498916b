"""Certify that a basis family freely generates the invariants, bidegree by bidegree."""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..algebra import SuperElement, set_to_mask
from ..groups import SubgroupSpec, act, generators, normalize_twist
from ..invariants import BasisFamily
from ..series import expand, module_series
from .fixed import fixed_space
from .linalg import linalg_for


@dataclass
class VerifyReport:
    family: str
    spec: str
    k: int
    T: int
    fixed: bool = True
    independent: bool = True
    spanning: bool = True
    failure: dict | None = None
    cells: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.fixed and self.independent and self.spanning

    def _fail(self, check: str, bidegree, witness: str, detail: str = "") -> None:
        setattr(self, check, False)
        if self.failure is None:
            self.failure = {"check": check, "bidegree": list(bidegree) if bidegree else None, "witness": witness, "detail": detail}

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "spec": self.spec,
            "k": self.k,
            "T": self.T,
            "checks": {"fixed": self.fixed, "independent": self.independent, "spanning": self.spanning},
            "passed": self.passed,
            "failure": self.failure,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _base_monomials(degrees: list[int], total: int):
    """Exponent vectors e with sum(e_i * degrees[i]) == total."""
    def rec(idx: int, rest: int):
        if idx == len(degrees):
            if rest == 0:
                yield ()
            return
        d = degrees[idx]
        for e in range(rest // d + 1):
            for tail in rec(idx + 1, rest - e * d):
                yield (e,) + tail

    yield from rec(0, total)


class _BaseProducts:
    """Memoized products of base-ring generators, built one factor at a time."""

    def __init__(self, base: list[SuperElement], one: SuperElement):
        self.base = base
        self.cache: dict[tuple[int, ...], SuperElement] = {(0,) * len(base): one}

    def __call__(self, exps: tuple[int, ...]) -> SuperElement:
        v = self.cache.get(exps)
        if v is None:
            last = max(i for i, e in enumerate(exps) if e)
            smaller = exps[:last] + (exps[last] - 1,) + exps[last + 1:]
            v = self(smaller) * self.base[last]
            self.cache[exps] = v
        return v


def _vectorize(elements: list[SuperElement], monos, la) -> np.ndarray:
    index = {(m.x, set_to_mask(m.y)): pos for pos, m in enumerate(monos)}
    M = la.zeros((len(monos), len(elements)))
    for c, el in enumerate(elements):
        for key, code in el.terms.items():
            M[index[key], c] = code
    return M


def _exps_name(exps) -> str:
    return "*".join(f"b{i + 1}^{e}" for i, e in enumerate(exps) if e) or "1"


def verify_free_basis(family: BasisFamily, spec: SubgroupSpec, k: int, T: int, *, torus: bool = True) -> VerifyReport:
    """Three checks up to t-degree T.

    fixed: every family generator is invariant under the twisted action;
    independent: base-monomial multiples of the generators are linearly
    independent in every bidegree; spanning: they span the invariants there.
    """
    k = normalize_twist(k, spec.field)
    report = VerifyReport(family.label, spec.label(), k, T)
    for g in generators(spec):
        for el, bd, name in family.generators:
            if act(g, el, k) != el:
                report._fail("fixed", bd, str(el), f"{name} moved by {g}")
                break
        if not report.fixed:
            break

    la = linalg_for(spec.field)
    predicted = expand(module_series(family), T)
    products = _BaseProducts(family.base_generators, family.algebra.one())
    degrees = list(family.base_degrees)
    for j in range(spec.n + 1):
        for i in range(T + 1):
            elements, names = [], []
            for el, (a, b), name in family.generators:
                if b != j or a > i:
                    continue
                for exps in _base_monomials(degrees, i - a):
                    elements.append(products(exps) * el)
                    names.append(f"{name}*{_exps_name(exps)}")
            expected = predicted[(i, j)]
            monos, W = fixed_space(spec, k, (i, j), torus=torus)
            M = _vectorize(elements, monos, la)
            rank = la.rank(M.T) if elements else 0
            report.cells.append(((i, j), len(elements), rank, W.shape[1]))
            if len(elements) != expected or rank != len(elements):
                if report.independent:
                    first_dep = next(
                        (names[c] for c in range(len(elements)) if la.rank(M[:, : c + 1].T) <= c),
                        names[-1] if names else "",
                    )
                    report._fail("independent", (i, j), first_dep, f"{len(elements)} products, rank {rank}, expected {expected}")
            if rank != W.shape[1] and report.spanning:
                witness = ""
                for c in range(W.shape[1]):
                    stacked = np.concatenate([M, W[:, c : c + 1]], axis=1)
                    if la.rank(stacked.T) > rank:
                        witness = str(_devectorize(W[:, c], monos, family))
                        break
                report._fail("spanning", (i, j), witness, f"span has dim {rank}, invariants have dim {W.shape[1]}")
    return report


def _devectorize(column: np.ndarray, monos, family: BasisFamily) -> SuperElement:
    A = family.algebra
    terms = {}
    for pos in np.flatnonzero(column):
        m = monos[pos]
        terms[(m.x, set_to_mask(m.y))] = int(column[pos])
    return A.element(terms)
