"""Dickson, Mui and parabolic invariants, and the free-module basis families.

Every constructor takes a :class:`SuperAlgebra` (field and number of
variables) and is memoized on its arguments.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .algebra import SuperAlgebra, SuperElement, exact_divide, row_det, substitute
from .errors import (
    BadIndexListError,
    FieldTooLargeError,
    IndexOutOfRangeError,
    TwistOutOfRangeError,
)
from .gf import ENUMERATION_BOUND
from .groups import Composition

PRODUCT_BOUND = 1 << 12


def _check_m(A: SuperAlgebra, m: int, lo: int = 1) -> None:
    if not lo <= m <= A.n:
        raise IndexOutOfRangeError(f"m = {m} outside [{lo}, {A.n}]")


def moore_det(A: SuperAlgebra, exponents, variables) -> SuperElement:
    """det[x_v^(q^e)] with rows e in ``exponents`` and columns v in ``variables``."""
    exponents, variables = list(exponents), list(variables)
    if not exponents:
        return A.one()
    q = A.field.q
    rows = [[A.x(v, q**e) for v in variables] for e in exponents]
    return row_det(rows)


@lru_cache(maxsize=None)
def dickson_V(A: SuperAlgebra, m: int) -> SuperElement:
    """V_m = prod over c in F_q^(m-1) of (c_1 x_1 + ... + c_{m-1} x_{m-1} + x_m)."""
    _check_m(A, m)
    F = A.field
    if F.q ** (m - 1) > PRODUCT_BOUND or F.q > ENUMERATION_BOUND:
        raise FieldTooLargeError(f"V_{m} needs {F.q}^{m - 1} linear factors")
    n = A.n
    out = A.one()
    for cs in itertools.product(range(F.q), repeat=m - 1):
        terms = {}
        for a, c in enumerate(cs):
            if c:
                e = [0] * n
                e[a] = 1
                terms[(tuple(e), 0)] = c
        e = [0] * n
        e[m - 1] = 1
        terms[(tuple(e), 0)] = 1
        out = out * A.element(terms)
    return out


@lru_cache(maxsize=None)
def dickson_L(A: SuperAlgebra, m: int, method: str = "determinant") -> SuperElement:
    """L_m as the Moore determinant or as the product V_1 ... V_m (L_0 = 1)."""
    if m == 0:
        return A.one()
    _check_m(A, m)
    if method == "determinant":
        return moore_det(A, range(m), range(1, m + 1))
    if method == "product":
        out = A.one()
        for i in range(1, m + 1):
            out = out * dickson_V(A, i)
        return out
    raise ValueError(f"unknown method {method!r}")


def dickson_VL(A: SuperAlgebra, m: int) -> tuple[SuperElement, SuperElement]:
    """(V_m, L_m); L_m is computed both as a product and a determinant."""
    V = dickson_V(A, m)
    L = dickson_L(A, m, "product")
    if L != dickson_L(A, m, "determinant"):
        raise AssertionError(f"L_{m}: product and Moore determinant disagree")
    return V, L


@lru_cache(maxsize=None)
def dickson_L_hat(A: SuperAlgebra, m: int, k: int) -> SuperElement:
    """L_{m,k}: the (m+1)-row Moore matrix with the q^k row omitted."""
    _check_m(A, m)
    if not 0 <= k <= m:
        raise IndexOutOfRangeError(f"k = {k} outside [0, {m}]")
    return moore_det(A, [e for e in range(m + 1) if e != k], range(1, m + 1))


@lru_cache(maxsize=None)
def dickson_Q(A: SuperAlgebra, m: int, k: int, method: str = "quotient") -> SuperElement:
    """The Dickson invariant Q_{m,k}, with Q_{m,m} = 1 and Q_{m,k} = 0 for k < 0."""
    if k < 0:
        return A.zero()
    if k == m:
        return A.one()
    if k > m:
        raise IndexOutOfRangeError(f"k = {k} > m = {m}")
    _check_m(A, m)
    q = A.field.q
    if method == "quotient":
        return exact_divide(dickson_L_hat(A, m, k), dickson_L(A, m))
    if method == "recursion":
        if k == 0:
            return dickson_L(A, m) ** (q - 1)
        V = dickson_V(A, m) ** (q - 1)
        return dickson_Q(A, m - 1, k, method) * V + dickson_Q(A, m - 1, k - 1, method) ** q
    raise ValueError(f"unknown method {method!r}")


def dickson_V_from_Q(A: SuperAlgebra, m: int) -> SuperElement:
    """V_m = x_m^(q^(m-1)) + sum_k (-1)^(m-1-k) Q_{m-1,k} x_m^(q^k)."""
    _check_m(A, m)
    q = A.field.q
    out = A.x(m, q ** (m - 1))
    for k in range(m - 1):
        term = dickson_Q(A, m - 1, k) * A.x(m, q**k)
        out = out - term if (m - 1 - k) % 2 else out + term
    return out


def _check_blist(m: int, blist) -> tuple[int, ...]:
    b = tuple(int(v) for v in blist)
    if any(v < 0 or v > m - 1 for v in b) or any(x >= y for x, y in zip(b, b[1:])):
        raise BadIndexListError(f"b-list {b} must be strictly increasing in [0, {m - 1}]")
    return b


@lru_cache(maxsize=None)
def mui_M(A: SuperAlgebra, m: int, blist: tuple[int, ...] = ()) -> SuperElement:
    """Mui's element M_{m;b_1..b_j}.

    Expanded by Laplace along the j repeated y-rows, which gives Mui's
    1/j!-normalized determinant without dividing by j! (zero in F_q for j >= p).
    """
    if m == 0:
        if blist:
            raise BadIndexListError("M_0 takes no indices")
        return A.one()
    _check_m(A, m)
    b = _check_blist(m, blist)
    if not b:
        return dickson_L(A, m)
    j = len(b)
    exps = [e for e in range(m) if e not in b]
    out = A.zero()
    for S in itertools.combinations(range(1, m + 1), j):
        rest = [c for c in range(1, m + 1) if c not in S]
        minor = moore_det(A, exps, rest)
        if minor.is_zero():
            continue
        term = A.monomial((), S) * minor
        shuffle = sum(s - (idx + 1) for idx, s in enumerate(S))
        out = out - term if shuffle % 2 else out + term
    return out


# -- parabolic invariants -----------------------------------------------------------

def _as_comp(I) -> Composition:
    return I if isinstance(I, Composition) else Composition(tuple(I))


def _check_block(A: SuperAlgebra, I: Composition, i: int, j: int | None = None) -> None:
    if I.n != A.n:
        raise IndexOutOfRangeError(f"composition {I} does not sum to n = {A.n}")
    if not 1 <= i <= I.length:
        raise IndexOutOfRangeError(f"block {i} outside [1, {I.length}]")
    if j is not None and not 1 <= j <= I.parts[i - 1]:
        raise IndexOutOfRangeError(f"j = {j} outside [1, {I.parts[i - 1]}]")


@lru_cache(maxsize=None)
def parabolic_v(A: SuperAlgebra, I: Composition, i: int, j: int) -> SuperElement:
    """v_{i,j} expanded through the Dickson invariants Q_{m_{i-1},k}."""
    I = _as_comp(I)
    _check_block(A, I, i, j)
    q = A.field.q
    mp = I.partial_sums[i - 1]
    var = mp + j
    out = A.x(var, q**mp)
    for k in range(mp):
        term = dickson_Q(A, mp, k) * A.x(var, q**k)
        out = out - term if (mp - k) % 2 else out + term
    return out


def parabolic_v_product(A: SuperAlgebra, I: Composition, i: int, j: int) -> SuperElement:
    """v_{i,j} as the product over c in F_q^(m_{i-1}) of (c.x + x_{m_{i-1}+j})."""
    I = _as_comp(I)
    _check_block(A, I, i, j)
    F = A.field
    mp = I.partial_sums[i - 1]
    if F.q**mp > PRODUCT_BOUND:
        raise FieldTooLargeError(f"product has {F.q}^{mp} factors")
    n = A.n
    out = A.one()
    for cs in itertools.product(range(F.q), repeat=mp):
        terms = {}
        for a, c in enumerate(cs):
            if c:
                e = [0] * n
                e[a] = 1
                terms[(tuple(e), 0)] = c
        e = [0] * n
        e[mp + j - 1] = 1
        terms[(tuple(e), 0)] = 1
        out = out * A.element(terms)
    return out


def _block_substitution(A: SuperAlgebra, I: Composition, i: int, f: SuperElement) -> SuperElement:
    ni = I.parts[i - 1]
    images = [parabolic_v(A, I, i, a) if a <= ni else A.x(a) for a in range(1, A.n + 1)]
    return substitute(f, images, A.ys())


@lru_cache(maxsize=None)
def parabolic_theta(A: SuperAlgebra, I: Composition, i: int) -> SuperElement:
    """theta_i = L_{n_i}(v_{i,1}, ..., v_{i,n_i})."""
    I = _as_comp(I)
    _check_block(A, I, i)
    return _block_substitution(A, I, i, dickson_L(A, I.parts[i - 1]))


@lru_cache(maxsize=None)
def parabolic_q(A: SuperAlgebra, I: Composition, i: int, k: int) -> SuperElement:
    """q_{i,k} = Q_{n_i,k}(v_{i,1}, ..., v_{i,n_i}) for 0 <= k <= n_i."""
    I = _as_comp(I)
    _check_block(A, I, i)
    ni = I.parts[i - 1]
    if not 0 <= k <= ni:
        raise IndexOutOfRangeError(f"k = {k} outside [0, {ni}]")
    out = _block_substitution(A, I, i, dickson_Q(A, ni, k))
    if k == 0 and out != parabolic_theta(A, I, i) ** (A.field.q - 1):
        raise AssertionError("q_{i,0} != theta_i^(q-1)")
    return out


def parabolic_gens(A: SuperAlgebra, I, i: int, j: int):
    """(v_{i,j}, theta_i, [q_{i,0}, ..., q_{i,n_i-1}])."""
    I = _as_comp(I)
    _check_block(A, I, i, j)
    ni = I.parts[i - 1]
    return (
        parabolic_v(A, I, i, j),
        parabolic_theta(A, I, i),
        [parabolic_q(A, I, i, k) for k in range(ni)],
    )


# -- basis families -------------------------------------------------------------------

FAMILY_LABELS = ("MuiGL", "MuiSL", "MuiU", "KI", "PI")


@dataclass
class BasisFamily:
    """Module generators over a polynomial base ring, with their bidegrees."""

    label: str
    algebra: SuperAlgebra
    generators: list[tuple[SuperElement, tuple[int, int], str]]
    base_degrees: list[int]
    base_generators: list[SuperElement]
    composition: Composition | None = None
    k: int = 0
    extra: dict = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def q(self) -> int:
        return self.algebra.field.q

    def __len__(self) -> int:
        return len(self.generators)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "q": self.q,
            "field": self.algebra.field.describe(),
            "I": list(self.composition.parts) if self.composition else None,
            "k": self.k,
            "baseDegrees": list(self.base_degrees),
            "generators": [
                {"name": name, "bidegree": list(bd), "element": str(el)} for el, bd, name in self.generators
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _blists(lo_max: int, hi: int, j: int):
    """b-lists 0 <= b_1 < ... < b_j <= hi - 1 with b_j >= lo_max."""
    for b in itertools.combinations(range(hi), j):
        if b[-1] >= lo_max:
            yield b


def _name_M(m: int, b) -> str:
    return f"M_{{{m};{','.join(map(str, b))}}}"


def _entry(el: SuperElement, name: str):
    return el, el.bidegree(), name


def basis_family(A: SuperAlgebra, label: str, composition=None, k: int = 0) -> BasisFamily:
    """Module generators and base-ring generators for one of the structure results.

    ``label`` is one of MuiGL, MuiSL, MuiU (invariants of GL_n, SL_n, U_n),
    KI (K_I) and PI (P_I with determinant twist k).
    """
    if label not in FAMILY_LABELS:
        raise ValueError(f"unknown family {label!r}")
    n, q = A.n, A.field.q
    gens: list = [(A.one(), (0, 0), "1")]
    if label == "MuiGL":
        L = dickson_L(A, n)
        Lp = L ** (q - 2)
        for j in range(1, n + 1):
            for b in itertools.combinations(range(n), j):
                gens.append(_entry(mui_M(A, n, b) * Lp, f"{_name_M(n, b)}*L_{n}^{q - 2}"))
        base = [dickson_Q(A, n, s) for s in range(n)]
        return BasisFamily(label, A, gens, [q**n - q**s for s in range(n)], base)
    if label == "MuiSL":
        for j in range(1, n + 1):
            for b in itertools.combinations(range(n), j):
                gens.append(_entry(mui_M(A, n, b), _name_M(n, b)))
        base = [dickson_L(A, n)] + [dickson_Q(A, n, s) for s in range(1, n)]
        degs = [(q**n - 1) // (q - 1)] + [q**n - q**s for s in range(1, n)]
        return BasisFamily(label, A, gens, degs, base)
    if label == "MuiU":
        for j in range(1, n + 1):
            for m in range(j, n + 1):
                for b in itertools.combinations(range(m - 1), j - 1):
                    b = b + (m - 1,)
                    gens.append(_entry(mui_M(A, m, b), _name_M(m, b)))
        base = [dickson_V(A, m) for m in range(1, n + 1)]
        return BasisFamily(label, A, gens, [q ** (m - 1) for m in range(1, n + 1)], base)

    I = _as_comp(composition if composition is not None else (n,))
    if I.n != n:
        raise IndexOutOfRangeError(f"composition {I} does not sum to n = {n}")
    ms = I.partial_sums
    ell = I.length
    thetas = [parabolic_theta(A, I, i) for i in range(1, ell + 1)]
    if label == "KI":
        for i in range(1, ell + 1):
            for j in range(1, ms[i] + 1):
                for b in _blists(ms[i - 1], ms[i], j):
                    gens.append(_entry(mui_M(A, ms[i], b), _name_M(ms[i], b)))
        base, degs = [], []
        for i in range(1, ell + 1):
            ni = I.parts[i - 1]
            base.append(thetas[i - 1])
            degs.append(q ** ms[i - 1] * (q**ni - 1) // (q - 1))
            for s in range(1, ni):
                base.append(parabolic_q(A, I, i, s))
                degs.append(q ** ms[i] - q ** (ms[i - 1] + s))
        return BasisFamily(label, A, gens, degs, base, composition=I)

    # PI(I, k)
    if not 0 <= k <= q - 2:
        raise TwistOutOfRangeError(f"twist k = {k} outside [0, {q - 2}]")

    def theta_power(exps) -> tuple[SuperElement, str]:
        el, names = A.one(), []
        for idx, e in enumerate(exps, 1):
            if e:
                el = el * thetas[idx - 1] ** e
                names.append(f"theta{idx}^{e}")
        return el, "*".join(names)

    if k == 0:
        gens = [(A.one(), (0, 0), "1")]
    else:
        lead, lead_name = theta_power([q - 1 - k] * ell)
        gens = [_entry(lead, lead_name or "1")]
    for i in range(1, ell + 1):
        if k == 0:
            exps = [q - 2] * i + [0] * (ell - i)
        else:
            exps = [q - 2 - k] * i + [q - 1 - k] * (ell - i)
        tp, tname = theta_power(exps)
        for j in range(1, ms[i] + 1):
            for b in _blists(ms[i - 1], ms[i], j):
                name = _name_M(ms[i], b) + (f"*{tname}" if tname else "")
                gens.append(_entry(mui_M(A, ms[i], b) * tp, name))
    base, degs = [], []
    for i in range(1, ell + 1):
        ni = I.parts[i - 1]
        for j in range(1, ni + 1):
            base.append(parabolic_q(A, I, i, ni - j))
            degs.append(q ** ms[i] - q ** (ms[i] - j))
    return BasisFamily(label, A, gens, degs, base, composition=I, k=k)
