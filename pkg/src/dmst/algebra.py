"""The bigraded superalgebra F_q[x_1..x_n] (x) E[y_1..y_n].

Terms are stored sparsely as ``{(x_exponents, y_mask): code}`` where bit ``i-1``
of ``y_mask`` marks ``y_i`` and ``code`` is a nonzero field code (see
:mod:`dmst.gf`).  y-factors are kept in ascending order; reordering signs are
absorbed into the coefficient.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    AmbientMismatchError,
    NotDivisibleError,
    ParityViolationError,
    ParseError,
    ZeroDivisorError,
)
from .gf import Field, FieldElement, parse_code


class SuperMonomial(NamedTuple):
    x: tuple[int, ...]
    y: tuple[int, ...]

    @property
    def bidegree(self) -> tuple[int, int]:
        return sum(self.x), len(self.y)


def mask_to_set(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def set_to_mask(ys: Iterable[int]) -> int:
    m = 0
    for i in ys:
        m |= 1 << (i - 1)
    return m


def popcount(m: int) -> int:
    return bin(m).count("1")


_SIGN_CACHE: dict[tuple[int, int], int] = {}


def reorder_sign(a: int, b: int) -> int:
    """Parity of #{(s, t) in S x T : s > t} for disjoint masks S=a, T=b."""
    key = (a, b)
    v = _SIGN_CACHE.get(key)
    if v is None:
        cnt = 0
        bb = b
        while bb:
            low = bb & -bb
            cnt += popcount(a & ~((low << 1) - 1))
            bb ^= low
        v = cnt & 1
        _SIGN_CACHE[key] = v
    return v


def _grlex_desc(key) -> tuple:
    x, ym = key
    return (-sum(x), tuple(-e for e in x), popcount(ym), mask_to_set(ym))


@dataclass(frozen=True)
class SuperAlgebra:
    """F_q[x_1..x_n] (x) E[y_1..y_n] over ``field``."""

    field: Field
    n: int

    def element(self, terms: dict) -> "SuperElement":
        return SuperElement(self, {k: c for k, c in terms.items() if c})

    def zero(self) -> "SuperElement":
        return SuperElement(self, {})

    def one(self) -> "SuperElement":
        return self.const(1)

    def const(self, c) -> "SuperElement":
        code = self._code(c)
        return SuperElement(self, {((0,) * self.n, 0): code} if code else {})

    def _code(self, c) -> int:
        if isinstance(c, FieldElement):
            if c.field != self.field:
                raise AmbientMismatchError("coefficient from another field")
            return c.code
        return self.field.int_code(c)

    def monomial(self, x: Sequence[int] = (), y: Sequence[int] = (), coeff=1) -> "SuperElement":
        """coeff * x^x * y_{y[0]} * y_{y[1]} * ... (y factors in the given order)."""
        x = tuple(x) + (0,) * (self.n - len(x))
        code = self._code(coeff)
        mask = 0
        for i in y:
            bit = 1 << (i - 1)
            if mask & bit:
                return self.zero()
            if reorder_sign(mask, bit):
                code = self.field.neg(code)
            mask |= bit
        return SuperElement(self, {(x, mask): code} if code else {})

    def x(self, i: int, e: int = 1) -> "SuperElement":
        exps = [0] * self.n
        exps[i - 1] = e
        return self.monomial(exps)

    def y(self, i: int) -> "SuperElement":
        return self.monomial((), (i,))

    def xs(self) -> list["SuperElement"]:
        return [self.x(i) for i in range(1, self.n + 1)]

    def ys(self) -> list["SuperElement"]:
        return [self.y(i) for i in range(1, self.n + 1)]

    def parse(self, text: str) -> "SuperElement":
        return parse_element(self, text)


class SuperElement:
    """An element of the superalgebra; immutable once constructed."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: SuperAlgebra, terms: dict):
        self.algebra = algebra
        self.terms = terms
        self._hash = None

    # -- inspection ------------------------------------------------------------
    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def n(self) -> int:
        return self.algebra.n

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        """(SuperMonomial, FieldElement) pairs in canonical (descending) order."""
        F = self.field
        for key in sorted(self.terms, key=_grlex_desc):
            yield SuperMonomial(key[0], mask_to_set(key[1])), FieldElement(F, self.terms[key])

    def coefficient(self, x: Sequence[int], y: Sequence[int] = ()) -> FieldElement:
        x = tuple(x) + (0,) * (self.n - len(x))
        return FieldElement(self.field, self.terms.get((x, set_to_mask(y)), 0))

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(sum(x), popcount(m)) for x, m in self.terms}

    def bidegree(self) -> tuple[int, int]:
        """The bidegree of a homogeneous nonzero element."""
        bd = self.bidegrees()
        if len(bd) != 1:
            raise ValueError(f"element is not homogeneous: {sorted(bd)}")
        return next(iter(bd))

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def component(self, bidegree: tuple[int, int]) -> "SuperElement":
        i, j = bidegree
        return SuperElement(
            self.algebra,
            {k: c for k, c in self.terms.items() if sum(k[0]) == i and popcount(k[1]) == j},
        )

    def is_pure_x(self) -> bool:
        return all(m == 0 for _, m in self.terms)

    def leading_term(self):
        key = min(self.terms, key=_grlex_desc)
        return key, self.terms[key]

    # -- arithmetic --------------------------------------------------------------
    def _check(self, other) -> "SuperElement":
        if isinstance(other, SuperElement):
            if other.algebra != self.algebra:
                raise AmbientMismatchError(f"{self.algebra} vs {other.algebra}")
            return other
        if isinstance(other, (int, FieldElement)):
            return self.algebra.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = F.add(out.get(k, 0), c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return SuperElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return SuperElement(self.algebra, {k: F.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "SuperElement":
        code = self.algebra._code(c)
        if not code:
            return self.algebra.zero()
        F = self.field
        return SuperElement(self.algebra, {k: F.mul(v, code) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        return SuperElement(self.algebra, _mul_terms(self.field, self.n, self.terms, other.terms))

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def frobenius_power(self, e: int) -> "SuperElement":
        """self ** (p ** e), computed termwise (valid in characteristic p)."""
        F = self.field
        pe = F.p**e
        return SuperElement(
            self.algebra,
            {(tuple(a * pe for a in x), 0): F.frob(c, e) for (x, m), c in self.terms.items() if m == 0},
        )

    def __pow__(self, e: int) -> "SuperElement":
        if e < 0:
            raise ValueError("negative power")
        result = self.algebra.one()
        p = self.field.p
        digit_pos = 0
        while e:
            e, d = divmod(e, p)
            if d:
                base = self.frobenius_power(digit_pos) if digit_pos else self
                for _ in range(d):
                    result = result * base
            digit_pos += 1
        return result

    def exact_divide(self, g: "SuperElement") -> "SuperElement":
        return exact_divide(self, g)

    def substitute(self, x_images, y_images=None) -> "SuperElement":
        return substitute(self, x_images, y_images)

    # -- comparison / printing ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FieldElement)):
            other = self.algebra.const(other)
        if not isinstance(other, SuperElement):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset(self.terms.items())))
        return self._hash

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"SuperElement({format_element(self)!r})"


def _mul_terms(F: Field, n: int, A: dict, B: dict) -> dict:
    if not A or not B:
        return {}
    # Kronecker-pack the x-exponents into one integer so that monomial
    # multiplication becomes integer addition.
    da = max(max(x) for x, _ in A)
    db = max(max(x) for x, _ in B)
    base = da + db + 1
    weights = [base**i for i in range(n)]

    def pack(x):
        return sum(e * w for e, w in zip(x, weights))

    groups_a: dict[int, list] = {}
    for (x, m), c in A.items():
        groups_a.setdefault(m, []).append((pack(x), c))
    groups_b: dict[int, list] = {}
    for (x, m), c in B.items():
        groups_b.setdefault(m, []).append((pack(x), c))

    prime = F.r == 1
    p = F.p
    out: dict[tuple[int, int], int] = {}
    for ma, la in groups_a.items():
        for mb, lb in groups_b.items():
            if ma & mb:
                continue
            mask = ma | mb
            negate = bool(ma and mb and reorder_sign(ma, mb))
            acc: dict[int, int] = {}
            if prime:
                get = acc.get
                for ka, ca in la:
                    for kb, cb in lb:
                        k = ka + kb
                        acc[k] = get(k, 0) + ca * cb
                if negate:
                    acc = {k: -v for k, v in acc.items()}
                for k, v in acc.items():
                    key = (k, mask)
                    out[key] = out.get(key, 0) + v
            else:
                fmul, fadd = F.mul, F.add
                for ka, ca in la:
                    for kb, cb in lb:
                        k = ka + kb
                        acc[k] = fadd(acc.get(k, 0), fmul(ca, cb))
                for k, v in acc.items():
                    if negate:
                        v = F.neg(v)
                    key = (k, mask)
                    out[key] = fadd(out.get(key, 0), v)

    result = {}
    for (k, mask), v in out.items():
        if prime:
            v %= p
        if not v:
            continue
        x = []
        for _ in range(n):
            k, e = divmod(k, base)
            x.append(e)
        result[(tuple(x), mask)] = v
    return result


def row_det(matrix: Sequence[Sequence[SuperElement]]) -> SuperElement:
    """Row determinant sum_sigma sgn(sigma) a_{1 sigma(1)} ... a_{m sigma(m)}.

    Expanded along the first row recursively, so factors are always multiplied
    in row order (this matters for odd entries).
    """
    m = len(matrix)
    if any(len(row) != m for row in matrix):
        raise ValueError("row_det needs a square matrix")
    if m == 0:
        raise ValueError("empty matrix")
    algebra = matrix[0][0].algebra
    memo: dict[tuple[int, int], SuperElement] = {}

    def minor(row: int, cols: tuple[int, ...]) -> SuperElement:
        if row == m:
            return algebra.one()
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = algebra.zero()
        for pos, c in enumerate(cols):
            entry = matrix[row][c]
            if entry.is_zero():
                continue
            rest = minor(row + 1, cols[:pos] + cols[pos + 1 :])
            if rest.is_zero():
                continue
            term = entry * rest
            total = total - term if pos % 2 else total + term
        memo[key] = total
        return total

    return minor(0, tuple(range(m)))


class Substitution:
    """The algebra endomorphism x_i -> x_images[i-1], y_i -> y_images[i-1].

    x-images must have exterior degree 0 and y-images must be homogeneous of
    exterior degree 1 (or zero); otherwise ParityViolationError.  Powers of the
    images are cached, so one instance can be applied to many elements.
    """

    def __init__(self, algebra: SuperAlgebra, x_images: Sequence[SuperElement], y_images: Sequence[SuperElement] | None = None):
        n = algebra.n
        if y_images is None:
            y_images = algebra.ys()
        x_images, y_images = list(x_images), list(y_images)
        if len(x_images) != n or len(y_images) != n:
            raise AmbientMismatchError(f"need {n} images for each of x and y")
        for img in x_images + y_images:
            if img.algebra != algebra:
                raise AmbientMismatchError("image lives in another algebra")
        for img in x_images:
            if not img.is_pure_x():
                raise ParityViolationError(f"x-image {img} has exterior part")
        for img in y_images:
            if any(popcount(m) != 1 for _, m in img.terms):
                raise ParityViolationError(f"y-image {img} is not homogeneous odd")
        self.algebra = algebra
        self.x_images = x_images
        self.y_images = y_images
        self._x_id = [img.terms == algebra.x(i + 1).terms for i, img in enumerate(x_images)]
        self._y_id = [img.terms == algebra.y(i + 1).terms for i, img in enumerate(y_images)]
        self._moving = [i for i in range(n) if not self._x_id[i]]
        self._pow: dict[tuple[int, int], SuperElement] = {}
        self._xpart: dict[tuple[int, ...], SuperElement] = {}
        self._ypart: dict[int, SuperElement] = {}

    def _xpow(self, i: int, e: int) -> SuperElement:
        key = (i, e)
        v = self._pow.get(key)
        if v is None:
            v = self.x_images[i] ** e
            self._pow[key] = v
        return v

    def _x_factor(self, mov: tuple[int, ...]) -> SuperElement:
        xp = self._xpart.get(mov)
        if xp is None:
            xp = self.algebra.one()
            for i, e in zip(self._moving, mov):
                if e:
                    xp = xp * self._xpow(i, e)
            self._xpart[mov] = xp
        return xp

    def _y_factor(self, mask: int) -> SuperElement:
        yp = self._ypart.get(mask)
        if yp is None:
            algebra = self.algebra
            yp = algebra.one()
            for i in mask_to_set(mask):
                yp = yp * (algebra.y(i) if self._y_id[i - 1] else self.y_images[i - 1])
            self._ypart[mask] = yp
        return yp

    def apply_terms(self, terms: dict) -> dict:
        algebra = self.algebra
        F = algebra.field
        n = algebra.n
        x_id, moving = self._x_id, self._moving
        out: dict = {}
        for (x, mask), c in terms.items():
            xp = self._x_factor(tuple(x[i] for i in moving))
            yp = self._y_factor(mask)
            if xp.is_zero() or yp.is_zero():
                continue
            shift = tuple(x[i] if x_id[i] else 0 for i in range(n))
            prod = _mul_terms(F, n, xp.terms, yp.terms)
            for (px, pm), pc in prod.items():
                key = (tuple(a + b for a, b in zip(px, shift)), pm)
                v = F.add(out.get(key, 0), F.mul(pc, c))
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out

    def __call__(self, f: SuperElement) -> SuperElement:
        if f.algebra != self.algebra:
            raise AmbientMismatchError("element lives in another algebra")
        return SuperElement(self.algebra, self.apply_terms(f.terms))


def substitute(f: SuperElement, x_images: Sequence[SuperElement], y_images: Sequence[SuperElement] | None = None) -> SuperElement:
    """Apply the endomorphism x_i -> x_images[i-1], y_i -> y_images[i-1] to f."""
    return Substitution(f.algebra, x_images, y_images)(f)


def exact_divide(f: SuperElement, g: SuperElement) -> SuperElement:
    """Return h with f = g * h; g must be a nonzero element without y's."""
    if f.algebra != g.algebra:
        raise AmbientMismatchError("division across algebras")
    if g.is_zero():
        raise ZeroDivisorError("division by zero")
    if not g.is_pure_x():
        raise ParityViolationError("divisor must have exterior degree 0")
    F = f.field
    (gx, _), gc = g.leading_term()
    ginv = F.inv(gc)
    g_items = list(g.terms.items())
    quotient: dict = {}
    rem = dict(f.terms)
    heap = [(_grlex_desc(k), k) for k in rem]
    heapq.heapify(heap)
    while rem:
        _, key = heapq.heappop(heap)
        c = rem.get(key)
        if c is None:
            continue
        x, mask = key
        qx = tuple(a - b for a, b in zip(x, gx))
        if any(e < 0 for e in qx):
            raise NotDivisibleError(f"{format_element(f)} is not divisible by {format_element(g)}")
        qc = F.mul(c, ginv)
        quotient[(qx, mask)] = qc
        nq = F.neg(qc)
        for (tx, _), tc in g_items:
            k = (tuple(a + b for a, b in zip(tx, qx)), mask)
            v = F.add(rem.get(k, 0), F.mul(nq, tc))
            if v:
                if k not in rem:
                    heapq.heappush(heap, (_grlex_desc(k), k))
                rem[k] = v
            else:
                rem.pop(k, None)
    return SuperElement(f.algebra, quotient)


def component(f: SuperElement, bidegree: tuple[int, int]) -> SuperElement:
    return f.component(bidegree)


def bidegrees(f: SuperElement) -> set[tuple[int, int]]:
    return f.bidegrees()


# -- text format -------------------------------------------------------------------

def _format_coeff(F: Field, code: int) -> str:
    s = F.format_code(code)
    return f"({s})" if ("+" in s) else s


def format_element(f: SuperElement) -> str:
    """Render as e.g. ``"(u+1)*x1^2*x2*y1*y3 + x2"``; zero prints as ``"0"``."""
    if f.is_zero():
        return "0"
    F = f.field
    parts = []
    for key in sorted(f.terms, key=_grlex_desc):
        x, mask = key
        factors = []
        for i, e in enumerate(x, 1):
            if e == 1:
                factors.append(f"x{i}")
            elif e:
                factors.append(f"x{i}^{e}")
        factors.extend(f"y{i}" for i in mask_to_set(mask))
        code = f.terms[key]
        if code != 1 or not factors:
            factors.insert(0, _format_coeff(F, code))
        parts.append("*".join(factors))
    return " + ".join(parts)


_FACTOR_RE = re.compile(r"\s*(?:(x)(\d+)(?:\^(\d+))?|(y)(\d+)|\(([^()]*)\)|([0-9u^]+(?:\^\d+)?))\s*")


def parse_element(algebra: SuperAlgebra, text: str) -> SuperElement:
    """Parse the text grammar produced by :func:`format_element`.

    Terms are joined by ``+`` or ``-`` (ASCII or U+2212); each term is a
    ``*``-separated product of field coefficients, ``x<i>[^e]`` and ``y<i>``.
    """
    F = algebra.field
    s = text.replace("−", "-").strip()
    if not s:
        raise ParseError("empty element")
    # split on top-level +/- (outside parentheses)
    terms: list[tuple[int, str]] = []
    depth, start, sign = 0, 0, 1
    for pos, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0:
            chunk = s[start:pos].strip()
            if chunk:
                terms.append((sign, chunk))
                sign = 1
            if ch == "-":
                sign = -sign
            start = pos + 1
    tail = s[start:].strip()
    if not tail:
        raise ParseError(f"dangling operator in {text!r}")
    terms.append((sign, tail))

    total = algebra.zero()
    for sgn, chunk in terms:
        coeff = 1
        x = [0] * algebra.n
        ys: list[int] = []
        for factor in chunk.split("*"):
            factor = factor.strip()
            m = _FACTOR_RE.fullmatch(factor)
            if not m:
                raise ParseError(f"bad factor {factor!r} in {text!r}")
            if m.group(1):
                i = int(m.group(2))
                if not 1 <= i <= algebra.n:
                    raise ParseError(f"x{i} out of range")
                x[i - 1] += int(m.group(3)) if m.group(3) else 1
            elif m.group(4):
                i = int(m.group(5))
                if not 1 <= i <= algebra.n:
                    raise ParseError(f"y{i} out of range")
                ys.append(i)
            else:
                coeff = F.mul(coeff, parse_code(F, m.group(6) if m.group(6) is not None else m.group(7)))
        if sgn < 0:
            coeff = F.neg(coeff)
        total = total + algebra.monomial(x, ys, FieldElement(F, coeff))
    return total
