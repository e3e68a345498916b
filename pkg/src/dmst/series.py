"""Exact bivariate rational series and the closed-form Hilbert series.

A :class:`RationalSeries` is a Laurent polynomial N(t, s) over the rationals
divided by a product of factors (1 - t^m).  Nothing is ever reduced by a gcd;
equality is decided by cross-multiplication.
"""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple

from .errors import MissingCompositionError, TwistOutOfRangeError
from .gf import prime_power
from .groups import Composition

Poly = dict  # {(t_degree, s_degree): int | Fraction}


def _clean(poly: Mapping) -> dict:
    return {key: c for key, c in poly.items() if c}


def poly_add(a: Mapping, b: Mapping, sign: int = 1) -> dict:
    out = dict(a)
    for key, c in b.items():
        out[key] = out.get(key, 0) + sign * c
    return _clean(out)


def poly_mul(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for (ta, sa), ca in a.items():
        for (tb, sb), cb in b.items():
            key = (ta + tb, sa + sb)
            out[key] = out.get(key, 0) + ca * cb
    return _clean(out)


def _times_one_minus(poly: Mapping, m: int) -> dict:
    """poly * (1 - t^m)."""
    out = dict(poly)
    for (t, s), c in poly.items():
        key = (t + m, s)
        out[key] = out.get(key, 0) - c
    return _clean(out)


def _times_factors(poly: Mapping, exponents: Iterable[int]) -> dict:
    out = dict(poly)
    for m in exponents:
        out = _times_one_minus(out, m)
    return out


def _normalize_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


@dataclass(frozen=True)
class RationalSeries:
    """numerator / prod(1 - t^m for m in denominator)."""

    numerator: tuple  # sorted ((t, s), coeff) pairs
    denominator: tuple[int, ...] = ()

    def __post_init__(self):
        if any(m < 1 for m in self.denominator):
            raise ValueError("denominator exponents must be >= 1")

    @classmethod
    def make(cls, numerator: Mapping, denominator: Iterable[int] = ()) -> "RationalSeries":
        num = tuple(sorted((k, _normalize_coeff(c)) for k, c in numerator.items() if c))
        return cls(num, tuple(sorted(int(m) for m in denominator)))

    @classmethod
    def monomial(cls, t: int = 0, s: int = 0, coeff=1) -> "RationalSeries":
        return cls.make({(t, s): coeff})

    @classmethod
    def one(cls) -> "RationalSeries":
        return cls.monomial()

    @classmethod
    def zero(cls) -> "RationalSeries":
        return cls.make({})

    @property
    def num(self) -> dict:
        return dict(self.numerator)

    def s_degree(self) -> int:
        return max((s for (_, s), _ in self.numerator), default=0)

    def _lift(self, target: Counter) -> dict:
        extra = target - Counter(self.denominator)
        return _times_factors(self.num, extra.elements())

    def _combine(self, other: "RationalSeries", sign: int) -> "RationalSeries":
        common = Counter(self.denominator) | Counter(other.denominator)
        num = poly_add(self._lift(common), other._lift(common), sign)
        return RationalSeries.make(num, common.elements())

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        return self._combine(other, 1)

    def __sub__(self, other: "RationalSeries") -> "RationalSeries":
        return self._combine(other, -1)

    def __neg__(self) -> "RationalSeries":
        return RationalSeries.make({k: -c for k, c in self.numerator}, self.denominator)

    def __mul__(self, other) -> "RationalSeries":
        if isinstance(other, (int, Fraction)):
            return RationalSeries.make({k: c * other for k, c in self.numerator}, self.denominator)
        return RationalSeries.make(poly_mul(self.num, other.num), self.denominator + other.denominator)

    __rmul__ = __mul__

    def shift(self, t: int = 0, s: int = 0) -> "RationalSeries":
        """Multiply by t^t s^s."""
        return RationalSeries.make({(a + t, b + s): c for (a, b), c in self.numerator}, self.denominator)

    def dualize_exterior(self, n: int) -> "RationalSeries":
        """s^n * F(t, 1/s)."""
        return RationalSeries.make({(t, n - s): c for (t, s), c in self.numerator}, self.denominator)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalSeries):
            return NotImplemented
        return rational_equal(self, other).equal

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def expand(self, T: int) -> "SeriesTable":
        return expand(self, T)

    def to_dict(self) -> dict:
        n = self.s_degree()
        rows: dict[int, list] = {}
        for (t, s), c in self.numerator:
            rows.setdefault(t, [0] * (n + 1))[s] = c
        return {
            "numerator": [[t, [str(c) if isinstance(c, Fraction) else c for c in row]] for t, row in sorted(rows.items())],
            "denominator": list(self.denominator),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def __str__(self) -> str:
        num = format_poly(self.num)
        if not self.denominator:
            return num
        den = "".join(f"(1-t^{m})" if m > 1 else "(1-t)" for m in self.denominator)
        return f"({num})/({den})"


def format_poly(poly: Mapping) -> str:
    if not poly:
        return "0"
    parts = []
    for (t, s), c in sorted(poly.items()):
        mono = []
        if t:
            mono.append("t" if t == 1 else f"t^{t}")
        if s:
            mono.append("s" if s == 1 else f"s^{s}")
        body = "*".join(mono)
        if not body:
            text = str(abs(c))
        elif abs(c) == 1:
            text = body
        else:
            text = f"{abs(c)}*{body}"
        parts.append(("- " if c < 0 else "+ ") + text)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


@dataclass
class SeriesTable:
    """Coefficients of t^i s^j for i <= T."""

    T: int
    coeffs: dict  # {(t, s): int}

    def __getitem__(self, key) -> int:
        return self.coeffs.get(tuple(key), 0)

    @property
    def t_min(self) -> int:
        return min((t for t, _ in self.coeffs), default=0)

    def nonzero(self) -> dict:
        return {k: v for k, v in self.coeffs.items() if v and k[0] <= self.T}

    def truncate(self, T: int) -> "SeriesTable":
        return SeriesTable(T, {k: v for k, v in self.coeffs.items() if k[0] <= T})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesTable):
            return NotImplemented
        T = min(self.T, other.T)
        return self.truncate(T).nonzero() == other.truncate(T).nonzero()

    def differences(self, other: "SeriesTable") -> list[tuple[tuple[int, int], int, int]]:
        T = min(self.T, other.T)
        keys = sorted(set(self.truncate(T).nonzero()) | set(other.truncate(T).nonzero()))
        return [(k, self[k], other[k]) for k in keys if self[k] != other[k]]

    def is_hilbert_series(self) -> bool:
        return all(v >= 0 for v in self.coeffs.values()) and all(t >= 0 for t, _ in self.nonzero())

    def rows(self, s_max: int | None = None):
        if s_max is None:
            s_max = max((s for _, s in self.coeffs), default=0)
        for t in range(min(self.t_min, 0), self.T + 1):
            for s in range(s_max + 1):
                yield t, s, self[(t, s)]

    def to_csv(self, s_max: int | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["tDeg", "sDeg", "dim"])
        for row in self.rows(s_max):
            writer.writerow(row)
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "entries": [[t, s, _normalize_coeff(v)] for (t, s), v in sorted(self.nonzero().items())],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def expand(series: RationalSeries, T: int) -> SeriesTable:
    """Coefficients up to t-degree T, expanding each 1/(1 - t^m) geometrically."""
    by_s: dict[int, dict[int, object]] = {}
    for (t, s), c in series.numerator:
        by_s.setdefault(s, {})[t] = c
    out = {}
    for s, row in by_s.items():
        lo = min(row)
        if lo > T:
            continue
        width = T - lo + 1
        arr = [0] * width
        for t, c in row.items():
            if t <= T:
                arr[t - lo] += c
        for m in series.denominator:
            for i in range(m, width):
                arr[i] += arr[i - m]
        for i, c in enumerate(arr):
            if c:
                out[(lo + i, s)] = _normalize_coeff(c)
    return SeriesTable(T, out)


def rat_arith(a: RationalSeries, b: RationalSeries, op: str) -> RationalSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


class Certificate(NamedTuple):
    """Outcome of an exact equality test; ``difference`` is zero iff equal."""

    equal: bool
    difference: dict

    def __bool__(self) -> bool:
        return self.equal

    def __str__(self) -> str:
        return format_poly(self.difference)


def rational_equal(a: RationalSeries, b: RationalSeries) -> Certificate:
    """Decide a == b via num(a)*den(b) - num(b)*den(a) = 0."""
    left = _times_factors(a.num, b.denominator)
    right = _times_factors(b.num, a.denominator)
    diff = poly_add(left, right, -1)
    return Certificate(not diff, diff)


# -- closed forms -------------------------------------------------------------------

def compositions(n: int) -> list[Composition]:
    """All 2^(n-1) compositions of n, by number of parts then reverse-lex."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out: list[tuple[int, ...]] = []

    def rec(rest: int, prefix: tuple[int, ...]):
        if rest == 0:
            out.append(prefix)
            return
        for part in range(rest, 0, -1):
            rec(rest - part, prefix + (part,))

    rec(n, ())
    out.sort(key=lambda c: (len(c), [-p for p in c]))
    return [Composition(c) for c in out]


def _q(q: int) -> int:
    prime_power(q)
    return q


def _comp(I) -> Composition:
    return I if isinstance(I, Composition) else Composition(tuple(I))


def parabolic_degrees(q: int, I) -> list[int]:
    """Degrees q^(m_i) - q^(m_i - j) of the polynomial generators of S(V)^{P_I}."""
    I = _comp(I)
    ms = I.partial_sums
    return [q ** ms[i] - q ** (ms[i] - j) for i in range(1, I.length + 1) for j in range(1, I.parts[i - 1] + 1)]


def _product(factors: Iterable[dict]) -> dict:
    out = {(0, 0): 1}
    for f in factors:
        out = poly_mul(out, f)
    return out


def _s_plus_t_powers(q: int, n: int) -> dict:
    """prod_{i=0}^{n-1} (s + t^(q^i))."""
    return _product({(0, 1): 1, (q**i, 0): 1} for i in range(n))


def _one_plus_s_over_t(q: int, m: int) -> dict:
    """prod_{j=1}^{m} (1 + s t^(-q^(j-1)))."""
    return _product({(0, 0): 1, (-(q ** (j - 1)), 1): 1} for j in range(1, m + 1))


def _check_twist(q: int, k) -> int:
    if k is None or not 1 <= k <= q - 2:
        raise TwistOutOfRangeError(f"twist k = {k} outside [1, {q - 2}]")
    return k


def dickson_gl(q: int, n: int) -> RationalSeries:
    return RationalSeries.make({(0, 0): 1}, [q**n - q**j for j in range(n)])


def km_he(q: int, I) -> RationalSeries:
    return RationalSeries.make({(0, 0): 1}, parabolic_degrees(q, I))


def theorem_b(q: int, I, k: int) -> RationalSeries:
    I = _comp(I)
    n = I.n
    _check_twist(q, k)
    shift = (q - 2 - k) * (q**n - 1) // (q - 1)
    return RationalSeries.make(_s_plus_t_powers(q, n), parabolic_degrees(q, I)).shift(t=shift)


def hser(q: int, I) -> RationalSeries:
    I = _comp(I)
    n, ms = I.n, I.partial_sums
    num = {(0, 0): 1, (q ** ms[1] - 1, 0): -1}
    for i in range(1, I.length):
        diff = poly_add({(q ** ms[i] - 1, 0): 1}, {(q ** ms[i + 1] - 1, 0): 1}, -1)
        num = poly_add(num, poly_mul(diff, _one_plus_s_over_t(q, ms[i])))
    num = poly_add(num, poly_mul({(q**n - 1, 0): 1}, _one_plus_s_over_t(q, n)))
    return RationalSeries.make(num, parabolic_degrees(q, I))


def _steinberg_denominator(q: int, n: int) -> list[int]:
    return [q**i - 1 for i in range(1, n + 1)]


def theorem_c1(q: int, n: int) -> RationalSeries:
    head = {(q**n - 1, 1): 1, (q ** (n - 1), 0): 1}
    num = poly_mul(head, _s_plus_t_powers(q, n - 1))
    return RationalSeries.make(num, _steinberg_denominator(q, n)).shift(t=-n)


def theorem_c2(q: int, n: int, k: int) -> RationalSeries:
    _check_twist(q, k)
    shift = -n + (q - 1 - k) * (q**n - 1) // (q - 1)
    return RationalSeries.make(_s_plus_t_powers(q, n), _steinberg_denominator(q, n)).shift(t=shift)


def km_theorem(q: int, n: int) -> RationalSeries:
    return RationalSeries.make({(-n + (q**n - 1) // (q - 1), 0): 1}, _steinberg_denominator(q, n))


def crabb(q: int, I) -> RationalSeries:
    I = _comp(I)
    num = _product({(0, 0): 1, (q**i, 1): 1} for i in range(I.n))
    return RationalSeries.make(num, parabolic_degrees(q, I))


def curtis_sum(n: int, per_composition: Mapping | Callable) -> RationalSeries:
    """sum over compositions I of n of (-1)^(n - len(I)) * series(I)."""
    total = RationalSeries.zero()
    for I in compositions(n):
        if callable(per_composition):
            term = per_composition(I)
        else:
            term = per_composition.get(I, per_composition.get(I.parts))
            if term is None:
                raise MissingCompositionError(f"no series for composition {I}")
        total = total + term if (n - I.length) % 2 == 0 else total - term
    return total


def identity_lhs(q: int, n: int) -> RationalSeries:
    """X(t, s; q): the alternating sum of untwisted parabolic series."""
    return curtis_sum(n, lambda I: hser(q, I))


CLOSED_FORM_KINDS = ("DicksonGL", "KMHe", "TheoremB", "Hser", "TheoremC1", "TheoremC2", "KMthm", "Crabb", "X")


def closed_form(kind: str, q: int, *, n: int | None = None, composition=None, k: int | None = None) -> RationalSeries:
    """Dispatch to a named closed form.

    Composition-indexed kinds (KMHe, TheoremB, Hser, Crabb) take ``composition``
    and default to the single block (n); the others take ``n``.
    """
    _q(q)
    I = None
    if kind in ("KMHe", "TheoremB", "Hser", "Crabb"):
        if composition is None:
            if n is None:
                raise ValueError(f"{kind} needs a composition or n")
            composition = (n,)
        I = _comp(composition)
        if n is not None and I.n != n:
            raise ValueError(f"composition {I} does not sum to n = {n}")
    elif n is None:
        raise ValueError(f"{kind} needs n")
    if kind == "DicksonGL":
        return dickson_gl(q, n)
    if kind == "KMHe":
        return km_he(q, I)
    if kind == "TheoremB":
        return theorem_b(q, I, k)
    if kind == "Hser":
        return hser(q, I)
    if kind == "TheoremC1":
        return theorem_c1(q, n)
    if kind == "TheoremC2":
        return theorem_c2(q, n, k)
    if kind == "KMthm":
        return km_theorem(q, n)
    if kind == "Crabb":
        return crabb(q, I)
    if kind == "X":
        return identity_lhs(q, n)
    raise ValueError(f"unknown closed form {kind!r}")


def twisted_parabolic(q: int, I, k: int) -> RationalSeries:
    """Hilbert series of the Det^k-twisted P_I invariants: Hser at k = 0, the TheoremB kind otherwise."""
    return hser(q, I) if k == 0 else theorem_b(q, I, k)


def steinberg_closed(q: int, n: int, k: int) -> RationalSeries:
    return theorem_c1(q, n) if k == 0 else theorem_c2(q, n, k)


def module_series(family) -> RationalSeries:
    """Hilbert series of the free module on ``family.generators`` over the base ring."""
    num: dict = {}
    for _, (t, s), _ in family.generators:
        num[(t, s)] = num.get((t, s), 0) + 1
    return RationalSeries.make(num, family.base_degrees)
