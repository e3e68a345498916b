"""Exact arithmetic in F_q, q = p^r, realized as F_p[u]/(m(u)).

Elements are encoded internally as integers ``sum(c_i * p**i)`` where ``c_i`` is
the coefficient of ``u**i``.  The hot paths (polynomial algebra, linear algebra
over F_q) work directly on these codes through the ``Field`` methods; the
``FieldElement`` wrapper is the user-facing value type.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    DivisionByZeroError,
    FieldMismatchError,
    FieldTooLargeError,
    NoDefaultModulusError,
    NotPrimeError,
    ParseError,
    ReducibleModulusError,
)

ENUMERATION_BOUND = 1 << 16
_ADD_TABLE_BOUND = 1024

# Smallest monic irreducible polynomial of degree r over F_p, ordered by the
# code sum(c_i p^i) of its lower coefficients.  Coefficients are listed from
# the constant term up.
DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, r) with q = p**r, or raise NotPrimeError."""
    if q < 2:
        raise NotPrimeError(f"{q} is not a prime power")
    for p in prime_factors(q)[:1]:
        r, rest = 0, q
        while rest % p == 0:
            rest //= p
            r += 1
        if rest == 1:
            return p, r
    raise NotPrimeError(f"{q} is not a prime power")


def _poly_rem(a: list[int], m: tuple[int, ...] | list[int], p: int) -> list[int]:
    a = list(a)
    lead_inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * lead_inv % p
        if c:
            s = len(a) - len(m)
            for i, mc in enumerate(m):
                a[s + i] = (a[s + i] - c * mc) % p
        a.pop()
    return a


def _is_irreducible(m: tuple[int, ...], p: int) -> bool:
    r = len(m) - 1
    for d in range(1, r // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_rem(m, list(low) + [1], p)):
                return False
    return True


@dataclass(frozen=True)
class Field:
    """The finite field F_p[u]/(modulus) with q = p**r elements."""

    p: int
    r: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.r

    @property
    def is_prime_field(self) -> bool:
        return self.r == 1

    def __str__(self) -> str:
        return self.describe()

    def __repr__(self) -> str:
        return f"Field({self.describe()!r})"

    def describe(self) -> str:
        return f"{self.p}^{self.r}/" + ",".join(map(str, self.modulus))

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Inverse of :meth:`describe`; ``"2^2/1,1,1"``, ``"3^1"`` or ``"4"``."""
        m = re.fullmatch(r"\s*(\d+)(?:\^(\d+))?(?:/([\d,\s]+))?\s*", text)
        if not m:
            raise ParseError(f"bad field description {text!r}")
        base, exp, mod = m.groups()
        if exp is None:
            p, r = prime_power(int(base))
        else:
            p, r = int(base), int(exp)
        modulus = [int(c) for c in mod.split(",")] if mod else None
        return field_create(p, r, modulus)

    # -- code-level arithmetic ---------------------------------------------
    def to_coeffs(self, code: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.r):
            code, c = divmod(code, p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        p = self.p
        coeffs = list(coeffs)
        if len(coeffs) > self.r:
            coeffs = _poly_rem([c % p for c in coeffs], self.modulus, p)
        code = 0
        for c in reversed(coeffs):
            code = code * p + c % p
        return code

    def _raw_mul(self, a: int, b: int) -> int:
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * self.r - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.from_coeffs(prod)

    def _raw_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._raw_mul(result, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return result

    @cached_property
    def generator_code(self) -> int:
        """Smallest code whose multiplicative order is q - 1."""
        q = self.q
        if q == 2:
            return 1
        factors = prime_factors(q - 1)
        powfn = (lambda a, e: pow(a, e, q)) if self.r == 1 else self._raw_pow
        for a in range(2, q):
            if all(powfn(a, (q - 1) // f) != 1 for f in factors):
                return a
        raise AssertionError("no multiplicative generator found")  # pragma: no cover

    @cached_property
    def _log_exp(self) -> tuple[list[int], list[int]]:
        q = self.q
        z = self.generator_code
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._raw_mul(exp[i - 1], z)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        return log, exp

    @cached_property
    def _add_table(self) -> list[list[int]]:
        q, p = self.q, self.p
        digits = [self.to_coeffs(a) for a in range(q)]
        return [
            [self.from_coeffs((x + y) % p for x, y in zip(digits[a], digits[b])) for b in range(q)]
            for a in range(q)
        ]

    @cached_property
    def _neg_table(self) -> list[int]:
        p = self.p
        return [self.from_coeffs((-c) % p for c in self.to_coeffs(a)) for a in range(self.q)]

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.r == 1:
            s = a + b
            return s - self.p if s >= self.p else s
        if self.q <= _ADD_TABLE_BOUND:
            return self._add_table[a][b]
        p = self.p
        return self.from_coeffs((x + y) % p for x, y in zip(self.to_coeffs(a), self.to_coeffs(b)))

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        if self.r == 1:
            return self.p - a
        if self.q <= ENUMERATION_BOUND:
            return self._neg_table[a]
        return self.from_coeffs((-c) % self.p for c in self.to_coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self.q > ENUMERATION_BOUND:
            return self._raw_mul(a, b)
        log, exp = self._log_exp
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZeroError("inverse of zero")
        if self.r == 1:
            return pow(a, self.p - 2, self.p)
        if self.q > ENUMERATION_BOUND:
            return self._raw_pow(a, self.q - 2)
        log, exp = self._log_exp
        return exp[(-log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.r == 1:
            return pow(a, e, self.p)
        if self.q > ENUMERATION_BOUND:
            return self._raw_pow(a, e % (self.q - 1) or (self.q - 1))
        log, exp = self._log_exp
        return exp[log[a] * e % (self.q - 1)]

    def frob(self, a: int, e: int = 1) -> int:
        """a ** (p ** e) on codes."""
        e %= self.r
        if e == 0 or a <= 1:
            return a
        return self.pow(a, self.p**e)

    def int_code(self, n: int) -> int:
        """Code of the image of the integer n in F_q."""
        return n % self.p

    # -- element-level convenience -------------------------------------------
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError("element belongs to another field")
            return value
        if isinstance(value, str):
            return FieldElement(self, parse_code(self, value))
        if isinstance(value, int):
            return FieldElement(self, value % self.p)
        return FieldElement(self, self.from_coeffs(value))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def u(self) -> "FieldElement":
        """The class of u (equal to the integer p mod modulus when r == 1)."""
        return FieldElement(self, self.from_coeffs([0, 1]))

    def fp_basis(self) -> list[int]:
        """Codes of 1, u, ..., u^(r-1): an F_p-basis of F_q."""
        return [self.p**i for i in range(self.r)]

    def format_code(self, code: int) -> str:
        if self.r == 1:
            return str(code)
        coeffs = self.to_coeffs(code)
        parts = []
        for i in range(self.r - 1, -1, -1):
            c = coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            mono = "u" if i == 1 else f"u^{i}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts) if parts else "0"


_TERM_RE = re.compile(r"^(\d*)\*?(u(?:\^(\d+))?)?$")


def parse_code(field: Field, text: str) -> int:
    """Parse an element such as ``"u+1"``, ``"2*u^2+1"`` or ``"-u"``."""
    s = text.replace(" ", "").replace("−", "-")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ParseError("empty field element")
    total = 0
    u = field.from_coeffs([0, 1])
    for sign, body in re.findall(r"([+-]?)([^+-]+)", s):
        m = _TERM_RE.match(body)
        if not m or not (m.group(1) or m.group(2)):
            raise ParseError(f"bad field element term {body!r} in {text!r}")
        c = int(m.group(1)) % field.p if m.group(1) else 1
        e = (int(m.group(3)) if m.group(3) else 1) if m.group(2) else 0
        term = field.mul(c, field.pow(u, e))
        total = field.sub(total, term) if sign == "-" else field.add(total, term)
    return total


@dataclass(frozen=True)
class FieldElement:
    field: Field
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.to_coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul(self.code, self.field.inv(b)))

    def __rtruediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul(b, self.field.inv(self.code)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, int(e)))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def frobenius(self, e: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frob(self.code, e))

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.code == other % self.field.p
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.code))

    def __str__(self) -> str:
        return self.field.format_code(self.code)

    def __repr__(self) -> str:
        return f"FieldElement({self.field.describe()!r}, {self})"


def field_create(p: int, r: int = 1, modulus=None) -> Field:
    """Construct F_{p^r}.

    ``modulus`` lists the coefficients of a monic degree-r polynomial from the
    constant term up.  When omitted a built-in irreducible is used (available
    for every p^r <= 64, and for all prime fields).
    """
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if r < 1:
        raise ValueError("r must be positive")
    if modulus is None:
        if r == 1:
            modulus = (0, 1)
        elif (p, r) in DEFAULT_MODULI:
            modulus = DEFAULT_MODULI[(p, r)]
        else:
            raise NoDefaultModulusError(f"no built-in modulus for {p}^{r}; supply one")
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != r + 1 or modulus[-1] != 1:
        raise ReducibleModulusError(f"modulus {modulus} is not monic of degree {r}")
    if r > 1 and not _is_irreducible(modulus, p):
        raise ReducibleModulusError(f"modulus {modulus} is reducible over F_{p}")
    return Field(p, r, modulus)


def gf(q: int, modulus=None) -> Field:
    """Shorthand: the field with q elements."""
    p, r = prime_power(q)
    return field_create(p, r, modulus)


def arith(a: FieldElement, b, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** (b if isinstance(b, int) else b.code)
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def frobenius(a: FieldElement, e: int) -> FieldElement:
    """Return a ** (p ** e)."""
    return a.frobenius(e)


def enumerate_field(field: Field) -> tuple[list[FieldElement], FieldElement]:
    """All q elements (0 first, in code order) and a multiplicative generator."""
    if field.q > ENUMERATION_BOUND:
        raise FieldTooLargeError(f"q = {field.q} exceeds {ENUMERATION_BOUND}")
    return [FieldElement(field, c) for c in range(field.q)], FieldElement(field, field.generator_code)
