"""Matrices over F_q, the subgroups GL, SL, U_n, P_I, K_I and their action.

Variables transform by matrix columns: g.x_j = sum_a g[a][j] x_a, and the
y's transform by the same rule.  The twisted action multiplies by det(g)^k.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import SuperAlgebra, SuperElement, Substitution
from .errors import (
    AmbientMismatchError,
    GroupTooLargeError,
    NotInSubgroupError,
    ParseError,
)
from .gf import Field, FieldElement, parse_code


@dataclass(frozen=True)
class Composition:
    """An ordered sequence of positive integers (n_1, ..., n_l)."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(a) for a in self.parts)
        if not parts or any(a < 1 for a in parts):
            raise ValueError(f"composition parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Composition":
        try:
            return cls(tuple(int(a) for a in text.replace(" ", "").strip("()").split(",") if a))
        except ValueError as exc:
            raise ParseError(f"bad composition {text!r}") from exc

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def partial_sums(self) -> tuple[int, ...]:
        """(m_0, m_1, ..., m_l) with m_0 = 0 and m_l = n."""
        out = [0]
        for a in self.parts:
            out.append(out[-1] + a)
        return tuple(out)

    def block_range(self, i: int) -> range:
        """0-based row/column indices of block i (1-based)."""
        m = self.partial_sums
        return range(m[i - 1], m[i])

    def block_of(self) -> list[int]:
        """Block number (1-based) of every 0-based coordinate."""
        out = []
        for i, a in enumerate(self.parts, 1):
            out.extend([i] * a)
        return out

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"

    def __iter__(self):
        return iter(self.parts)


def _det_codes(F: Field, rows) -> int:
    a = [list(r) for r in rows]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = F.neg(det)
        det = F.mul(det, a[c][c])
        inv = F.inv(a[c][c])
        for r in range(c + 1, n):
            if a[r][c]:
                f = F.neg(F.mul(a[r][c], inv))
                a[r] = [F.add(x, F.mul(f, y)) for x, y in zip(a[r], a[c])]
    return det


class GroupMatrix:
    """An invertible n x n matrix over F_q (entries stored as field codes)."""

    __slots__ = ("field", "entries", "_det")

    def __init__(self, field: Field, entries, *, check: bool = True):
        rows = []
        for row in entries:
            out = []
            for v in row:
                if isinstance(v, FieldElement):
                    if v.field != field:
                        raise AmbientMismatchError("entry from another field")
                    out.append(v.code)
                else:
                    out.append(int(v))
            rows.append(tuple(out))
        self.field = field
        self.entries = tuple(rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self._det = None
        if check and self.det_code() == 0:
            raise ValueError("matrix is singular")

    @classmethod
    def identity(cls, field: Field, n: int) -> "GroupMatrix":
        return cls(field, [[int(i == j) for j in range(n)] for i in range(n)], check=False)

    @classmethod
    def elementary(cls, field: Field, n: int, i: int, j: int, b: int) -> "GroupMatrix":
        """I + b E_{i,j} (0-based i, j, b a field code)."""
        rows = [[int(a == c) for c in range(n)] for a in range(n)]
        rows[i][j] = field.add(rows[i][j], b)
        return cls(field, rows)

    @classmethod
    def diagonal(cls, field: Field, diag: Sequence[int]) -> "GroupMatrix":
        n = len(diag)
        return cls(field, [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def parse(cls, field: Field, text: str) -> "GroupMatrix":
        """Rows separated by ';', entries by ','; e.g. ``"1,u;0,1"``."""
        try:
            rows = [[parse_code(field, e) for e in row.split(",")] for row in text.strip().split(";")]
        except Exception as exc:
            raise ParseError(f"bad matrix {text!r}") from exc
        return cls(field, rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, idx) -> FieldElement:
        i, j = idx
        return FieldElement(self.field, self.entries[i][j])

    def det_code(self) -> int:
        if self._det is None:
            self._det = _det_codes(self.field, self.entries)
        return self._det

    def det(self) -> FieldElement:
        return FieldElement(self.field, self.det_code())

    def __matmul__(self, other: "GroupMatrix") -> "GroupMatrix":
        if other.field != self.field or other.n != self.n:
            raise AmbientMismatchError("matrix shapes/fields differ")
        F = self.field
        cols = list(zip(*other.entries))
        rows = []
        for r in self.entries:
            row = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    if a and b:
                        acc = F.add(acc, F.mul(a, b))
                row.append(acc)
            rows.append(row)
        out = GroupMatrix(F, rows, check=False)
        if self._det is not None and other._det is not None:
            out._det = F.mul(self._det, other._det)
        return out

    __mul__ = __matmul__

    def inverse(self) -> "GroupMatrix":
        F = self.field
        n = self.n
        a = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.entries)]
        for c in range(n):
            piv = next(r for r in range(c, n) if a[r][c])
            a[c], a[piv] = a[piv], a[c]
            inv = F.inv(a[c][c])
            a[c] = [F.mul(v, inv) for v in a[c]]
            for r in range(n):
                if r != c and a[r][c]:
                    f = F.neg(a[r][c])
                    a[r] = [F.add(x, F.mul(f, y)) for x, y in zip(a[r], a[c])]
        return GroupMatrix(F, [row[n:] for row in a], check=False)

    def block(self, composition: Composition, i: int) -> "GroupMatrix":
        """The i-th diagonal block g_i of a matrix in P_I."""
        if composition.n != self.n:
            raise NotInSubgroupError("composition does not match matrix size")
        blk = composition.block_of()
        for a in range(self.n):
            for c in range(self.n):
                if blk[a] > blk[c] and self.entries[a][c]:
                    raise NotInSubgroupError(f"entry ({a + 1},{c + 1}) breaks the block upper-triangular shape")
        idx = composition.block_range(i)
        return GroupMatrix(self.field, [[self.entries[a][c] for c in idx] for a in idx])

    def is_identity(self) -> bool:
        return all(v == int(i == j) for i, r in enumerate(self.entries) for j, v in enumerate(r))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupMatrix) and self.field == other.field and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __str__(self) -> str:
        F = self.field
        return ";".join(",".join(F.format_code(v) for v in r) for r in self.entries)

    def __repr__(self) -> str:
        return f"GroupMatrix({self})"


KINDS = ("GL", "SL", "U", "P", "K")


@dataclass(frozen=True)
class SubgroupSpec:
    """One of GL_n, SL_n, U_n, P_I, K_I over ``field``."""

    kind: str
    n: int
    field: Field
    composition: Composition | None = dc_field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind in ("P", "K"):
            comp = self.composition or Composition((self.n,))
            if comp.n != self.n:
                raise ValueError(f"composition {comp} does not sum to {self.n}")
            object.__setattr__(self, "composition", comp)

    @classmethod
    def GL(cls, field: Field, n: int) -> "SubgroupSpec":
        return cls("GL", n, field)

    @classmethod
    def SL(cls, field: Field, n: int) -> "SubgroupSpec":
        return cls("SL", n, field)

    @classmethod
    def U(cls, field: Field, n: int) -> "SubgroupSpec":
        return cls("U", n, field)

    @classmethod
    def P(cls, field: Field, parts) -> "SubgroupSpec":
        comp = parts if isinstance(parts, Composition) else Composition(tuple(parts))
        return cls("P", comp.n, field, comp)

    @classmethod
    def K(cls, field: Field, parts) -> "SubgroupSpec":
        comp = parts if isinstance(parts, Composition) else Composition(tuple(parts))
        return cls("K", comp.n, field, comp)

    def effective_blocks(self) -> tuple[Composition, str]:
        """(composition, block type) with GL = P_(n), SL = K_(n), U = P_(1,...,1) shape."""
        if self.kind == "GL":
            return Composition((self.n,)), "GL"
        if self.kind == "SL":
            return Composition((self.n,)), "SL"
        if self.kind == "U":
            return Composition((1,) * self.n), "trivial"
        return self.composition, ("GL" if self.kind == "P" else "SL")

    def order(self) -> int:
        q = self.field.q
        comp, blocks = self.effective_blocks()
        total = 1
        for a in comp.parts:
            total *= gl_order(q, a) if blocks == "GL" else (sl_order(q, a) if blocks == "SL" else 1)
        m = comp.parts
        cross = sum(m[i] * m[j] for i in range(len(m)) for j in range(i + 1, len(m)))
        return total * q**cross

    def label(self) -> str:
        q = self.field.q
        if self.kind in ("P", "K"):
            return f"{self.kind}{self.composition}({q})"
        return f"{self.kind}_{self.n}({q})"

    def __str__(self) -> str:
        return self.label()


def gl_order(q: int, n: int) -> int:
    return math.prod(q**n - q**i for i in range(n))


def sl_order(q: int, n: int) -> int:
    return gl_order(q, n) // (q - 1)


def normalize_twist(k: int, field: Field) -> int:
    return k % (field.q - 1)


def _block_generators(F: Field, n: int, idx: range, kind: str) -> list[GroupMatrix]:
    gens = []
    if kind == "GL":
        z = F.generator_code
        if z != 1:
            diag = [1] * n
            diag[idx[0]] = z
            gens.append(GroupMatrix.diagonal(F, diag))
    if kind in ("GL", "SL"):
        for a in idx:
            for c in idx:
                if a != c:
                    gens.extend(GroupMatrix.elementary(F, n, a, c, b) for b in F.fp_basis())
    return gens


def generators(spec: SubgroupSpec) -> list[GroupMatrix]:
    """A finite generating set of the subgroup (identity matrices omitted)."""
    F, n = spec.field, spec.n
    if spec.kind == "U":
        return [GroupMatrix.elementary(F, n, i, i + 1, b) for i in range(n - 1) for b in F.fp_basis()]
    comp, blocks = spec.effective_blocks()
    gens = []
    for i in range(1, comp.length + 1):
        gens.extend(_block_generators(F, n, comp.block_range(i), blocks))
    blk = comp.block_of()
    for a in range(n):
        for c in range(a + 1, n):
            if blk[a] < blk[c]:
                gens.extend(GroupMatrix.elementary(F, n, a, c, b) for b in F.fp_basis())
    return gens


def substitution_for(g: GroupMatrix, algebra: SuperAlgebra) -> Substitution:
    """The (untwisted) substitution realizing g on the superalgebra."""
    if g.field != algebra.field or g.n != algebra.n:
        raise AmbientMismatchError("matrix and algebra disagree on field or size")
    n = algebra.n
    x_images, y_images = [], []
    for j in range(n):
        xt, yt = {}, {}
        for a in range(n):
            c = g.entries[a][j]
            if c:
                e = [0] * n
                e[a] = 1
                xt[(tuple(e), 0)] = c
                yt[((0,) * n, 1 << a)] = c
        x_images.append(algebra.element(xt))
        y_images.append(algebra.element(yt))
    return Substitution(algebra, x_images, y_images)


def act(g: GroupMatrix, f: SuperElement, k: int = 0) -> SuperElement:
    """det(g)^k * (g . f)."""
    if g.field != f.field or g.n != f.n:
        raise AmbientMismatchError("matrix and element disagree on field or size")
    out = substitution_for(g, f.algebra)(f)
    k = normalize_twist(k, g.field)
    if k:
        out = out.scale(FieldElement(g.field, g.field.pow(g.det_code(), k)))
    return out


def matrix_ops(g: GroupMatrix, composition: Composition | None = None, i: int | None = None):
    """(det, inverse, block) for g; block is None unless composition and i are given."""
    blk = g.block(composition, i) if composition is not None else None
    return g.det(), g.inverse(), blk


def enumerate_subgroup(spec: SubgroupSpec, bound: int = 10_000) -> list[GroupMatrix]:
    """Every element of the group, by breadth-first closure of the generators."""
    order = spec.order()
    if order > bound:
        raise GroupTooLargeError(f"{spec} has order {order} > {bound}")
    gens = generators(spec)
    ident = GroupMatrix.identity(spec.field, spec.n)
    seen = {ident.entries: ident}
    queue = deque([ident])
    while queue:
        h = queue.popleft()
        for g in gens:
            gh = g @ h
            if gh.entries not in seen:
                seen[gh.entries] = gh
                queue.append(gh)
    if len(seen) != order:
        raise AssertionError(f"closure of {spec} has {len(seen)} elements, expected {order}")
    return sorted(seen.values(), key=lambda m: m.entries)
