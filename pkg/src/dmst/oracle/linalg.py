"""Dense linear algebra over F_q on numpy arrays of element codes."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..errors import FieldTooLargeError
from ..gf import Field

TABLE_BOUND = 1024


class FqLinalg:
    """Row reduction, null spaces, ranks and products over one field.

    Three code paths: F_2 (uint8 XOR), prime fields (int64 mod p) and
    prime-power fields (lookup tables, restriction of scalars for products).
    """

    def __init__(self, field: Field):
        self.field = field
        self.q, self.p, self.r = field.q, field.p, field.r
        if self.q == 2:
            self.mode = "f2"
            self.dtype = np.uint8
        elif field.is_prime_field:
            self.mode = "prime"
            self.dtype = np.int64
        else:
            if self.q > TABLE_BOUND:
                raise FieldTooLargeError(f"q = {self.q} exceeds the table bound {TABLE_BOUND}")
            self.mode = "table"
            self.dtype = np.int64
            q = self.q
            codes = np.arange(q)
            self.mul_table = np.array([[field.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            self.neg_table = np.array([field.neg(a) for a in range(q)], dtype=np.int64)
            if self.p == 2:
                self.add_table = codes[:, None] ^ codes[None, :]
            else:
                self.add_table = np.array([[field.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            self.digits = np.array([field.to_coeffs(a) for a in range(q)], dtype=np.int64)
            # mul_blocks[c] is the r x r matrix of multiplication by c on F_p-coordinates
            basis = [self.p**d for d in range(self.r)]
            self.mul_blocks = np.array(
                [[[field.to_coeffs(field.mul(c, b))[row] for b in basis] for row in range(self.r)] for c in range(q)],
                dtype=np.int64,
            )
            self.powers = self.p ** np.arange(self.r, dtype=np.int64)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def array(self, data) -> np.ndarray:
        return np.asarray(data, dtype=self.dtype)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=self.dtype)

    def inv(self, a: int) -> int:
        return self.field.inv(int(a))

    def neg(self, a: np.ndarray) -> np.ndarray:
        if self.mode == "f2":
            return a
        if self.mode == "prime":
            return (-a) % self.p
        return self.neg_table[a]

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.mode == "f2":
            return a ^ b
        if self.mode == "prime":
            return (a + b) % self.p
        return self.add_table[a, b]

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add(a, self.neg(b))

    def scale(self, c: int, a: np.ndarray) -> np.ndarray:
        if self.mode == "f2":
            return a if c else np.zeros_like(a)
        if self.mode == "prime":
            return (int(c) * a) % self.p
        return self.mul_table[int(c)][a]

    def _eliminate(self, rows: np.ndarray, factors: np.ndarray, pivot_row: np.ndarray) -> np.ndarray:
        """rows - factors[:, None] * pivot_row."""
        if self.mode == "f2":
            return rows ^ pivot_row[None, :]
        if self.mode == "prime":
            return (rows - factors[:, None] * pivot_row[None, :]) % self.p
        return self.sub(rows, self.mul_table[factors[:, None], pivot_row[None, :]])

    def rref(self, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form; returns the nonzero rows and pivot columns."""
        M = np.array(M, dtype=self.dtype, copy=True)
        nrows, ncols = M.shape
        rank = 0
        pivots: list[int] = []
        for c in range(ncols):
            if rank == nrows:
                break
            nz = np.flatnonzero(M[rank:, c])
            if nz.size == 0:
                continue
            src = rank + int(nz[0])
            if src != rank:
                M[[rank, src]] = M[[src, rank]]
            lead = int(M[rank, c])
            if lead != 1:
                M[rank] = self.scale(self.inv(lead), M[rank])
            others = np.flatnonzero(M[:, c])
            others = others[others != rank]
            if others.size:
                M[others] = self._eliminate(M[others], M[others, c], M[rank])
            pivots.append(c)
            rank += 1
        return M[:rank], pivots

    def rank(self, M: np.ndarray) -> int:
        if M.size == 0:
            return 0
        return len(self.rref(M)[1])

    def nullspace(self, M: np.ndarray) -> np.ndarray:
        """Columns spanning {v : M v = 0}."""
        ncols = M.shape[1]
        if M.shape[0] == 0:
            return self.identity(ncols)
        R, pivots = self.rref(M)
        pivot_set = set(pivots)
        free = [c for c in range(ncols) if c not in pivot_set]
        N = self.zeros((ncols, len(free)))
        if free:
            N[free, np.arange(len(free))] = 1
            if pivots:
                N[pivots, :] = self.neg(R[:, free])
        return N

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if A.shape[1] == 0:
            return self.zeros((A.shape[0], B.shape[1]))
        if self.mode != "table":
            return _matmul_mod(A, B, self.p).astype(self.dtype)
        m, k = A.shape
        n = B.shape[1]
        r = self.r
        big_a = self.mul_blocks[A].transpose(0, 2, 1, 3).reshape(m * r, k * r)
        big_b = self.digits[B].transpose(0, 2, 1).reshape(k * r, n)
        prod = _matmul_mod(big_a, big_b, self.p).reshape(m, r, n)
        return np.tensordot(self.powers, prod, axes=([0], [1])).astype(np.int64)


def _matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """A @ B mod p, through float64 BLAS while every partial sum stays exact."""
    if A.shape[1] * (p - 1) ** 2 < 2**53:
        prod = A.astype(np.float64) @ B.astype(np.float64)
        return np.fmod(prod, p).astype(np.int64)
    return (A.astype(object) @ B.astype(object) % p).astype(np.int64)


@lru_cache(maxsize=None)
def linalg_for(field: Field) -> FqLinalg:
    return FqLinalg(field)
