#!/usr/bin/env python3
"""
🔢 Exact Integer Linear Algebra
Smith normal form with unimodular transforms, determinants, ranks, kernels and cokernels
over arbitrary-precision Python integers.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from .abelian import AbelianGroup, normalize
from .errors import InvalidInputError

logger = logging.getLogger("cohomog7.intlinalg")


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense rows x cols integer matrix stored row-major"""
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'entries', tuple(int(e) for e in self.entries))
        if self.rows < 1 or self.cols < 1:
            raise InvalidInputError(f"matrix dimensions must be positive, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise InvalidInputError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        if not rows or not rows[0]:
            raise InvalidInputError("matrix must have at least one row and one column")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise InvalidInputError("ragged matrix rows")
        return cls(len(rows), width, tuple(e for row in rows for e in row))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "IntegerMatrix":
        return cls.from_rows(list(zip(*columns)))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def to_rows(self) -> List[List[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise InvalidInputError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        a, b = self.to_rows(), other.to_rows()
        product = [
            [sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntegerMatrix.from_rows(product)

    def diagonal(self) -> List[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix([[ZZ(e) for e in row] for row in self.to_rows()], (self.rows, self.cols), ZZ)


@dataclass(frozen=True)
class SnfDecomposition:
    """U * A * V = D with U, V unimodular and D diagonal with a non-negative divisor chain"""
    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> List[int]:
        return self.D.diagonal()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


class _Reduction:
    """Mutable working copy of A together with the accumulated row (U) and column (V) operations"""

    def __init__(self, a: IntegerMatrix):
        self.m, self.n = a.rows, a.cols
        self.A = a.to_rows()
        self.U = IntegerMatrix.identity(self.m).to_rows()
        self.V = IntegerMatrix.identity(self.n).to_rows()

    def swap_rows(self, i: int, k: int):
        if i != k:
            for M in (self.A, self.U):
                M[i], M[k] = M[k], M[i]

    def swap_cols(self, j: int, k: int):
        if j != k:
            for M in (self.A, self.V):
                for row in M:
                    row[j], row[k] = row[k], row[j]

    def add_row(self, target: int, source: int, factor: int):
        """row[target] += factor * row[source]"""
        for M in (self.A, self.U):
            M[target] = [x + factor * y for x, y in zip(M[target], M[source])]

    def add_col(self, target: int, source: int, factor: int):
        """col[target] += factor * col[source]"""
        for M in (self.A, self.V):
            for row in M:
                row[target] += factor * row[source]

    def negate_row(self, i: int):
        for M in (self.A, self.U):
            M[i] = [-x for x in M[i]]

    def smallest_entry(self, t: int) -> Optional[Tuple[int, int]]:
        best = None
        for i in range(t, self.m):
            for j in range(t, self.n):
                value = abs(self.A[i][j])
                if value and (best is None or value < best[0]):
                    best = (value, i, j)
        return None if best is None else (best[1], best[2])

    def clear_cross(self, t: int) -> bool:
        """Reduce row t and column t modulo the pivot; True when both are now zero off the pivot"""
        p = self.A[t][t]
        cleared = True
        for i in range(t + 1, self.m):
            q = self.A[i][t] // p
            if q:
                self.add_row(i, t, -q)
            if self.A[i][t]:
                cleared = False
        for j in range(t + 1, self.n):
            q = self.A[t][j] // p
            if q:
                self.add_col(j, t, -q)
            if self.A[t][j]:
                cleared = False
        return cleared

    def indivisible_row(self, t: int) -> Optional[int]:
        p = self.A[t][t]
        for i in range(t + 1, self.m):
            if any(self.A[i][j] % p for j in range(t + 1, self.n)):
                return i
        return None

    def run(self) -> SnfDecomposition:
        for t in range(min(self.m, self.n)):
            while True:
                pivot = self.smallest_entry(t)
                if pivot is None:
                    return self.result()
                self.swap_rows(t, pivot[0])
                self.swap_cols(t, pivot[1])
                if not self.clear_cross(t):
                    continue
                row = self.indivisible_row(t)
                if row is not None:
                    self.add_row(t, row, 1)
                    continue
                if self.A[t][t] < 0:
                    self.negate_row(t)
                break
        return self.result()

    def result(self) -> SnfDecomposition:
        return SnfDecomposition(
            U=IntegerMatrix.from_rows(self.U),
            D=IntegerMatrix.from_rows(self.A),
            V=IntegerMatrix.from_rows(self.V),
        )


def smith_normal_form(a: IntegerMatrix) -> SnfDecomposition:
    """Smith normal form, always pivoting on the smallest non-zero absolute value"""
    decomposition = _Reduction(a).run()
    logger.debug("SNF of %s: diagonal %s", a.to_rows(), decomposition.diagonal)
    return decomposition


def determinant(a: IntegerMatrix) -> int:
    if not a.is_square():
        raise InvalidInputError(f"determinant needs a square matrix, got {a.rows}x{a.cols}")
    return int(a.to_domain_matrix().det())


def rank(a: IntegerMatrix) -> int:
    return smith_normal_form(a).rank


def kernel_rank(a: IntegerMatrix) -> int:
    """Rank of the kernel lattice of Z^cols -> Z^rows"""
    return a.cols - rank(a)


def cokernel(a: IntegerMatrix) -> AbelianGroup:
    """Z^rows / image(a)"""
    snf = smith_normal_form(a)
    nonzero = [d for d in snf.diagonal if d != 0]
    return normalize([0] * (a.rows - len(nonzero)) + nonzero)
