"""Rational matrices and the p-reduced row normal form.

The normal form is an echelon-like shape over Q whose pivots are powers of
p and whose above-pivot entries keep only digits below the pivot's
valuation.  It is computed by row operations that stay inside
GL(n, Z_p cap Q) (unit scalings, p-integral row additions, swaps), so the
transformer matrix and its inverse both have p-free denominators and unit
determinant.  The form is unique per row space, which the test suite
exercises directly.
"""

from __future__ import annotations

from .errors import NonSquare
from .rationals import Q, QONE, QZERO, ordp, qpow, head_tail, qformat, qparse


class RationalMatrix:
    """Immutable rectangular matrix of rationals."""

    __slots__ = ("entries",)

    def __init__(self, rows):
        self.entries = tuple(tuple(Q(c) for c in row) for row in rows)
        if self.entries:
            w = len(self.entries[0])
            if any(len(r) != w for r in self.entries):
                raise ValueError("ragged rows")

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[QONE if i == j else QZERO for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        rows = "; ".join(" ".join(qformat(c) for c in row) for row in self.entries)
        return f"RationalMatrix[{rows}]"

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        ot = list(zip(*other.entries))
        return RationalMatrix(
            [[sum((a * b for a, b in zip(row, col)), QZERO) for col in ot] for row in self.entries]
        )

    def __matmul__(self, other):
        return self.matmul(other)

    def apply(self, vector):
        """Row-wise linear combination; works for any scalar-multipliable
        vector entries (rationals or field elements)."""
        if len(vector) != self.ncols:
            raise ValueError("shape mismatch")
        out = []
        for row in self.entries:
            acc = None
            for c, x in zip(row, vector):
                term = x * c
                acc = term if acc is None else acc + term
            out.append(acc)
        return tuple(out)

    def inverse(self) -> "RationalMatrix":
        if not self.is_square():
            raise NonSquare("inverse of non-square matrix")
        n = self.nrows
        a = [list(row) + [QONE if i == j else QZERO for j in range(n)] for i, row in enumerate(self.entries)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            inv = QONE / a[col][col]
            a[col] = [c * inv for c in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return RationalMatrix([row[n:] for row in a])

    def rank(self) -> int:
        a = [list(row) for row in self.entries]
        rank = 0
        for col in range(self.ncols):
            piv = next((r for r in range(rank, self.nrows) if a[r][col]), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            inv = QONE / a[rank][col]
            a[rank] = [c * inv for c in a[rank]]
            for r in range(self.nrows):
                if r != rank and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
            rank += 1
            if rank == self.nrows:
                break
        return rank

    def det(self):
        if not self.is_square():
            raise NonSquare("determinant of non-square matrix")
        a = [list(row) for row in self.entries]
        n = self.nrows
        det = QONE
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                return QZERO
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            det *= a[col][col]
            inv = QONE / a[col][col]
            for r in range(col + 1, n):
                if a[r][col]:
                    f = a[r][col] * inv
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return det

    def to_json(self):
        return [[qformat(c) for c in row] for row in self.entries]

    @classmethod
    def from_json(cls, data) -> "RationalMatrix":
        return cls([[qparse(c) for c in row] for row in data])


def p_reduce(matrix: RationalMatrix, p: int):
    """Reduce a square matrix to its p-reduced form.

    Returns (M', N) with M' = N @ matrix exactly, N invertible with
    p-integral entries.  Pivot choice per column: among nonzero candidates
    at or below the cursor row, the least row index attaining the maximal
    p-adic absolute value (minimal valuation).  Below-pivot entries are
    eliminated fully; above-pivot entries lose only the digit tail from the
    pivot's valuation upward.
    """
    if not matrix.is_square():
        raise NonSquare("p_reduce requires a square matrix")
    n = matrix.nrows
    rows = [list(r) for r in matrix.entries]
    acc = [list(r) for r in RationalMatrix.identity(n).entries]

    def combine(dst, src, factor):
        rows[dst] = [x - factor * y for x, y in zip(rows[dst], rows[src])]
        acc[dst] = [x - factor * y for x, y in zip(acc[dst], acc[src])]

    k1 = 0
    for k2 in range(n):
        cands = [i for i in range(k1, n) if rows[i][k2]]
        if not cands:
            continue
        best = min(ordp(rows[i][k2], p) for i in cands)
        m = next(i for i in cands if ordp(rows[i][k2], p) == best)
        if m != k1:
            rows[k1], rows[m] = rows[m], rows[k1]
            acc[k1], acc[m] = acc[m], acc[k1]
        pivot = rows[k1][k2]
        for i in range(k1 + 1, n):
            if rows[i][k2]:
                combine(i, k1, rows[i][k2] / pivot)
        scale = qpow(p, best) / pivot
        rows[k1] = [c * scale for c in rows[k1]]
        acc[k1] = [c * scale for c in acc[k1]]
        pivot = rows[k1][k2]  # now p**best
        for i in range(k1):
            t = head_tail(rows[i][k2], p, best - 1)[1]
            if t:
                combine(i, k1, t / pivot)
        k1 += 1
    return RationalMatrix(rows), RationalMatrix(acc)


def is_p_reduced(matrix: RationalMatrix, p: int) -> bool:
    """Literal check of the four normal-form clauses."""
    if not matrix.is_square():
        raise NonSquare("is_p_reduced requires a square matrix")
    n = matrix.nrows
    steps = []
    for i in range(n):
        row = matrix.entries[i]
        u = 0
        while u < n and not row[u]:
            u += 1
        # u is forced: entries before it vanish, and if u < n the next
        # entry must be the pivot.
        if u < n:
            piv = row[u]
            e = ordp(piv, p)
            if piv != qpow(p, e):
                return False
            for k in range(i + 1, n):
                if matrix.entries[k][u]:
                    return False
            for j in range(i):
                if head_tail(matrix.entries[j][u], p, e - 1)[1]:
                    return False
        steps.append(u)
    return all(steps[i] >= steps[i - 1] for i in range(1, n))
