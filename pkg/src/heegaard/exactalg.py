"""Exact integer linear algebra: determinants, Smith normal form, solving.

Everything here runs over Python's arbitrary-precision integers; no
floating point enters anywhere in the package.  Matrices are small
(at most a few dozen rows), so the algorithms favour transparency and
exactness over asymptotics: minimal-pivot Smith reduction and
fraction-free Bareiss elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt


class IntMatrix:
    """Immutable dense matrix of exact integers, row-major."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        rows = tuple(tuple(v for v in row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix dimensions must be positive")
        width = len(rows[0])
        for row in rows:
            if len(row) != width:
                raise ValueError("rows have inconsistent lengths")
            for v in row:
                if isinstance(v, bool) or not isinstance(v, int):
                    raise TypeError("matrix entries must be integers, got %r" % (v,))
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, diag) -> "IntMatrix":
        diag = list(diag)
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def row(self, i: int):
        return self.entries[i]

    def column(self, j: int):
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        cols = other.transpose().entries
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries]
        )

    def apply(self, vector):
        """Matrix times column vector, returned as a tuple."""
        vec = tuple(vector)
        if len(vec) != self.cols:
            raise ValueError("vector length %d does not match %d columns"
                             % (len(vec), self.cols))
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.entries)

    def main_diagonal(self):
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "IntMatrix(%r)" % (list(map(list, self.entries)),)


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ M @ V == D with U, V unimodular and D the Smith form of M."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self):
        return self.d.main_diagonal()

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def snf(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transformation matrices.

    Returns ``SmithDecomposition(u, d, v)`` with ``u @ m @ v == d``,
    ``|det u| == |det v| == 1``, ``d`` diagonal with nonnegative entries
    forming a divisibility chain (zeros trailing).  Pivots are chosen by
    minimal absolute value to limit intermediate growth.
    """
    nr, nc = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(nr, nc)
    while t < limit:
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x != 0 and (piv is None or abs(x) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        if piv[0] != t:
            swap_rows(t, piv[0])
        if piv[1] != t:
            swap_cols(t, piv[1])

        while True:
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    if q:
                        add_row(i, t, -q)
                    if a[i][t] != 0:
                        # remainder strictly smaller than the pivot: promote it
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    if q:
                        add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty and all(a[i][t] == 0 for i in range(t + 1, nr)) \
                    and all(a[t][j] == 0 for j in range(t + 1, nc)):
                break

        # divisibility chain: the pivot must divide the remaining submatrix
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue

        if a[t][t] < 0:
            negate_row(t)
        t += 1

    return SmithDecomposition(IntMatrix(u), IntMatrix(a), IntMatrix(v))


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square:
        raise ValueError("determinant requires a square matrix")
    n = m.rows
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_integer(m: IntMatrix, b):
    """Some integer solution x of m @ x == b, or None when none exists.

    Any valid solution may be returned; callers must not depend on the
    particular representative.
    """
    b = tuple(b)
    if len(b) != m.rows:
        raise ValueError("right-hand side length %d does not match %d rows"
                         % (len(b), m.rows))
    dec = snf(m)
    c = dec.u.apply(b)
    diag = dec.diagonal
    y = [0] * m.cols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d != 0:
            if ci % d != 0:
                return None
            y[i] = ci // d
        elif ci != 0:
            return None
    return dec.v.apply(y)


def invert_unimodular(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    if not m.is_square:
        raise ValueError("only square matrices can be unimodular")
    dec = snf(m)
    if any(x != 1 for x in dec.diagonal):
        raise ValueError("matrix is not unimodular")
    # u @ m @ v == I, hence m^{-1} == v @ u
    return dec.v @ dec.u


def is_perfect_square(n: int) -> bool:
    """True iff n == k*k for some integer k; 0 and 1 count as squares."""
    if n < 0:
        raise ValueError("perfect-square test is defined for nonnegative integers")
    r = isqrt(n)
    return r * r == n
