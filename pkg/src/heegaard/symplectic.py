"""The symplectic lattice (Z^{2g}, omega), maps, Lagrangians, stabilizations.

Basis convention, fixed package-wide: coordinates are ordered
(x_1, ..., x_g, p_1, ..., p_g), so index i < g is the meridian class x_{i+1}
and index g + i is the longitude class p_{i+1}.  The pairing is
omega(x_i, p_j) = delta_ij, omega(p_j, x_i) = -delta_ij, zero otherwise.
Maps act on column vectors; Lagrangians store curve classes as rows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactalg import IntMatrix, snf


def omega(u, v) -> int:
    """Symplectic intersection pairing of two coordinate vectors."""
    u = tuple(u)
    v = tuple(v)
    if len(u) != len(v):
        raise ValueError("vectors of lengths %d and %d" % (len(u), len(v)))
    if len(u) % 2 != 0:
        raise ValueError("vector length must be even, got %d" % len(u))
    g = len(u) // 2
    return sum(u[i] * v[g + i] - u[g + i] * v[i] for i in range(g))


def symplectic_gram(genus: int) -> IntMatrix:
    """The Gram matrix J of omega at the given genus."""
    if genus < 1:
        raise ValueError("genus must be positive")
    n = 2 * genus
    rows = [[0] * n for _ in range(n)]
    for i in range(genus):
        rows[i][genus + i] = 1
        rows[genus + i][i] = -1
    return IntMatrix(rows)


def is_symplectic_map(matrix: IntMatrix, genus: int) -> bool:
    """True iff F^T J F == J for the 2g x 2g matrix F."""
    if matrix.rows != 2 * genus or matrix.cols != 2 * genus:
        raise ValueError("expected a %dx%d matrix" % (2 * genus, 2 * genus))
    j = symplectic_gram(genus)
    return matrix.transpose() @ j @ matrix == j


@dataclass(frozen=True)
class SymplecticMap:
    """An element of Sp(2g, Z) acting on column vectors."""

    genus: int
    matrix: IntMatrix

    def __post_init__(self):
        if not is_symplectic_map(self.matrix, self.genus):
            raise ValueError("matrix does not preserve the symplectic form")

    @classmethod
    def identity(cls, genus: int) -> "SymplecticMap":
        return cls(genus, IntMatrix.identity(2 * genus))

    @classmethod
    def rotation(cls) -> "SymplecticMap":
        """Genus-1 quarter turn: x -> -p, p -> x (so (a,b) -> (b,-a))."""
        return cls(1, IntMatrix([[0, 1], [-1, 0]]))

    @classmethod
    def shear(cls) -> "SymplecticMap":
        """Genus-1 shear sending x to the diagonal x + p."""
        return cls(1, IntMatrix([[1, 0], [1, 1]]))

    def apply(self, vector):
        return self.matrix.apply(vector)

    def __matmul__(self, other: "SymplecticMap") -> "SymplecticMap":
        if self.genus != other.genus:
            raise ValueError("genus mismatch in composition")
        return SymplecticMap(self.genus, self.matrix @ other.matrix)

    def embed(self, genus: int) -> "SymplecticMap":
        """Extend by the identity on extra handles, up to the given genus."""
        if genus < self.genus:
            raise ValueError("cannot embed into smaller genus")
        return hat_stabilize_map(self, 0, genus - self.genus)


def _lagrangian_violation(rows, genus):
    """None if the rows span a Lagrangian, else a human-readable reason."""
    rows = [tuple(r) for r in rows]
    if len(rows) != genus:
        return "expected %d rows, got %d" % (genus, len(rows))
    for r in rows:
        if len(r) != 2 * genus:
            return "row length %d does not match genus %d" % (len(r), genus)
    for i in range(genus):
        for j in range(i, genus):
            w = omega(rows[i], rows[j])
            if w != 0:
                return ("rows %d and %d have nonzero intersection pairing (%d)"
                        % (i + 1, j + 1, w))
    if genus == 0:
        return None
    diag = snf(IntMatrix(rows)).diagonal
    if list(diag) != [1] * genus:
        return ("row lattice is not primitive of full rank "
                "(invariant factors %s)" % (list(diag),))
    return None


def is_lagrangian(rows, genus: int) -> bool:
    """True iff the g rows are isotropic and span a primitive rank-g lattice."""
    if isinstance(rows, IntMatrix):
        rows = rows.entries
    return _lagrangian_violation(rows, genus) is None


@dataclass(frozen=True)
class Lagrangian:
    """g curve classes spanning a direct summand of Z^{2g} killed by omega."""

    genus: int
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        reason = _lagrangian_violation(rows, self.genus)
        if reason is not None:
            raise ValueError("not a Lagrangian: " + reason)

    @classmethod
    def standard_meridians(cls, genus: int) -> "Lagrangian":
        rows = [tuple(int(k == i) for k in range(2 * genus)) for i in range(genus)]
        return cls(genus, tuple(rows))

    def matrix(self) -> IntMatrix:
        if self.genus == 0:
            raise ValueError("genus-0 Lagrangian has no row matrix")
        return IntMatrix(self.rows)


def apply_map(f: SymplecticMap, lag: Lagrangian) -> Lagrangian:
    """Image Lagrangian with row i = F applied to row i."""
    if f.genus != lag.genus:
        raise ValueError("genus mismatch: map has %d, Lagrangian has %d"
                         % (f.genus, lag.genus))
    return Lagrangian(lag.genus, tuple(f.apply(r) for r in lag.rows))


def embed_vector(vector, old_genus: int, new_genus: int, offset: int = 0):
    """Reindex a 2g-vector into coordinates of a larger surface.

    Handle i of the old surface becomes handle offset + i of the new one.
    """
    if old_genus + offset > new_genus:
        raise ValueError("embedded handles exceed the target genus")
    out = [0] * (2 * new_genus)
    for i in range(old_genus):
        out[offset + i] = vector[i]
        out[new_genus + offset + i] = vector[old_genus + i]
    return tuple(out)


def bar_stabilize_map(f: SymplecticMap, k: int) -> SymplecticMap:
    """Direct sum with k copies of the meridian/longitude exchange block.

    Each new handle carries the block sending m -> l and l -> -m, i.e.
    [[0, -1], [1, 0]] in that handle's (x, p) coordinates.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return f
    g, h = f.genus, f.genus + k
    rows = [[0] * (2 * h) for _ in range(2 * h)]
    for i in range(2 * g):
        ii = i if i < g else h + (i - g)
        for j in range(2 * g):
            jj = j if j < g else h + (j - g)
            rows[ii][jj] = f.matrix[i, j]
    for i in range(g, h):
        rows[i][h + i] = -1
        rows[h + i][i] = 1
    return SymplecticMap(h, IntMatrix(rows))


def hat_stabilize_map(f: SymplecticMap, k: int, k_prime: int) -> SymplecticMap:
    """Bar-stabilize by k, then extend by the identity on k' more handles."""
    if k < 0 or k_prime < 0:
        raise ValueError("stabilization counts must be nonnegative")
    barred = bar_stabilize_map(f, k)
    if k_prime == 0:
        return barred
    g, h = barred.genus, barred.genus + k_prime
    rows = [[0] * (2 * h) for _ in range(2 * h)]
    for i in range(2 * g):
        ii = i if i < g else h + (i - g)
        for j in range(2 * g):
            jj = j if j < g else h + (j - g)
            rows[ii][jj] = barred.matrix[i, j]
    for i in range(g, h):
        rows[i][i] = 1
        rows[h + i][h + i] = 1
    return SymplecticMap(h, IntMatrix(rows))


def transvection(genus: int, direction, power: int = 1) -> SymplecticMap:
    """The symplectic transvection u -> u + c * omega(u, v) * v."""
    v = tuple(direction)
    n = 2 * genus
    if len(v) != n:
        raise ValueError("direction must have length %d" % n)
    cols = []
    for j in range(n):
        e = tuple(int(k == j) for k in range(n))
        w = power * omega(e, v)
        cols.append(tuple(e[i] + w * v[i] for i in range(n)))
    return SymplecticMap(genus, IntMatrix(zip(*cols)))


def transvection_directions(genus: int):
    """A standard generating family of primitive directions for sampling."""
    n = 2 * genus
    basis = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    dirs = list(basis)
    for i in range(n):
        for j in range(i + 1, n):
            dirs.append(tuple(a + b for a, b in zip(basis[i], basis[j])))
            dirs.append(tuple(a - b for a, b in zip(basis[i], basis[j])))
    return dirs


def random_symplectic_map(genus: int, length: int, rng) -> SymplecticMap:
    """A word of the given length in random transvection generators.

    ``rng`` is a ``random.Random``-compatible source; fixing its seed makes
    the sample reproducible.
    """
    dirs = transvection_directions(genus)
    f = SymplecticMap.identity(genus)
    for _ in range(length):
        v = rng.choice(dirs)
        f = transvection(genus, v, rng.choice((1, -1))) @ f
    return f
