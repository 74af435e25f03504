"""First homology of the manifold behind a diagram, and the square test."""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import HeegaardDiagramH1
from .exactalg import IntMatrix, is_perfect_square, snf
from .symplectic import omega


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: free rank plus invariant factors.

    Factors are at least 2 and form a divisibility chain d1 | d2 | ...
    """

    free_rank: int
    invariant_factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(self.invariant_factors))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        factors = self.invariant_factors
        for f in factors:
            if f < 2:
                raise ValueError("invariant factors must be at least 2")
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")

    @classmethod
    def from_presentation(cls, ambient_rank: int, smith_diagonal) -> "AbelianGroup":
        """Quotient of Z^ambient_rank by relations with the given Smith diagonal."""
        diag = list(smith_diagonal)
        rank = ambient_rank - sum(1 for d in diag if d != 0)
        return cls(rank, tuple(d for d in diag if d >= 2))

    @property
    def torsion_order(self) -> int:
        t = 1
        for f in self.invariant_factors:
            t *= f
        return t

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def __str__(self):
        parts = ["Z"] * self.free_rank + ["Z/%d" % f for f in self.invariant_factors]
        return " + ".join(parts) if parts else "0"


def intersection_matrix(d: HeegaardDiagramH1) -> IntMatrix:
    """The g x g boundary pairing: entry (i, j) = omega(minus_i, plus_j)."""
    if d.genus == 0:
        raise ValueError("genus-0 diagram has no intersection matrix")
    return IntMatrix([
        [omega(mi, pj) for pj in d.plus.rows] for mi in d.minus.rows
    ])


def relation_matrix(d: HeegaardDiagramH1) -> IntMatrix:
    """2g x 2g matrix whose columns are all diagram curves.

    H_1 of the manifold is Z^{2g} modulo the column span; the first g
    columns come from the minus side, the rest from plus.
    """
    if d.genus == 0:
        raise ValueError("genus-0 diagram has no relation matrix")
    cols = list(d.minus.rows) + list(d.plus.rows)
    return IntMatrix(zip(*cols))


def first_homology(d: HeegaardDiagramH1) -> AbelianGroup:
    """H_1 of the closed manifold: cokernel of the intersection matrix."""
    if d.genus == 0:
        return AbelianGroup(0, ())
    dec = snf(intersection_matrix(d))
    return AbelianGroup.from_presentation(d.genus, dec.diagonal)


def torsion_order(d: HeegaardDiagramH1) -> int:
    """Order of the torsion subgroup of H_1 (1 when torsion-free)."""
    return first_homology(d).torsion_order


def hantzsche_square_test(d: HeegaardDiagramH1) -> bool:
    """Necessary embedding condition: the torsion order is a perfect square."""
    return is_perfect_square(torsion_order(d))
