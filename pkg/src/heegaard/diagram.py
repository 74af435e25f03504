"""Homological shadows of Heegaard diagrams: two Lagrangians on one surface.

Constructors cover gluing maps, both stabilizations, connected sums, lens
spaces, mirrors, and the genus-3 torus-bundle fixture.  Only homology
classes of the diagram curves are modelled; no curve geometry.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .symplectic import Lagrangian, SymplecticMap, apply_map, embed_vector


@dataclass(frozen=True)
class HeegaardDiagramH1:
    """Genus plus the red (minus/lower) and blue (plus/upper) Lagrangians."""

    genus: int
    minus: Lagrangian
    plus: Lagrangian

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if self.minus.genus != self.genus or self.plus.genus != self.genus:
            raise ValueError("Lagrangian genus does not match diagram genus")


def empty_diagram() -> HeegaardDiagramH1:
    """The genus-0 diagram of the 3-sphere (connected-sum unit)."""
    return HeegaardDiagramH1(0, Lagrangian(0, ()), Lagrangian(0, ()))


def from_gluing(f: SymplecticMap) -> HeegaardDiagramH1:
    """Diagram of the closed manifold glued from two handlebodies along f.

    The lower system is the standard meridians; the upper system is their
    image under f.
    """
    meridians = Lagrangian.standard_meridians(f.genus)
    return HeegaardDiagramH1(f.genus, meridians, apply_map(f, meridians))


def _meridian_row(genus, i):
    return tuple(int(k == i) for k in range(2 * genus))


def _longitude_row(genus, i):
    return tuple(int(k == genus + i) for k in range(2 * genus))


def bar_stabilize(d: HeegaardDiagramH1, k: int) -> HeegaardDiagramH1:
    """Add k new meridians to the minus side and k new longitudes to plus.

    The underlying manifold is unchanged.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return d
    g, h = d.genus, d.genus + k
    minus = [embed_vector(r, g, h) for r in d.minus.rows]
    plus = [embed_vector(r, g, h) for r in d.plus.rows]
    for i in range(g, h):
        minus.append(_meridian_row(h, i))
        plus.append(_longitude_row(h, i))
    return HeegaardDiagramH1(h, Lagrangian(h, tuple(minus)), Lagrangian(h, tuple(plus)))


def hat_stabilize(d: HeegaardDiagramH1, k_prime: int) -> HeegaardDiagramH1:
    """Add the same k' new meridians to both sides.

    Connect-sums the manifold with k' copies of S^1 x S^2.
    """
    if k_prime < 0:
        raise ValueError("k' must be nonnegative")
    if k_prime == 0:
        return d
    g, h = d.genus, d.genus + k_prime
    minus = [embed_vector(r, g, h) for r in d.minus.rows]
    plus = [embed_vector(r, g, h) for r in d.plus.rows]
    for i in range(g, h):
        minus.append(_meridian_row(h, i))
        plus.append(_meridian_row(h, i))
    return HeegaardDiagramH1(h, Lagrangian(h, tuple(minus)), Lagrangian(h, tuple(plus)))


def connected_sum(d1: HeegaardDiagramH1, d2: HeegaardDiagramH1) -> HeegaardDiagramH1:
    """Block sum of the two diagrams, handles of d2 placed after d1's."""
    g1, g2 = d1.genus, d2.genus
    h = g1 + g2
    minus = [embed_vector(r, g1, h, 0) for r in d1.minus.rows] \
        + [embed_vector(r, g2, h, g1) for r in d2.minus.rows]
    plus = [embed_vector(r, g1, h, 0) for r in d1.plus.rows] \
        + [embed_vector(r, g2, h, g1) for r in d2.plus.rows]
    return HeegaardDiagramH1(h, Lagrangian(h, tuple(minus)), Lagrangian(h, tuple(plus)))


def lens(p: int, q: int) -> HeegaardDiagramH1:
    """Genus-1 diagram of the lens space L(p, q); q is normalized mod p."""
    if p <= 0:
        raise ValueError("p must be positive")
    if gcd(p, q) != 1:
        raise ValueError("p and q must be coprime, got gcd(%d, %d) = %d"
                         % (p, q, gcd(p, q)))
    q = q % p
    return HeegaardDiagramH1(1,
                             Lagrangian(1, ((1, 0),)),
                             Lagrangian(1, ((q, p),)))


def mirror(d: HeegaardDiagramH1) -> HeegaardDiagramH1:
    """Orientation reversal at the homology level: x-coordinates negate.

    The reflection x -> -x, p -> p is anti-symplectic; applying it to both
    Lagrangians negates the linking form while preserving H_1.
    """
    g = d.genus

    def reflect(row):
        return tuple(-row[i] if i < g else row[i] for i in range(2 * g))

    return HeegaardDiagramH1(
        g,
        Lagrangian(g, tuple(reflect(r) for r in d.minus.rows)),
        Lagrangian(g, tuple(reflect(r) for r in d.plus.rows)),
    )


def b_fixture() -> HeegaardDiagramH1:
    """Genus-3 diagram realizing the torus bundle with monodromy -identity.

    Lower system x1, x2, x3; upper system x1, x2 + 2*p3, x3 + 2*p2.  Its
    first homology is Z + Z/2 + Z/2 and the torsion pairing is the
    off-diagonal half-integer form, which is hyperbolic but not
    diagonalizable over the integers.
    """
    minus = Lagrangian.standard_meridians(3)
    plus = Lagrangian(3, (
        (1, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 2),
        (0, 0, 1, 0, 2, 0),
    ))
    return HeegaardDiagramH1(3, minus, plus)
