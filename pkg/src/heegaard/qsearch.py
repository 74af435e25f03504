"""Genus-1 torsion forms, the UB0 scan, and the open non-square search.

``question_q_search`` asks, for a fixed symplectic map theta, whether some
Lagrangian L makes the torsion of Z^{2g} / (L + theta L) a non-square.
Candidates stream in a fixed lexicographic order so that exhaustive claims
("no witness up to entry bound N") and found witnesses are reproducible
under any degree of parallelism.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from heapq import merge
from itertools import combinations, islice, product
from math import gcd

from .exactalg import IntMatrix, is_perfect_square, snf
from .homology import AbelianGroup
from .symplectic import Lagrangian, SymplecticMap, apply_map, is_lagrangian


def genus1_torsion_form(f: SymplecticMap):
    """Coefficients (A, B, C) with torsion(a, b) = |A a^2 + B ab + C b^2|.

    The identity det[(a,b)^T | F (a,b)^T] = A a^2 + B ab + C b^2 holds
    symbolically; the triple is normalized so its first nonzero
    coefficient is positive.
    """
    if f.genus != 1:
        raise ValueError("torsion form is defined for genus-1 maps")
    m = f.matrix
    coeffs = (m[1, 0], m[1, 1] - m[0, 0], -m[0, 1])
    for c in coeffs:
        if c != 0:
            if c < 0:
                coeffs = tuple(-x for x in coeffs)
            break
    return coeffs


def _genus1_torsion(f: SymplecticMap, a: int, b: int) -> int:
    image = f.apply((a, b))
    return abs(a * image[1] - b * image[0])


def _canonical_pairs(bound: int):
    """Primitive (a, b), one per +-pair, with 0 < max(|a|, |b|) <= bound."""
    for a in range(0, bound + 1):
        for b in range(-bound, bound + 1):
            if a == 0 and b <= 0:
                continue
            if gcd(a, abs(b)) == 1:
                yield (a, b)


@dataclass(frozen=True)
class Ub0Scan:
    """Genus-1 scan output: which meridian images evade the square test."""

    bound: int
    squares: tuple        # (a, b, torsion) with torsion a nonzero square
    zero_torsion: tuple   # (a, b) whose determinant vanishes
    examined: int


def ub0_scan(f: SymplecticMap, bound: int) -> Ub0Scan:
    """Scan all primitive meridian images up to the bound.

    An empty ``squares`` list is evidence for the unstable unlink-busting
    property: no conjugate of the gluing map produces a manifold passing
    the square-order test.  Pairs with vanishing determinant are its own
    category (extra free rank, no torsion statement).
    """
    if f.genus != 1:
        raise ValueError("the UB0 scan is defined for genus-1 maps")
    if bound < 1:
        raise ValueError("bound must be positive")
    squares = []
    zeros = []
    examined = 0
    for a, b in _canonical_pairs(bound):
        examined += 1
        t = _genus1_torsion(f, a, b)
        if t == 0:
            zeros.append((a, b))
        elif is_perfect_square(t):
            squares.append((a, b, t))
    return Ub0Scan(bound, tuple(squares), tuple(zeros), examined)


# ---------------------------------------------------------------------------
# Lagrangian enumeration


def entry_key(value: int):
    """Entry order 0 < 1 < -1 < 2 < -2 < ... used by the candidate stream."""
    return (abs(value), value < 0)


def matrix_key(rows):
    return tuple(entry_key(v) for row in rows for v in row)


def _signed_range(bound: int):
    out = [0]
    for v in range(1, bound + 1):
        out.extend((v, -v))
    return out


def _pivot_stream(genus, bound, pivot_cols, pivot_vals):
    """All Hermite-shaped matrices for one pivot layout, in key order."""
    width = 2 * genus
    domains = []
    for i in range(genus):
        for j in range(width):
            if j < pivot_cols[i]:
                domains.append((0,))
            elif j == pivot_cols[i]:
                domains.append((pivot_vals[i],))
            else:
                later = next((m for m in range(i + 1, genus)
                              if pivot_cols[m] == j), None)
                if later is not None:
                    domains.append(tuple(range(min(pivot_vals[later], bound + 1))))
                else:
                    domains.append(tuple(_signed_range(bound)))

    def rec(slot, flat):
        if slot == len(domains):
            rows = tuple(tuple(flat[r * width:(r + 1) * width])
                         for r in range(genus))
            if is_lagrangian(rows, genus):
                yield Lagrangian(genus, rows)
            return
        for v in domains[slot]:
            yield from rec(slot + 1, flat + [v])

    yield from rec(0, [])


def enumerate_lagrangians(genus: int, bound: int):
    """Every Lagrangian with a Hermite-reduced row matrix bounded by N.

    Emits each candidate exactly once (the Hermite basis is the canonical
    representative of its row span), lexicographically by the entry order
    0 < 1 < -1 < 2 < -2 < ...  That order makes (1,1) precede (1,-1), so
    pinned witnesses stay stable.
    """
    if genus < 1:
        raise ValueError("genus must be positive")
    if bound < 1:
        raise ValueError("entry bound must be positive")
    streams = []
    for pivot_cols in combinations(range(2 * genus), genus):
        for pivot_vals in product(range(1, bound + 1), repeat=genus):
            streams.append(_pivot_stream(genus, bound, pivot_cols, pivot_vals))
    yield from merge(*streams, key=lambda lag: matrix_key(lag.rows))


# ---------------------------------------------------------------------------
# the Question Q search


@dataclass(frozen=True)
class QSearchResult:
    status: str               # "found" | "exhausted"
    witness: object           # Lagrangian, or None when exhausted
    torsion: object           # int, or None when exhausted
    entry_bound: int
    examined: int

    def __post_init__(self):
        if self.status == "found":
            if self.torsion == 0 or is_perfect_square(self.torsion):
                raise ValueError("a witness must carry non-square torsion")


def candidate_quotient(theta: SymplecticMap, lag: Lagrangian) -> AbelianGroup:
    """Z^{2g} modulo the span of L together with theta L."""
    rows = list(lag.rows) + list(apply_map(theta, lag).rows)
    dec = snf(IntMatrix(rows))
    return AbelianGroup.from_presentation(2 * theta.genus, dec.diagonal)


def question_q_search(theta: SymplecticMap, entry_bound: int,
                      threads: int = 1, chunk_size: int = 64) -> QSearchResult:
    """First Lagrangian (in stream order) whose quotient torsion is non-square.

    The witness and the examined count are independent of ``threads``:
    candidates are evaluated in deterministic chunks and the earliest
    witness wins.
    """
    stream = enumerate_lagrangians(theta.genus, entry_bound)

    def hit(group: AbelianGroup):
        return not is_perfect_square(group.torsion_order)

    if threads <= 1:
        examined = 0
        for lag in stream:
            examined += 1
            group = candidate_quotient(theta, lag)
            if hit(group):
                return QSearchResult("found", lag, group.torsion_order,
                                     entry_bound, examined)
        return QSearchResult("exhausted", None, None, entry_bound, examined)

    def evaluate(chunk):
        return [(lag, candidate_quotient(theta, lag)) for lag in chunk]

    total = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = deque()
        start = 0
        exhausted = False
        while True:
            while not exhausted and len(pending) < threads + 1:
                chunk = list(islice(stream, chunk_size))
                if not chunk:
                    exhausted = True
                    break
                pending.append((start, pool.submit(evaluate, chunk)))
                start += len(chunk)
            if not pending:
                return QSearchResult("exhausted", None, None, entry_bound, start)
            base, fut = pending.popleft()
            for offset, (lag, group) in enumerate(fut.result()):
                total = base + offset + 1
                if hit(group):
                    for _, other in pending:
                        other.cancel()
                    return QSearchResult("found", lag, group.torsion_order,
                                         entry_bound, total)
