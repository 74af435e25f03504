"""Exact homological invariants of 3-manifolds from Heegaard diagrams.

The package computes, over exact integer arithmetic: first homology,
torsion linking forms (two independent ways), the Hantzsche embedding
obstruction with its homologically-doubly-unlinked refinement, and the
combinatorial search for Lagrangians with non-square torsion under a
symplectic gluing map.
"""

from .diagram import (HeegaardDiagramH1, b_fixture, bar_stabilize,
                      connected_sum, empty_diagram, from_gluing,
                      hat_stabilize, lens, mirror)
from .exactalg import (IntMatrix, SmithDecomposition, det, invert_unimodular,
                       is_perfect_square, snf, solve_integer)
from .homology import (AbelianGroup, first_homology, hantzsche_square_test,
                       intersection_matrix, relation_matrix, torsion_order)
from .linkform import (BoundExceededError, DiagonalPresentation, HduVerdict,
                       HyperbolicSplit, LinkingForm, NotTorsionError,
                       TorsionClass, diagonalize, forms_isomorphic,
                       hdu_verdict, is_hyperbolic, is_nonsingular,
                       linking_form, linking_number, torsion_generators)
from .qsearch import (QSearchResult, Ub0Scan, enumerate_lagrangians,
                      genus1_torsion_form, question_q_search, ub0_scan)
from .symplectic import (Lagrangian, SymplecticMap, apply_map,
                         bar_stabilize_map, hat_stabilize_map, is_lagrangian,
                         is_symplectic_map, omega, random_symplectic_map,
                         symplectic_gram, transvection)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup", "BoundExceededError", "DiagonalPresentation",
    "HduVerdict", "HeegaardDiagramH1", "HyperbolicSplit", "IntMatrix",
    "Lagrangian", "LinkingForm", "NotTorsionError", "QSearchResult",
    "SmithDecomposition", "SymplecticMap", "TorsionClass", "Ub0Scan",
    "apply_map", "b_fixture", "bar_stabilize", "bar_stabilize_map",
    "connected_sum", "det", "diagonalize", "empty_diagram",
    "enumerate_lagrangians", "first_homology", "forms_isomorphic",
    "from_gluing", "genus1_torsion_form", "hantzsche_square_test",
    "hat_stabilize", "hat_stabilize_map", "hdu_verdict",
    "intersection_matrix", "invert_unimodular", "is_hyperbolic",
    "is_lagrangian", "is_nonsingular", "is_perfect_square",
    "is_symplectic_map", "lens", "linking_form", "linking_number",
    "mirror", "omega", "question_q_search", "random_symplectic_map",
    "relation_matrix", "snf", "solve_integer", "symplectic_gram",
    "torsion_generators", "torsion_order", "transvection", "ub0_scan",
]
