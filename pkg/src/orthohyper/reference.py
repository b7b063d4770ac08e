"""Published reference values for the 18-vertex hypergraph, used as golden fixtures.

State numbers are 1-based and follow the canonical Travis-matrix order, which
coincides with the published listing (``REFERENCE_STATE_ORDER`` is the
identity). Inequalities are stored oriented as ``c . w + a >= 0`` over the
nine pair coordinates of :data:`orthohyper.polytope.MEP_PATH`.
"""
from __future__ import annotations

import math

from .polytope import MEP_PATH, LinearForm, Matching, match_forms

__all__ = [
    "TRAVIS_ROWS",
    "REFERENCE_STATE_ORDER",
    "PARTITION_ATOMS",
    "HULL_EQUALITIES",
    "HULL_INEQUALITIES",
    "VIOLATION_ROWS",
    "COLORING_ROWS",
    "NON_EXTENDABLE_STATES",
    "PSEUDOCONTEXT_LEFT",
    "PSEUDOCONTEXT_RIGHT",
    "PSEUDOCONTEXT_EIGENVALUE",
    "pseudocontext_eigenvalue_closed_form",
    "hull_equalities",
    "hull_inequalities",
    "match_reference_inequalities",
]

# one string per state, vertices a1..a18
TRAVIS_ROWS: tuple[str, ...] = (
    "100101010010001000",
    "100010010101001000",
    "100010001001010100",
    "010101001001001001",
    "010101001000100010",
    "010100100010001001",
    "010010001000100101",
    "001001010101001001",
    "001001010100100010",
    "001001001001010101",
    "001000100101010010",
    "001000100010010101",
)

#: canonical row i+1 is published state REFERENCE_STATE_ORDER[i]
REFERENCE_STATE_ORDER: tuple[int, ...] = tuple(range(1, 13))

PARTITION_ATOMS: dict[str, frozenset[int]] = {
    str(k): frozenset(v)
    for k, v in {
        1: {1, 2, 3},
        2: {4, 5, 6, 7},
        3: {8, 9, 10, 11, 12},
        4: {1, 4, 5, 6},
        5: {2, 3, 7},
        6: {1, 4, 5, 8, 9, 10},
        7: {6, 11, 12},
        8: {1, 2, 8, 9},
        9: {3, 4, 5, 7, 10},
        10: {2, 8, 9, 11},
        11: {1, 6, 12},
        12: {2, 3, 4, 8, 10, 11},
        13: {5, 7, 9},
        14: {3, 10, 11, 12},
        15: {1, 2, 4, 6, 8},
        16: {3, 7, 10, 12},
        17: {5, 9, 11},
        18: {4, 6, 7, 8, 10, 12},
    }.items()
}

# (coefficients over A1A3, A3A5, ..., A17A1; constant) with c . w + a = 0
HULL_EQUALITIES: tuple[tuple[tuple[int, ...], int], ...] = (
    ((0, 1, 0, 0, 1, 0, 0, 1, 0), 1),
    ((1, 0, 0, 1, 0, 0, 1, 0, 0), 1),
)

# number -> (coefficients, constant) with c . w + a >= 0
HULL_INEQUALITIES: dict[int, tuple[tuple[int, ...], int]] = {
    1: ((2, -2, -1, 2, -2, 1, 0, 0, -1), 1),
    2: ((-2, 2, -1, -2, 2, -1, 0, 0, 1), 1),
    3: ((2, -2, 1, 0, -2, 1, 0, 0, -1), 1),
    4: ((-2, 0, 1, -2, 2, -1, 0, 0, 1), 1),
    5: ((0, 2, -1, 0, 2, 1, 0, 0, 1), 3),
    6: ((0, 2, -1, 2, 0, 1, 0, 0, 1), 3),
    7: ((2, 0, -1, 2, 0, 1, 0, 0, 1), 3),
    8: ((2, -2, 1, 0, 0, -1, 0, 0, -1), 1),
    9: ((-2, 2, -1, 0, 0, -1, 0, 0, 1), 1),
    10: ((0, 0, 1, -2, 2, -1, 0, 0, -1), 1),
    11: ((0, 0, -1, 2, -2, 1, 0, 0, -1), 1),
    12: ((0, -2, 1, 0, 0, -1, 0, 0, 1), 1),
    13: ((-2, 0, 1, 0, 0, -1, 0, 0, 1), 1),
    14: ((0, 0, 1, 0, -2, 1, 0, 0, -1), 1),
    15: ((0, 0, 1, -2, 0, 1, 0, 0, -1), 1),
    16: ((0, 0, 1, 0, 0, 1, 0, 0, 1), 1),
    17: ((0, 0, 1, 0, 0, -1, 0, 0, -1), 1),
    18: ((0, 0, -1, 0, 0, -1, 0, 0, 1), 1),
    19: ((0, 0, -1, 0, 0, 1, 0, 0, -1), 1),
    20: ((0, 1, 0, -1, 1, 0, 0, 0, 0), 1),
    21: ((1, -1, 0, 1, 0, 0, 0, 0, 0), 1),
    22: ((0, -1, 0, 0, -1, 0, 0, 0, 0), 0),
    23: ((-1, 0, 0, 0, -1, 0, 0, 0, 0), 0),
    24: ((-1, 0, 0, -1, 0, 0, 0, 0, 0), 0),
    25: ((0, 1, 0, 0, 0, 0, 0, 0, 0), 1),
    26: ((1, 0, 0, 0, 0, 0, 0, 0, 0), 1),
    27: ((0, 0, 0, 1, 0, 0, 0, 0, 0), 1),
    28: ((0, 0, 0, 0, 1, 0, 0, 0, 0), 1),
}

# inequality number -> (eigenvalue, eigenvector) of maximal violation
VIOLATION_ROWS: dict[int, tuple[float, tuple[float, float, float]]] = {
    1: (-3.0, (0.981557, 0.173328, -0.0806446)),
    5: (-3.89807, (0.491309, -0.837518, -0.239123)),
    6: (-3.89807, (0.95734, -0.162235, -0.239123)),
    7: (-2.26894, (0.195441, -0.683898, -0.702913)),
    12: (-1.89807, (0.970966, 0.00672715, 0.239123)),
    13: (-1.89807, (0.619169, 0.747964, 0.239123)),
    14: (-1.89807, (0.479657, 0.844245, -0.239123)),
    15: (-2.12744, (0.553247, -0.811751, 0.187022)),
    16: (-1.36373, (0.0343782, 0.426292, -0.903932)),
    17: (-1.36373, (0.351991, -0.242918, -0.903932)),
    18: (-1.36373, (0.0343782, 0.426292, -0.903932)),
    19: (-1.36373, (0.386369, 0.183374, 0.903932)),
    20: (-1.64944, (0.428768, -0.903415, 0.0)),
    21: (-1.64944, (0.996764, -0.0803837, 0.0)),
    23: (-0.64944, (0.567996, 0.823031, 0.0)),
}

# colorings of a1..a18, one per class
COLORING_ROWS: tuple[tuple[int, ...], ...] = (
    (1, 2, 3, 1, 2, 1, 3, 1, 2, 3, 1, 3, 2, 3, 1, 2, 3, 2),
    (1, 2, 3, 2, 1, 2, 3, 1, 2, 1, 3, 1, 2, 3, 1, 3, 2, 3),
    (1, 2, 3, 2, 1, 3, 2, 3, 1, 3, 2, 1, 3, 1, 2, 1, 3, 2),
)

NON_EXTENDABLE_STATES: frozenset[int] = frozenset({4, 8, 10})

PSEUDOCONTEXT_LEFT: tuple[str, ...] = ("1", "7", "13")
PSEUDOCONTEXT_RIGHT: tuple[str, ...] = ("5", "11", "17")
PSEUDOCONTEXT_EIGENVALUE = 1.43016


def pseudocontext_eigenvalue_closed_form() -> float:
    """Closed form of the doubly degenerate eigenvalue of E5 + E11 + E17."""
    s = 3 * math.sqrt(69) - 11
    return (10 - 10 * (2 / s) ** (1 / 3) + 2 ** (2 / 3) * s ** (1 / 3)) / 6


def hull_equalities() -> list[LinearForm]:
    return [LinearForm.eq(c, a, MEP_PATH.pairs) for c, a in HULL_EQUALITIES]


def hull_inequalities() -> dict[int, LinearForm]:
    return {n: LinearForm.ge(c, a, MEP_PATH.pairs) for n, (c, a) in HULL_INEQUALITIES.items()}


def match_reference_inequalities(facets: list[LinearForm]) -> Matching:
    """Match computed MEP facets against the 28 numbered reference inequalities."""
    return match_forms(facets, hull_inequalities())
