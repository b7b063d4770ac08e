"""Correlation polytopes of two-valued states and their facets.

Vertices are +/-1 product vectors ``(1 - 2 s_j)(1 - 2 s_k)`` over a list of
co-contextual vertex pairs. The hull is computed in exact integer/rational
arithmetic: first the affine hull, then the facets inside it by the double
description method. Floating point is used only when evaluating forms on
quantum operators.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .geometry import LabeledFOR, eigen_sym3, householder
from .hypergraph import Hypergraph
from .states import TravisMatrix

__all__ = [
    "LinearForm",
    "PairConfiguration",
    "CorrelationVertex",
    "Matching",
    "QuantumViolation",
    "MEP_PATH",
    "build_vertices",
    "affine_hull",
    "facet_enumeration",
    "facets_by_subsets",
    "slack_vector",
    "form_operator",
    "equivalent_modulo",
    "same_span",
    "match_forms",
    "quantum_violation",
    "pair_operator",
    "write_ine",
    "read_ine",
    "write_ext",
    "read_ext",
]

Number = int | Fraction


# -- exact linear algebra -----------------------------------------------------

def _rref(rows: Sequence[Sequence[Number]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _nullspace(rows: Sequence[Sequence[Number]], ncols: int) -> list[list[Fraction]]:
    """Basis of {y : row . y = 0 for every row}."""
    red, pivots = _rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        y = [Fraction(0)] * ncols
        y[fc] = Fraction(1)
        for r, pc in zip(red, pivots):
            y[pc] = -r[fc]
        basis.append(y)
    return basis


def _primitive(v: Sequence[Number]) -> tuple[int, ...]:
    """Scale a rational vector to the integer vector with gcd 1 (same direction)."""
    fr = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = math.gcd(*ints)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def _dot(a: Sequence[Number], b: Sequence[Number]) -> Number:
    return sum(x * y for x, y in zip(a, b))


# -- domain types ---------------------------------------------------------------

@dataclass(frozen=True)
class LinearForm:
    """``coefficients . w + constant`` compared with 0.

    ``kind`` is ``"equality"`` (``= 0``) or ``"inequality_ge"`` (``>= 0``).
    ``coordinates`` optionally names the coordinate each coefficient refers to.
    """

    coefficients: tuple[Fraction, ...]
    constant: Fraction
    kind: Literal["equality", "inequality_ge"] = "inequality_ge"
    coordinates: tuple[tuple[str, str], ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))
        object.__setattr__(self, "constant", Fraction(self.constant))
        if self.kind not in ("equality", "inequality_ge"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if not any(self.coefficients):
            raise ValueError("all coefficients are zero")
        if self.coordinates is not None:
            coords = tuple((str(a), str(b)) for a, b in self.coordinates)
            if len(coords) != len(self.coefficients):
                raise ValueError("coordinates and coefficients differ in length")
            object.__setattr__(self, "coordinates", coords)

    @classmethod
    def ge(cls, coefficients: Iterable[Number], constant: Number, coordinates=None) -> "LinearForm":
        return cls(tuple(coefficients), constant, "inequality_ge", coordinates).canonical()

    @classmethod
    def eq(cls, coefficients: Iterable[Number], constant: Number, coordinates=None) -> "LinearForm":
        return cls(tuple(coefficients), constant, "equality", coordinates).canonical()

    @property
    def is_equality(self) -> bool:
        return self.kind == "equality"

    def vector(self) -> tuple[Fraction, ...]:
        """Homogeneous vector ``(coefficients..., constant)``."""
        return self.coefficients + (self.constant,)

    def canonical(self) -> "LinearForm":
        """Integer coefficients with gcd 1; equalities get a positive leading coefficient."""
        v = _primitive(self.vector())
        if self.is_equality:
            lead = next(x for x in v if x != 0)
            if lead < 0:
                v = tuple(-x for x in v)
        return LinearForm(v[:-1], v[-1], self.kind, self.coordinates)

    def evaluate(self, w: Sequence[Number]) -> Fraction:
        return _dot(self.coefficients, w) + self.constant

    def holds(self, w: Sequence[Number]) -> bool:
        val = self.evaluate(w)
        return val == 0 if self.is_equality else val >= 0

    def sort_key(self) -> tuple:
        return (not self.is_equality, self.coefficients, self.constant)

    def integer_row(self) -> tuple[int, ...]:
        """``(constant, coefficients...)`` as integers (form must be canonical)."""
        c = self.canonical()
        return (int(c.constant),) + tuple(int(x) for x in c.coefficients)

    def with_coordinates(self, coordinates) -> "LinearForm":
        return LinearForm(self.coefficients, self.constant, self.kind, coordinates)

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None and self.coordinates is not None:
            names = [f"<A{a}A{b}>" for a, b in self.coordinates]
        if names is None:
            names = [f"w{i + 1}" for i in range(len(self.coefficients))]
        terms = []
        for c, name in zip(self.coefficients, names):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag} "
            terms.append(f"{sign} {coef}{name}")
        lhs = " ".join(terms)
        lhs = lhs[2:] if lhs.startswith("+ ") else "-" + lhs[2:]
        rel = "=" if self.is_equality else ">="
        return f"{lhs} {rel} {-self.constant}"

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "coefficients": [str(c) for c in self.coefficients],
            "constant": str(self.constant),
            "text": self.format(),
        }


@dataclass(frozen=True)
class PairConfiguration:
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple((str(a), str(b)) for a, b in self.pairs))
        if not self.pairs:
            raise ValueError("empty pair configuration")

    def validate(self, h: Hypergraph) -> None:
        for a, b in self.pairs:
            if not h.adjacent(a, b):
                raise ValueError(f"pair ({a}, {b}) is not co-contextual")

    def index(self, pair: tuple[str, str]) -> int:
        a, b = str(pair[0]), str(pair[1])
        for i, (x, y) in enumerate(self.pairs):
            if (x, y) == (a, b) or (x, y) == (b, a):
                return i
        raise KeyError(f"pair ({a}, {b}) not in configuration")

    def names(self) -> list[str]:
        return [f"A{a}A{b}" for a, b in self.pairs]

    def __len__(self) -> int:
        return len(self.pairs)


#: The nine intertwining pairs along the context path 1-3-5-...-17-1.
MEP_PATH = PairConfiguration(
    tuple((str(a), str(b)) for a, b in ((1, 3), (3, 5), (5, 7), (7, 9), (9, 11), (11, 13), (13, 15), (15, 17), (17, 1)))
)


@dataclass(frozen=True)
class CorrelationVertex:
    coords: tuple[int, ...]
    state_index: int


def build_vertices(t: TravisMatrix, cfg: PairConfiguration = MEP_PATH) -> list[CorrelationVertex]:
    """One +/-1 vertex per two-valued state, in the Travis-matrix row order."""
    cols = [(t.index(a), t.index(b)) for a, b in cfg.pairs]
    out = []
    for i, row in enumerate(t.rows, start=1):
        coords = tuple((1 - 2 * row[j]) * (1 - 2 * row[k]) for j, k in cols)
        out.append(CorrelationVertex(coords, i))
    return out


def _points(vertices) -> list[tuple[int, ...]]:
    pts = [tuple(v.coords) if isinstance(v, CorrelationVertex) else tuple(v) for v in vertices]
    if not pts:
        raise ValueError("need at least one vertex")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("vertices differ in dimension")
    return pts


# -- affine hull ------------------------------------------------------------------

@dataclass(frozen=True)
class _Frame:
    dim: int
    pivots: tuple[int, ...]
    equalities: tuple[LinearForm, ...]


def _affine_frame(pts: list[tuple[int, ...]]) -> _Frame:
    n = len(pts[0])
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    red, pivots = _rref(diffs) if diffs else ([], [])
    # (c, a) with c . p + a = 0 for every point
    null = _nullspace([list(p) + [1] for p in pts], n + 1)
    eqs: list[LinearForm] = []
    if null:
        basis, _ = _rref(null)
        eqs = [LinearForm(v[:-1], v[-1], "equality").canonical() for v in basis]
    return _Frame(len(pivots), tuple(pivots), tuple(eqs))


def affine_hull(vertices) -> tuple[int, list[LinearForm]]:
    """Affine dimension and a canonical (reduced row echelon) basis of the equalities."""
    fr = _affine_frame(_points(vertices))
    return fr.dim, list(fr.equalities)


# -- double description -------------------------------------------------------------

def _extreme_rays(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {y : row . y >= 0 for all rows}.

    ``rows`` must have full column rank. Incremental double description with
    the combinatorial adjacency test.
    """
    D = len(rows[0])
    # pick D independent rows to start
    chosen: list[int] = []
    for i in range(len(rows)):
        trial = chosen + [i]
        if len(_rref([rows[j] for j in trial])[1]) == len(trial):
            chosen = trial
            if len(chosen) == D:
                break
    if len(chosen) != D:
        raise ValueError("constraint rows do not have full column rank")
    # columns of the inverse of the chosen block are the initial rays
    block = [list(rows[j]) for j in chosen]
    rays: list[tuple[int, ...]] = []
    for k in range(D):
        aug = [block[i] + [1 if i == k else 0] for i in range(D)]
        # solve block . y = e_k
        red, piv = _rref(aug)
        y = [red[i][-1] for i in range(D)]
        rays.append(_primitive(y))
    processed = list(chosen)

    def zero_set(r: tuple[int, ...]) -> int:
        mask = 0
        for bit, j in enumerate(processed):
            if _dot(rows[j], r) == 0:
                mask |= 1 << bit
        return mask

    zsets = [zero_set(r) for r in rays]
    for i in range(len(rows)):
        if i in chosen:
            continue
        a = rows[i]
        vals = [_dot(a, r) for r in rays]
        pos = [k for k, s in enumerate(vals) if s > 0]
        neg = [k for k, s in enumerate(vals) if s < 0]
        zer = [k for k, s in enumerate(vals) if s == 0]
        new_bit = 1 << len(processed)
        new_rays = [rays[k] for k in pos + zer]
        new_z = [zsets[k] for k in pos] + [zsets[k] | new_bit for k in zer]
        for p in pos:
            for q in neg:
                common = zsets[p] & zsets[q]
                if bin(common).count("1") < D - 2:
                    continue
                if any(
                    (zsets[k] & common) == common for k in range(len(rays)) if k != p and k != q
                ):
                    continue
                sp, sq = vals[p], vals[q]
                r = _primitive([sp * yq - sq * yp for yp, yq in zip(rays[p], rays[q])])
                new_rays.append(r)
                new_z.append(common | new_bit)
        processed.append(i)
        rays, zsets = new_rays, new_z
    return rays


def facet_enumeration(vertices, coordinates=None) -> list[LinearForm]:
    """Complete irredundant H-representation of the convex hull of ``vertices``.

    Returns the affine-hull equalities followed by the facet inequalities,
    all canonical and sorted. Facets are computed inside the affine hull on
    the pivot coordinates of its direction space and lifted back with zero
    coefficients on the remaining coordinates.
    """
    pts = _points(vertices)
    fr = _affine_frame(pts)
    forms = list(fr.equalities)
    n = len(pts[0])
    if fr.dim > 0:
        proj = sorted({tuple(p[c] for c in fr.pivots) for p in pts})
        rows = [(1,) + p for p in proj]
        for ray in _extreme_rays(rows):
            const, coef = ray[0], ray[1:]
            full = [0] * n
            for c, x in zip(fr.pivots, coef):
                full[c] = x
            forms.append(LinearForm(tuple(full), const, "inequality_ge").canonical())
    forms.sort(key=LinearForm.sort_key)
    if coordinates is not None:
        forms = [f.with_coordinates(coordinates) for f in forms]
    return forms


def facets_by_subsets(vertices) -> list[tuple[int, ...]]:
    """Brute-force facet oracle working in the original coordinates.

    Every set of ``dim`` affinely independent vertices spans a hyperplane of
    the affine hull; it is a facet iff all vertices lie weakly on one side.
    Facets are returned as their primitive slack vectors over ``vertices``
    (value of the form at each vertex), which identifies a facet
    independently of the representative chosen modulo the equalities.
    """
    pts = _points(vertices)
    n = len(pts[0])
    hom = [list(p) + [1] for p in pts]
    dim = len(_rref(hom)[1]) - 1
    found: set[tuple[int, ...]] = set()
    if dim <= 0:
        return []
    for subset in itertools.combinations(range(len(pts)), dim):
        sub = [hom[i] for i in subset]
        if len(_rref(sub)[1]) != dim:
            continue
        for y in _nullspace(sub, n + 1):
            slack = [_dot(y, h) for h in hom]
            if any(slack):
                break
        else:
            continue
        if all(s >= 0 for s in slack):
            found.add(_primitive(slack))
        elif all(s <= 0 for s in slack):
            found.add(_primitive([-s for s in slack]))
    return sorted(found)


def slack_vector(form: LinearForm, vertices) -> tuple[int, ...]:
    return _primitive([form.evaluate(p) for p in _points(vertices)])


# -- matching modulo equalities ---------------------------------------------------------

def equivalent_modulo(f: LinearForm, g: LinearForm, equalities: Sequence[LinearForm]) -> bool:
    """True iff ``f = lam * g + (combination of equalities)`` for some ``lam > 0``."""
    if len(f.coefficients) != len(g.coefficients):
        return False
    cols = [g.vector()] + [e.vector() for e in equalities]
    target = f.vector()
    # solve sum_j x_j cols[j] = target
    aug = [[c[i] for c in cols] + [target[i]] for i in range(len(target))]
    red, piv = _rref(aug)
    if len(cols) in piv:  # inconsistent system
        return False
    if 0 not in piv:
        return False  # g is itself in the span of the equalities
    row = red[piv.index(0)]
    # free variables would make lam non-unique only if g depends on equalities
    lam = row[-1]
    return lam > 0


def same_span(a: Sequence[LinearForm], b: Sequence[LinearForm]) -> bool:
    """True iff the two lists of forms span the same space of (c, a) vectors."""
    def rank(forms):
        return len(_rref([f.vector() for f in forms])[1]) if forms else 0

    return rank(a) == rank(b) == rank(list(a) + list(b))


@dataclass
class Matching:
    pairs: dict[int, int] = field(default_factory=dict)
    unmatched_reference: list[int] = field(default_factory=list)
    unmatched_computed: list[int] = field(default_factory=list)

    @property
    def bijective(self) -> bool:
        return not self.unmatched_reference and not self.unmatched_computed

    def as_dict(self) -> dict:
        return {
            "bijective": self.bijective,
            "pairs": {str(k): v for k, v in sorted(self.pairs.items())},
            "unmatched_reference": self.unmatched_reference,
            "unmatched_computed": self.unmatched_computed,
        }


def match_forms(
    computed: Sequence[LinearForm],
    reference: Mapping[int, LinearForm],
    equalities: Sequence[LinearForm] | None = None,
) -> Matching:
    """Pair computed facet inequalities with numbered reference inequalities.

    Two forms match when they agree modulo the span of ``equalities``
    (defaults to the equalities found in ``computed``). Returned indices for
    computed forms are positions in ``computed``.
    """
    if equalities is None:
        equalities = [f for f in computed if f.is_equality]
    cand = [i for i, f in enumerate(computed) if not f.is_equality]
    m = Matching()
    used: set[int] = set()
    for num, ref in sorted(reference.items()):
        hit = next(
            (i for i in cand if i not in used and equivalent_modulo(computed[i], ref, equalities)),
            None,
        )
        if hit is None:
            m.unmatched_reference.append(num)
        else:
            m.pairs[num] = hit
            used.add(hit)
    m.unmatched_computed = [i for i in cand if i not in used]
    return m


# -- quantum evaluation ----------------------------------------------------------------------

def pair_operator(f: LabeledFOR, a: str, b: str) -> np.ndarray:
    """Operator counterpart A_a A_b of the product of two +/-1 observables."""
    return householder(f[a]) @ householder(f[b])


@dataclass(frozen=True)
class QuantumViolation:
    min_eigenvalue: float
    eigenvector: np.ndarray
    bound: float
    violated: bool
    eigenspace: np.ndarray
    eigenvalues: np.ndarray

    @property
    def amount(self) -> float:
        """How far the operator goes below the classical bound (positive if violated)."""
        return self.bound - self.min_eigenvalue

    def overlap(self, v) -> float:
        """Norm of the projection of unit(v) onto the extremal eigenspace."""
        u = np.asarray(v, dtype=float)
        u = u / np.linalg.norm(u)
        return float(np.linalg.norm(self.eigenspace @ u))

    def as_dict(self) -> dict:
        return {
            "min_eigenvalue": float(self.min_eigenvalue),
            "eigenvector": [float(x) for x in self.eigenvector],
            "bound": float(self.bound),
            "violated": bool(self.violated),
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "degeneracy": int(len(self.eigenspace)),
        }


def form_operator(form: LinearForm, f: LabeledFOR, cfg: PairConfiguration) -> np.ndarray:
    """sum_c coefficient_c * A_j A_k over the form's coordinates (constant excluded)."""
    if form.coordinates is not None:
        idx = [cfg.index(p) for p in form.coordinates]
        pairs = [cfg.pairs[i] for i in idx]
    else:
        if len(form.coefficients) != len(cfg):
            raise KeyError("form has more coordinates than the pair configuration")
        pairs = list(cfg.pairs)
    M = np.zeros((3, 3))
    for c, (a, b) in zip(form.coefficients, pairs):
        if c:
            M += float(c) * pair_operator(f, a, b)
    return M


def quantum_violation(
    form: LinearForm,
    f: LabeledFOR,
    cfg: PairConfiguration = MEP_PATH,
    tol: float = 1e-9,
) -> QuantumViolation:
    """Smallest eigenvalue of the operator version of ``coefficients . w``.

    For a form ``c . w + a >= 0`` the classical bound is ``-a``; a quantum
    violation exists iff the minimal eigenvalue lies below it (by more
    than ``tol``).
    """
    if form.is_equality:
        raise ValueError("quantum_violation needs an inequality")
    M = form_operator(form, f, cfg)
    vals, vecs = eigen_sym3((M + M.T) / 2.0)
    lo = vals[-1]
    space = np.array([v for v, x in zip(vecs, vals) if abs(x - lo) <= 1e-7])
    bound = float(-form.constant)
    return QuantumViolation(
        min_eigenvalue=float(lo),
        eigenvector=vecs[-1],
        bound=bound,
        violated=bool(lo < bound - tol),
        eigenspace=space,
        eigenvalues=vals,
    )


# -- cdd-style text formats --------------------------------------------------------------------

def write_ine(forms: Sequence[LinearForm], comment: str | None = None) -> str:
    """H-representation: each row ``b a_1 ... a_n`` means ``b + a.x >= 0``
    (or ``= 0`` for rows listed on the ``linearity`` line)."""
    forms = list(forms)
    n = len(forms[0].coefficients) if forms else 0
    lines = []
    if comment:
        lines += [f"* {ln}" for ln in comment.splitlines()]
    lines.append("H-representation")
    lin = [i + 1 for i, f in enumerate(forms) if f.is_equality]
    if lin:
        lines.append("linearity " + " ".join(str(x) for x in [len(lin)] + lin))
    lines.append("begin")
    lines.append(f" {len(forms)} {n + 1} integer")
    for f in forms:
        lines.append(" " + " ".join(str(x) for x in f.integer_row()))
    lines.append("end")
    return "\n".join(lines) + "\n"


def read_ine(text: str) -> list[LinearForm]:
    lines = [ln.strip() for ln in text.splitlines()]
    lin: set[int] = set()
    rows: list[list[Fraction]] = []
    it = iter(ln for ln in lines if ln and not ln.startswith("*"))
    for ln in it:
        if ln.startswith("linearity"):
            parts = ln.split()[1:]
            lin = {int(x) for x in parts[1:]}
        elif ln == "begin":
            header = next(it).split()
            m = int(header[0])
            rows = [[Fraction(x) for x in next(it).split()] for _ in range(m)]
    return [
        LinearForm(tuple(r[1:]), r[0], "equality" if i + 1 in lin else "inequality_ge")
        for i, r in enumerate(rows)
    ]


def write_ext(vertices, comment: str | None = None) -> str:
    pts = _points(vertices)
    lines = []
    if comment:
        lines += [f"* {ln}" for ln in comment.splitlines()]
    lines += ["V-representation", "begin", f" {len(pts)} {len(pts[0]) + 1} integer"]
    lines += [" 1 " + " ".join(str(x) for x in p) for p in pts]
    lines.append("end")
    return "\n".join(lines) + "\n"


def read_ext(text: str) -> list[tuple[int, ...]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("*")]
    start = lines.index("begin")
    m = int(lines[start + 1].split()[0])
    out = []
    for ln in lines[start + 2 : start + 2 + m]:
        vals = [Fraction(x) for x in ln.split()]
        if vals[0] != 1:
            raise ValueError("only vertices (leading 1) are supported, not rays")
        out.append(tuple(int(x) if x.denominator == 1 else x for x in vals[1:]))
    return out
