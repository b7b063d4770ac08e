"""Faithful orthogonal representations in R^3 and the operators built on them.

Vectors are ray representatives: they are not normalized on construction and
are compared only after unit normalization with the sign fixed so that the
first nonzero coordinate is positive.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .hypergraph import Hypergraph, label_key

TOL_ZERO = 1e-9
TOL_MARGIN = 1e-6
TOL_EIGEN = 1e-12

__all__ = [
    "LabeledFOR",
    "FaithfulnessReport",
    "unit",
    "ray",
    "rotation_z",
    "mep_alpha",
    "mep_alpha_radicand",
    "build_mep_for",
    "build_variant_a_for",
    "build_pruned_gadget_for",
    "verify_for",
    "projector",
    "householder",
    "eigen_sym3",
    "operator_sum",
]


def _vec(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


def unit(v) -> np.ndarray:
    a = _vec(v)
    n = np.linalg.norm(a)
    if n == 0.0 or not np.isfinite(n):
        raise ValueError("zero or non-finite vector")
    return a / n


def ray(v, eps: float = 1e-15) -> np.ndarray:
    """Unit representative of the ray through ``v``, first nonzero coordinate positive."""
    u = unit(v)
    for x in u:
        if abs(x) > eps:
            return u if x > 0 else -u
    return u


@dataclass(frozen=True)
class LabeledFOR:
    """Vertex label -> 3-vector (a candidate faithful orthogonal representation)."""

    vectors: Mapping[str, np.ndarray]
    labels: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        vecs = {}
        for k, v in self.vectors.items():
            a = _vec(v).copy()
            if not np.any(a):
                raise ValueError(f"zero vector for label {k!r}")
            a.setflags(write=False)
            vecs[str(k)] = a
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "labels", tuple(sorted(vecs, key=label_key)))

    def __getitem__(self, label) -> np.ndarray:
        return self.vectors[str(label)]

    def __contains__(self, label) -> bool:
        return str(label) in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def unit(self, label) -> np.ndarray:
        return unit(self[label])

    def to_json(self) -> str:
        payload = {k: [float(x) for x in self.vectors[k]] for k in self.labels}
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "LabeledFOR":
        return cls({k: np.array(v, dtype=float) for k, v in json.loads(text).items()})

    def to_table(self) -> str:
        lines = ["# label x y z"]
        for k in self.labels:
            x, y, z = self.vectors[k]
            lines.append(f"{k} {x:.17g} {y:.17g} {z:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_table(cls, text: str) -> "LabeledFOR":
        vecs = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"line {lineno}: expected 'label x y z'")
            vecs[parts[0]] = np.array([float(p) for p in parts[1:]])
        return cls(vecs)


# -- rotations and the closure angle ----------------------------------------

def rotation_z(angle: float) -> np.ndarray:
    """Right-handed rotation about (0, 0, 1)."""
    if not math.isfinite(angle):
        raise ValueError("angle must be finite")
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def mep_alpha_radicand() -> float:
    s69 = math.sqrt(69.0)
    return (
        11.0 / 9.0
        + np.cbrt(2262816.0 - 69984.0 * s69) / 81.0
        + 2.0 ** (5.0 / 3.0) / 9.0 * np.cbrt(97.0 + 3.0 * s69)
    )


def mep_alpha() -> float:
    """Rotation angle that closes the nine-context cycle (about 0.88626 rad)."""
    # arccot(x) = atan(1/x) for x > 0
    return 2.0 * math.atan(1.0 / math.sqrt(mep_alpha_radicand()))


def build_mep_for(alpha: float | None = None) -> LabeledFOR:
    """Vector labels for :func:`orthohyper.hypergraph.mep`.

    Starts from the tripod v4, v16, v10, rotates it about z by ``alpha`` to
    get v2, v14, v8, and fills in the rest by cross products.
    """
    if alpha is None:
        alpha = mep_alpha()
    r2, r3 = math.sqrt(2.0), math.sqrt(3.0)
    v: dict[int, np.ndarray] = {
        4: np.array([r2, 0.0, 1.0]),
        16: np.array([-1.0, r3, r2]),
        10: np.array([-1.0, -r3, r2]),
    }
    R = rotation_z(alpha)
    v[2], v[14], v[8] = R @ v[4], R @ v[16], R @ v[10]
    x = np.cross
    v[3] = x(v[4], v[2])
    v[15] = x(v[16], v[14])
    v[9] = x(v[10], v[8])
    v[5] = x(v[3], v[4])
    v[17] = x(v[15], v[16])
    v[11] = x(v[9], v[10])
    v[1] = x(v[3], v[2])
    v[13] = x(v[15], v[14])
    v[7] = x(v[9], v[8])
    v[6] = x(v[7], v[5])
    v[12] = x(v[13], v[11])
    v[18] = x(v[1], v[17])
    return LabeledFOR({str(k): a for k, a in v.items()})


def build_variant_a_for() -> LabeledFOR:
    """Vector labels for ``variant('a')`` (nine-cycle plus {6, 12, 18}).

    The context {1, 17, 18} is rotated about z by 2pi/3 and 4pi/3 to give
    {7, 5, 6} and {13, 11, 12}; the intermediate contexts follow from
    normalized cross products.
    """
    v: dict[int, np.ndarray] = {
        1: np.array([0.0, 1.0, 0.0]),
        17: np.array([1.0 / math.sqrt(3.0), 0.0, -math.sqrt(2.0 / 3.0)]),
        18: np.array([math.sqrt(2.0 / 3.0), 0.0, 1.0 / math.sqrt(3.0)]),
    }
    for (a, b, c), angle in (((7, 5, 6), 2 * math.pi / 3), ((13, 11, 12), 4 * math.pi / 3)):
        R = rotation_z(angle)
        v[a], v[b], v[c] = R @ v[1], R @ v[17], R @ v[18]
    # (start, end) of each two-context bridge -> (middle, first side, second side)
    for start, end, mid, left, right in ((1, 5, 3, 2, 4), (7, 11, 9, 8, 10), (13, 17, 15, 14, 16)):
        v[mid] = unit(np.cross(v[start], v[end]))
        v[left] = np.cross(v[start], v[mid])
        v[right] = np.cross(v[end], v[mid])
    return LabeledFOR({str(k): a for k, a in v.items()})


def build_pruned_gadget_for(
    angles: tuple[float, float, float] = (0.3, 0.7, 1.1),
    frame: np.ndarray | None = None,
) -> LabeledFOR:
    """A vector labelling of ``variant('pruned_gadget')``.

    ``frame`` is an orthogonal 3x3 matrix whose columns are v1, v2, v3; each
    of the three outer contexts is the pair of orthonormal vectors spanning
    the plane perpendicular to its hub, turned by the given angle.
    """
    F = np.eye(3) if frame is None else np.asarray(frame, dtype=float)
    e = [F[:, 0], F[:, 1], F[:, 2]]
    v = {1: e[0], 2: e[1], 3: e[2]}
    # hub -> (outer pair labels, the two basis vectors of its orthogonal plane)
    spokes = {1: ((4, 5), e[1], e[2]), 2: ((6, 7), e[2], e[0]), 3: ((8, 9), e[0], e[1])}
    for (hub, ((p, q), a, b)), t in zip(spokes.items(), angles):
        v[p] = math.cos(t) * a + math.sin(t) * b
        v[q] = -math.sin(t) * a + math.cos(t) * b
    return LabeledFOR({str(k): x for k, x in v.items()})


# -- faithfulness ------------------------------------------------------------

@dataclass(frozen=True)
class FaithfulnessReport:
    faithful: bool
    orthogonality_violations: list[tuple[str, str, float]]
    spurious_orthogonality: list[tuple[str, str, float]]
    parallel_pairs: list[tuple[str, str]]
    max_adjacent_overlap: float
    min_margin: float
    n_pairs: int

    def as_dict(self) -> dict:
        return {
            "faithful": self.faithful,
            "orthogonality_violations": [list(t) for t in self.orthogonality_violations],
            "spurious_orthogonality": [list(t) for t in self.spurious_orthogonality],
            "parallel_pairs": [list(t) for t in self.parallel_pairs],
            "max_adjacent_overlap": self.max_adjacent_overlap,
            "min_margin": self.min_margin,
            "n_pairs": self.n_pairs,
        }


def verify_for(
    h: Hypergraph,
    f: LabeledFOR,
    tol_zero: float = TOL_ZERO,
    tol_margin: float = TOL_MARGIN,
) -> FaithfulnessReport:
    """Check that orthogonality in ``f`` coincides exactly with adjacency in ``h``.

    Co-contextual pairs must satisfy ``|<u,v>| <= tol_zero`` for unit vectors;
    all other pairs need ``|<u,v>| >= tol_margin``. Distinct rays are also
    required (``1 - |<u,v>| >= tol_margin``).
    """
    if not tol_zero < tol_margin:
        raise ValueError("tol_zero must be smaller than tol_margin")
    missing = [v for v in h.vertices if v not in f]
    if missing:
        raise KeyError(f"no vector for vertices {missing}")
    units = {v: f.unit(v) for v in h.vertices}
    adj = h.adjacency()
    bad_orth, spurious, parallel = [], [], []
    max_adj, min_margin = 0.0, math.inf
    n = 0
    for a, b in itertools.combinations(h.vertices, 2):
        n += 1
        d = abs(float(units[a] @ units[b]))
        if b in adj[a]:
            max_adj = max(max_adj, d)
            if d > tol_zero:
                bad_orth.append((a, b, d))
        else:
            min_margin = min(min_margin, d)
            if d < tol_margin:
                spurious.append((a, b, d))
        if 1.0 - d < tol_margin:
            parallel.append((a, b))
    return FaithfulnessReport(
        faithful=not (bad_orth or spurious or parallel),
        orthogonality_violations=bad_orth,
        spurious_orthogonality=spurious,
        parallel_pairs=parallel,
        max_adjacent_overlap=max_adj,
        min_margin=min_margin,
        n_pairs=n,
    )


# -- operators ---------------------------------------------------------------

def projector(v) -> np.ndarray:
    """Orthogonal projector |v><v| / <v|v> onto the ray of ``v``."""
    u = unit(v)
    return np.outer(u, u)


def householder(x) -> np.ndarray:
    """Reflection 1 - 2|x><x| (``x`` normalized internally); eigenvalue -1 on x."""
    u = unit(x)
    return np.eye(3) - 2.0 * np.outer(u, u)


def eigen_sym3(m, tol: float = TOL_EIGEN, max_sweeps: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.

    Returns ``(values, vectors)`` with values in descending order and
    ``vectors[k]`` the unit eigenvector for ``values[k]``.

    Raises:
        ValueError: if ``m`` is not symmetric within ``tol`` (relative to its scale).
    """
    a = np.array(m, dtype=float)
    if a.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(a - a.T).max() > tol * scale:
        raise ValueError("matrix is not symmetric")
    a = (a + a.T) / 2.0
    V = np.eye(3)

    def off(x):
        # plain floats and hypot avoid underflow on subnormal entries
        return math.sqrt(2.0) * math.hypot(float(x[0, 1]), float(x[0, 2]), float(x[1, 2]))

    for _ in range(max_sweeps):
        if off(a) <= tol:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            apq = a[p, q]
            if apq == 0.0:
                continue
            diff = a[q, q] - a[p, p]
            if abs(apq) < 1e-150 * abs(diff):
                t = apq / diff  # tan of a tiny angle; avoids overflow in theta**2
            else:
                theta = diff / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            J = np.eye(3)
            J[p, p] = J[q, q] = c
            J[p, q] = s
            J[q, p] = -s
            a = J.T @ a @ J
            a[p, q] = a[q, p] = 0.0
            V = V @ J
    else:
        if off(a) > tol:
            raise ArithmeticError("Jacobi iteration did not converge")
    vals = np.diag(a).copy()
    order = np.argsort(-vals, kind="stable")
    vecs = V[:, order].T.copy()
    return vals[order], vecs


def operator_sum(f: LabeledFOR, labels: Iterable) -> np.ndarray:
    """Sum of projectors for the given vertex labels."""
    return sum((projector(f[v]) for v in labels), np.zeros((3, 3)))
