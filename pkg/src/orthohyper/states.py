"""Two-valued states, the Travis matrix and the partition logic built from it."""
from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .hypergraph import Context, Hypergraph, label_key

__all__ = [
    "TravisMatrix",
    "PartitionLogic",
    "PartitionError",
    "PseudocontextPair",
    "is_admissible",
    "enumerate_states",
    "is_separating",
    "partition_logic",
    "tifs_pairs",
    "pseudocontexts",
    "max_classical_sum",
]


def is_admissible(h: Hypergraph, assignment: Mapping[str, int]) -> bool:
    """Exactly one member of every context has value 1, all values in {0, 1}."""
    if any(assignment.get(v) not in (0, 1) for v in h.vertices):
        return False
    return all(sum(assignment[v] for v in ctx) == 1 for ctx in h.contexts)


@dataclass(frozen=True)
class TravisMatrix:
    """All two-valued states of a hypergraph, one row per state.

    Rows are kept in canonical order: lexicographically *descending* bit rows
    under ``vertex_order``, so that the state putting 1 on the earliest
    vertex comes first. State indices exposed elsewhere are 1-based positions
    in this order.
    """

    vertex_order: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]
    contexts: tuple[Context, ...] = ()
    _col: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.vertex_order)
        if len(set(self.vertex_order)) != n:
            raise ValueError("duplicate label in vertex_order")
        rows = tuple(tuple(int(b) for b in r) for r in self.rows)
        for r in rows:
            if len(r) != n or any(b not in (0, 1) for b in r):
                raise ValueError("rows must be 0/1 vectors matching vertex_order")
        if len(set(rows)) != len(rows):
            raise ValueError("duplicate state rows")
        object.__setattr__(self, "rows", tuple(sorted(rows, reverse=True)))
        object.__setattr__(self, "_col", {v: i for i, v in enumerate(self.vertex_order)})

    @property
    def n_states(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def index(self, v: str) -> int:
        try:
            return self._col[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def column(self, v: str) -> tuple[int, ...]:
        j = self.index(v)
        return tuple(r[j] for r in self.rows)

    def state(self, i: int) -> dict[str, int]:
        """State number ``i`` (1-based) as a label -> bit mapping."""
        return dict(zip(self.vertex_order, self.rows[i - 1]))

    def states(self) -> list[dict[str, int]]:
        return [dict(zip(self.vertex_order, r)) for r in self.rows]

    def adjacent(self, u: str, v: str) -> bool:
        return u != v and any(u in c and v in c for c in self.contexts)

    # serialization
    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.vertex_order)
        w.writerows(self.rows)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, contexts: Sequence[Context] = ()) -> "TravisMatrix":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        rows = [tuple(int(x) for x in r) for r in reader if r]
        return cls(tuple(header), tuple(rows), tuple(contexts))

    def as_dict(self) -> dict:
        return {
            "vertex_order": list(self.vertex_order),
            "rows": [list(r) for r in self.rows],
            "contexts": [list(c) for c in self.contexts],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    @classmethod
    def from_json(cls, text: str) -> "TravisMatrix":
        d = json.loads(text)
        return cls(
            tuple(d["vertex_order"]),
            tuple(tuple(r) for r in d["rows"]),
            tuple(tuple(c) for c in d.get("contexts", ())),
        )


def enumerate_states(h: Hypergraph) -> TravisMatrix:
    """All two-valued states of ``h`` by backtracking with unit propagation.

    Vertices are branched on in order of decreasing context degree. After
    each decision, a context holding a 1 forces its other members to 0 and a
    context with a single open member and no 1 forces that member to 1.
    """
    verts = list(h.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    ctxs = [tuple(idx[v] for v in c) for c in h.contexts]
    touching: list[list[int]] = [[] for _ in verts]
    for ci, c in enumerate(ctxs):
        for i in c:
            touching[i].append(ci)
    order = sorted(range(len(verts)), key=lambda i: (-len(touching[i]), label_key(verts[i])))

    def propagate(a: list[int], start: int) -> bool:
        queue = [start]
        while queue:
            i = queue.pop()
            for ci in touching[i]:
                c = ctxs[ci]
                ones = sum(1 for j in c if a[j] == 1)
                open_ = [j for j in c if a[j] < 0]
                if ones > 1:
                    return False
                if ones == 1:
                    for j in open_:
                        a[j] = 0
                        queue.append(j)
                elif not open_:
                    return False
                elif len(open_) == 1:
                    a[open_[0]] = 1
                    queue.append(open_[0])
        return True

    found: list[tuple[int, ...]] = []

    def search(a: list[int]) -> None:
        nxt = next((i for i in order if a[i] < 0), None)
        if nxt is None:
            found.append(tuple(a))
            return
        for bit in (1, 0):
            b = a.copy()
            b[nxt] = bit
            if propagate(b, nxt):
                search(b)

    search([-1] * len(verts))
    return TravisMatrix(tuple(verts), tuple(found), h.contexts)


def is_separating(t: TravisMatrix) -> tuple[bool, tuple[str, str] | None]:
    """Whether every pair of distinct vertices is told apart by some state.

    Returns ``(True, None)`` or ``(False, (u, v))`` for the first pair with
    identical columns.
    """
    seen: dict[tuple[int, ...], str] = {}
    for v in t.vertex_order:
        col = t.column(v)
        if col in seen:
            return False, (seen[col], v)
        seen[col] = v
    return True, None


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class PartitionLogic:
    """Vertex -> set of (1-based) indices of the states taking value 1 on it."""

    atoms: Mapping[str, frozenset[int]]
    n_states: int

    def __getitem__(self, v) -> frozenset[int]:
        return self.atoms[str(v)]

    def as_dict(self) -> dict[str, list[int]]:
        return {v: sorted(self.atoms[v]) for v in sorted(self.atoms, key=label_key)}


def partition_logic(t: TravisMatrix) -> PartitionLogic:
    if not t.rows:
        raise PartitionError("no two-valued states; partition logic is undefined")
    atoms = {
        v: frozenset(i + 1 for i, r in enumerate(t.rows) if r[j] == 1)
        for j, v in enumerate(t.vertex_order)
    }
    full = frozenset(range(1, t.n_states + 1))
    for ctx in t.contexts:
        union: set[int] = set()
        for v in ctx:
            if union & atoms[v]:
                raise PartitionError(f"atoms of context {ctx} overlap")
            union |= atoms[v]
        if union != full:
            raise PartitionError(f"atoms of context {ctx} do not cover all states")
    return PartitionLogic(atoms, t.n_states)


def _contexts_of(t: TravisMatrix, h: Hypergraph | None) -> tuple[Context, ...]:
    return h.contexts if h is not None else t.contexts


def tifs_pairs(t: TravisMatrix, h: Hypergraph | None = None) -> set[tuple[str, str]]:
    """Ordered non-adjacent pairs (u, v) such that m(u) = 1 forces m(v) = 0."""
    contexts = _contexts_of(t, h)
    adjacent = {frozenset(p) for c in contexts for p in itertools.combinations(c, 2)}
    cols = {v: t.column(v) for v in t.vertex_order}
    out = set()
    for u, v in itertools.permutations(t.vertex_order, 2):
        if frozenset((u, v)) in adjacent:
            continue
        if all(not (a and b) for a, b in zip(cols[u], cols[v])):
            out.add((u, v))
    return out


@dataclass(frozen=True)
class PseudocontextPair:
    left: tuple[str, ...]
    right: tuple[str, ...]
    max_classical_sum: int

    def as_dict(self) -> dict:
        return {
            "left": list(self.left),
            "right": list(self.right),
            "max_classical_sum": self.max_classical_sum,
        }


def _sorted_labels(s: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(s, key=label_key))


def _set_key(s: tuple[str, ...]) -> tuple:
    return (len(s), [label_key(v) for v in s])


def pseudocontexts(
    t: TravisMatrix, max_size: int = 3, h: Hypergraph | None = None
) -> list[PseudocontextPair]:
    """Disjoint vertex sets with identical state-by-state sums.

    Both sets have at most ``max_size`` members and neither is a context.
    Each unordered pair is reported once, smaller set (by size, then labels)
    on the left.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    contexts = {frozenset(c) for c in _contexts_of(t, h)}
    cols = {v: t.column(v) for v in t.vertex_order}
    groups: dict[tuple[int, ...], list[tuple[str, ...]]] = {}
    for k in range(1, max_size + 1):
        for combo in itertools.combinations(t.vertex_order, k):
            if frozenset(combo) in contexts:
                continue
            sums = tuple(map(sum, zip(*(cols[v] for v in combo))))
            groups.setdefault(sums, []).append(_sorted_labels(combo))
    out = []
    for sums, sets in groups.items():
        if len(sets) < 2:
            continue
        for a, b in itertools.combinations(sets, 2):
            if set(a) & set(b):
                continue
            left, right = sorted((a, b), key=_set_key)
            out.append(PseudocontextPair(left, right, max(sums, default=0)))
    out.sort(key=lambda p: (_set_key(p.left), _set_key(p.right)))
    return out


def max_classical_sum(t: TravisMatrix, s: Iterable[str]) -> int:
    """Largest value of sum_{v in s} m(v) over all two-valued states."""
    idx = [t.index(str(v)) for v in s]
    return max((sum(r[j] for j in idx) for r in t.rows), default=0)
