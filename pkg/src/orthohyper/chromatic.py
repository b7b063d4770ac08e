"""Rainbow colorings of context hypergraphs and their relation to two-valued states."""
from __future__ import annotations

import csv
import io
import itertools
import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .hypergraph import Hypergraph
from .states import TravisMatrix

__all__ = [
    "Coloring",
    "ColoringClass",
    "enumerate_colorings",
    "color_classes",
    "canonical_coloring",
    "reduced_state",
    "extendable_states",
    "colorings_to_csv",
    "colorings_from_csv",
    "colorings_to_json",
]


@dataclass(frozen=True, order=True)
class Coloring:
    """Colors ``1..k`` listed in ``vertex_order`` (sorted hypergraph vertices)."""

    colors: tuple[int, ...]
    vertex_order: tuple[str, ...]

    def __getitem__(self, v) -> int:
        return self.colors[self.vertex_order.index(str(v))]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.vertex_order, self.colors))

    def permuted(self, perm: Sequence[int]) -> "Coloring":
        """Apply ``color c -> perm[c - 1]``."""
        return Coloring(tuple(perm[c - 1] for c in self.colors), self.vertex_order)

    def is_rainbow(self, h: Hypergraph) -> bool:
        col = self.as_dict()
        return all(len({col[v] for v in ctx}) == len(ctx) for ctx in h.contexts)


@dataclass(frozen=True)
class ColoringClass:
    representative: Coloring
    members: frozenset[Coloring]

    def __len__(self) -> int:
        return len(self.members)


def _search_order(h: Hypergraph) -> list[int]:
    """Breadth-first over shared contexts, so each new vertex touches colored ones."""
    verts = list(h.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    adj = h.adjacency()
    seen: set[int] = set()
    order: list[int] = []
    for start in range(len(verts)):
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            order.append(i)
            for w in sorted((idx[u] for u in adj[verts[i]])):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def enumerate_colorings(h: Hypergraph, k: int = 3) -> list[Coloring]:
    """All colorings with colors ``1..k`` that are rainbow on every context.

    Backtracking with forward checking on the domains of neighbours. No
    color symmetry is broken, so the count includes all permuted copies.
    An empty list means no such coloring exists.
    """
    verts = list(h.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    adj = h.adjacency()
    nbrs = [[idx[u] for u in adj[v]] for v in verts]
    order = _search_order(h)
    out: list[tuple[int, ...]] = []
    colors = [0] * len(verts)
    domains = [set(range(1, k + 1)) for _ in verts]

    def search(pos: int) -> None:
        if pos == len(order):
            out.append(tuple(colors))
            return
        i = order[pos]
        for c in sorted(domains[i]):
            pruned = [j for j in nbrs[i] if colors[j] == 0 and c in domains[j]]
            if any(len(domains[j]) == 1 for j in pruned):
                continue
            colors[i] = c
            for j in pruned:
                domains[j].discard(c)
            search(pos + 1)
            for j in pruned:
                domains[j].add(c)
            colors[i] = 0

    search(0)
    out.sort()
    order_labels = tuple(verts)
    return [Coloring(c, order_labels) for c in out]


def canonical_coloring(c: Coloring, k: int = 3) -> Coloring:
    """Lexicographically least coloring among all color permutations of ``c``."""
    return min(c.permuted(p) for p in itertools.permutations(range(1, k + 1)))


def color_classes(colorings: Iterable[Coloring], k: int = 3) -> list[ColoringClass]:
    """Group colorings into orbits under permutations of the ``k`` colors."""
    groups: dict[Coloring, set[Coloring]] = {}
    for c in colorings:
        groups.setdefault(canonical_coloring(c, k), set()).add(c)
    return [ColoringClass(rep, frozenset(groups[rep])) for rep in sorted(groups)]


def reduced_state(c: Coloring, color: int) -> dict[str, int]:
    """Two-valued state sending ``color`` to 1 and every other color to 0."""
    return {v: int(x == color) for v, x in zip(c.vertex_order, c.colors)}


def extendable_states(
    t: TravisMatrix, colorings: Iterable[Coloring]
) -> tuple[set[int], set[int]]:
    """Split state indices (1-based) by whether some coloring reduces to them."""
    reachable = set()
    for c in colorings:
        for color in set(c.colors):
            st = reduced_state(c, color)
            reachable.add(tuple(st[v] for v in t.vertex_order))
    ext = {i + 1 for i, r in enumerate(t.rows) if r in reachable}
    return ext, set(range(1, t.n_states + 1)) - ext


def colorings_to_csv(colorings: Sequence[Coloring]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if colorings:
        w.writerow(colorings[0].vertex_order)
    w.writerows(c.colors for c in colorings)
    return buf.getvalue()


def colorings_from_csv(text: str) -> list[Coloring]:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        return []
    header = tuple(rows[0])
    return [Coloring(tuple(int(x) for x in r), header) for r in rows[1:]]


def colorings_to_json(colorings: Sequence[Coloring]) -> str:
    return json.dumps(
        {
            "vertex_order": list(colorings[0].vertex_order) if colorings else [],
            "colorings": [list(c.colors) for c in colorings],
        }
    )
