"""Orthogonality hypergraphs: contexts, parsing, validation and built-in gadgets.

A hypergraph is a list of contexts (hyperedges), each a tuple of vertex labels.
Labels are strings; purely numeric labels sort numerically for display.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Literal

Context = tuple[str, ...]

__all__ = [
    "Context",
    "Hypergraph",
    "HypergraphError",
    "HypergraphParseError",
    "ValidationReport",
    "label_key",
    "parse_hypergraph",
    "serialize_hypergraph",
    "mep",
    "variant",
    "validate",
    "BUILTINS",
    "builtin",
]


class HypergraphError(ValueError):
    """Raised when a set of contexts violates the hypergraph invariants."""


class HypergraphParseError(HypergraphError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def label_key(label: str) -> tuple:
    """Sort key: numeric labels first, in numeric order, then the rest lexically."""
    if label.isdigit():
        return (0, int(label), label)
    return (1, 0, label)


@dataclass(frozen=True)
class Hypergraph:
    """Immutable collection of contexts over a derived vertex set.

    ``contexts`` keep their input order; ``vertices`` are sorted by
    :func:`label_key`. Use :meth:`from_contexts` to build one from raw data.
    """

    contexts: tuple[Context, ...]
    vertices: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        if not self.contexts:
            raise HypergraphError("hypergraph has no contexts")
        seen: dict[frozenset, int] = {}
        for i, ctx in enumerate(self.contexts):
            if len(ctx) < 2:
                raise HypergraphError(f"context {i + 1} has fewer than 2 members")
            if any(not isinstance(v, str) or not v for v in ctx):
                raise HypergraphError(f"context {i + 1} has an empty or non-string label")
            dup = [v for v, n in Counter(ctx).items() if n > 1]
            if dup:
                raise HypergraphError(f"duplicate vertex {dup[0]!r} in context {i + 1}")
            key = frozenset(ctx)
            if key in seen:
                raise HypergraphError(
                    f"duplicate context {i + 1} (same members as context {seen[key] + 1})"
                )
            seen[key] = i
        verts = sorted({v for ctx in self.contexts for v in ctx}, key=label_key)
        object.__setattr__(self, "vertices", tuple(verts))

    @classmethod
    def from_contexts(cls, contexts: Iterable[Iterable[object]]) -> "Hypergraph":
        return cls(tuple(tuple(str(v) for v in ctx) for ctx in contexts))

    def contexts_of(self, v: str) -> list[Context]:
        return [ctx for ctx in self.contexts if v in ctx]

    def degree(self, v: str) -> int:
        return sum(1 for ctx in self.contexts if v in ctx)

    def adjacent(self, u: str, v: str) -> bool:
        """True if ``u`` and ``v`` are distinct and share a context."""
        return u != v and any(u in ctx and v in ctx for ctx in self.contexts)

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for ctx in self.contexts:
            for v in ctx:
                adj[v].update(w for w in ctx if w != v)
        return adj

    def canonical(self) -> tuple[Context, ...]:
        """Contexts with members sorted, the list sorted; for order-free equality."""
        members = [tuple(sorted(ctx, key=label_key)) for ctx in self.contexts]
        return tuple(sorted(members, key=lambda c: [label_key(v) for v in c]))

    def same_as(self, other: "Hypergraph") -> bool:
        return self.canonical() == other.canonical()

    def is_context(self, members: Iterable[str]) -> bool:
        s = frozenset(members)
        return any(frozenset(ctx) == s for ctx in self.contexts)

    def __len__(self) -> int:
        return len(self.contexts)


# -- parsing -----------------------------------------------------------------

_SIMPLE_TOKEN = re.compile(r"[^\s,]+")
_LABEL = re.compile(r"^[A-Za-z0-9_.+\-]+$")


def _build(contexts: list[Context], positions: list[tuple[int, int]]) -> Hypergraph:
    # Re-run the invariant checks here so that errors carry source positions.
    seen: dict[frozenset, int] = {}
    for i, ctx in enumerate(contexts):
        line, col = positions[i]
        if len(ctx) < 2:
            raise HypergraphParseError("context needs at least 2 members", line, col)
        dup = [v for v, n in Counter(ctx).items() if n > 1]
        if dup:
            raise HypergraphParseError(f"duplicate vertex {dup[0]!r} in context", line, col)
        key = frozenset(ctx)
        if key in seen:
            raise HypergraphParseError(
                f"duplicate context (same members as context {seen[key] + 1})", line, col
            )
        seen[key] = i
    return Hypergraph(tuple(contexts))


def _parse_simple(text: str) -> Hypergraph:
    contexts: list[Context] = []
    positions: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        hash_at = line.find("#")
        if hash_at >= 0:
            line = line[:hash_at]
        if not line.strip():
            continue
        labels = []
        first_col = None
        for m in _SIMPLE_TOKEN.finditer(line):
            tok = m.group(0)
            if not _LABEL.match(tok):
                raise HypergraphParseError(f"unparsable token {tok!r}", lineno, m.start() + 1)
            if first_col is None:
                first_col = m.start() + 1
            labels.append(tok)
        contexts.append(tuple(labels))
        positions.append((lineno, first_col or 1))
    if not contexts:
        raise HypergraphParseError("no contexts found", 1, 1)
    return _build(contexts, positions)


def _parse_mmp(text: str) -> Hypergraph:
    contexts: list[Context] = []
    positions: list[tuple[int, int]] = []
    lines = [ln.rstrip("\r") for ln in text.splitlines()]
    body = [(i, ln) for i, ln in enumerate(lines, start=1) if ln.strip() and not ln.lstrip().startswith("#")]
    if not body:
        raise HypergraphParseError("no contexts found", 1, 1)
    for lineno, line in body:
        stripped = line.strip()
        offset = line.index(stripped[0])
        if not stripped.endswith("."):
            raise HypergraphParseError("MMP line must end with '.'", lineno, offset + len(stripped))
        col = offset + 1
        for chunk in stripped[:-1].split(","):
            if not chunk:
                raise HypergraphParseError("empty context", lineno, col)
            for j, ch in enumerate(chunk):
                if ch.isspace() or ch in ".#":
                    raise HypergraphParseError(f"unparsable token {ch!r}", lineno, col + j)
            contexts.append(tuple(chunk))
            positions.append((lineno, col))
            col += len(chunk) + 1
    return _build(contexts, positions)


def parse_hypergraph(text: str, format: Literal["simple", "mmp"] = "simple") -> Hypergraph:
    """Parse a hypergraph from text.

    ``simple``: one context per line, labels separated by commas and/or
    whitespace, ``#`` starts a comment. ``mmp``: single-character labels,
    contexts separated by commas, each line terminated by ``.``.

    Raises:
        HypergraphParseError: with 1-based ``line``/``column`` of the problem.
    """
    if not text or not text.strip():
        raise HypergraphParseError("empty input", 1, 1)
    if format == "simple":
        return _parse_simple(text)
    if format == "mmp":
        return _parse_mmp(text)
    raise ValueError(f"unknown format {format!r}")


def serialize_hypergraph(h: Hypergraph, format: Literal["simple", "mmp"] = "simple") -> str:
    if format == "simple":
        return "".join(" ".join(ctx) + "\n" for ctx in h.contexts)
    if format == "mmp":
        if any(len(v) != 1 for v in h.vertices):
            raise HypergraphError("MMP format needs single-character labels")
        return ",".join("".join(ctx) for ctx in h.contexts) + ".\n"
    raise ValueError(f"unknown format {format!r}")


# -- built-in hypergraphs ----------------------------------------------------

def _cycle(n_contexts: int) -> list[tuple[int, int, int]]:
    """Cycle of triangles {1,2,3},{3,4,5},... closing back on vertex 1."""
    n = 2 * n_contexts
    return [(2 * i + 1, 2 * i + 2, (2 * i + 2) % n + 1) for i in range(n_contexts)]


def mep() -> Hypergraph:
    """The 18-vertex, 11-context hypergraph: a nine-cycle of triangles
    tied together by the two extra contexts {2,8,14} and {4,10,16}."""
    return Hypergraph.from_contexts(_cycle(9) + [(2, 8, 14), (4, 10, 16)])


def variant(which: Literal["pruned_gadget", "a", "b", "c"]) -> Hypergraph:
    """Smaller relatives of :func:`mep`.

    * ``pruned_gadget``: four contexts {1,2,3},{1,4,5},{2,6,7},{3,8,9}
    * ``a``: nine-cycle plus {6,12,18}
    * ``b``: nine-cycle only
    * ``c``: six-cycle over 12 vertices
    """
    if which == "pruned_gadget":
        return Hypergraph.from_contexts([(1, 2, 3), (1, 4, 5), (2, 6, 7), (3, 8, 9)])
    if which == "a":
        return Hypergraph.from_contexts(_cycle(9) + [(6, 12, 18)])
    if which == "b":
        return Hypergraph.from_contexts(_cycle(9))
    if which == "c":
        return Hypergraph.from_contexts(_cycle(6))
    raise ValueError(f"unknown variant {which!r}")


BUILTINS = ("mep", "pruned", "a", "b", "c")


def builtin(name: str) -> Hypergraph:
    """Look up a built-in hypergraph by its CLI name."""
    if name == "mep":
        return mep()
    if name in ("pruned", "pruned_gadget"):
        return variant("pruned_gadget")
    if name in ("a", "b", "c"):
        return variant(name)
    raise KeyError(f"unknown builtin hypergraph {name!r}; choose from {', '.join(BUILTINS)}")


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    uniform: bool
    context_size: int | None
    n_vertices: int
    n_contexts: int
    degrees: dict[str, int]
    intertwining: int

    def as_dict(self) -> dict:
        return {
            "uniform": self.uniform,
            "context_size": self.context_size,
            "n_vertices": self.n_vertices,
            "n_contexts": self.n_contexts,
            "degrees": dict(self.degrees),
            "intertwining": self.intertwining,
        }


def validate(h: Hypergraph) -> ValidationReport:
    """Summarize uniformity, per-vertex degree and intertwining vertices."""
    sizes = {len(ctx) for ctx in h.contexts}
    degrees = {v: h.degree(v) for v in h.vertices}
    return ValidationReport(
        uniform=len(sizes) == 1,
        context_size=next(iter(sizes)) if len(sizes) == 1 else None,
        n_vertices=len(h.vertices),
        n_contexts=len(h.contexts),
        degrees=degrees,
        intertwining=sum(1 for d in degrees.values() if d >= 2),
    )

