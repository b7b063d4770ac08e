import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orthohyper.chromatic import (
    Coloring,
    canonical_coloring,
    color_classes,
    colorings_from_csv,
    colorings_to_csv,
    colorings_to_json,
    enumerate_colorings,
    extendable_states,
    reduced_state,
)
from orthohyper.hypergraph import Hypergraph, builtin, mep
from orthohyper.reference import COLORING_ROWS, NON_EXTENDABLE_STATES
from orthohyper.states import enumerate_states, is_admissible


def brute_force_colorings(h: Hypergraph, k: int = 3) -> set[tuple[int, ...]]:
    """Filter all k^n assignments for rainbow contexts."""
    n = len(h.vertices)
    idx = {v: i for i, v in enumerate(h.vertices)}
    grid = np.indices((k,) * n).reshape(n, -1).T + 1
    ok = np.ones(len(grid), dtype=bool)
    for ctx in h.contexts:
        for a, b in itertools.combinations(ctx, 2):
            ok &= grid[:, idx[a]] != grid[:, idx[b]]
    return {tuple(int(x) for x in r) for r in grid[ok]}


def mep_colorings_from_cycle() -> set[tuple[int, ...]]:
    """Independent count for the 18-vertex case.

    Odd vertices 1, 3, ..., 17 each join two cycle contexts; once they are
    colored, each even vertex must take the remaining color of its context.
    """
    h = mep()
    out = set()
    for odd in itertools.product((1, 2, 3), repeat=9):
        col = {}
        good = True
        for i in range(9):
            a, b = odd[i], odd[(i + 1) % 9]
            if a == b:
                good = False
                break
            col[str(2 * i + 1)] = a
            col[str(2 * i + 2)] = 6 - a - b
        if not good:
            continue
        if all(len({col[v] for v in ctx}) == 3 for ctx in h.contexts):
            out.add(tuple(col[v] for v in h.vertices))
    return out


@pytest.fixture(scope="module")
def mep_cols():
    return enumerate_colorings(mep(), 3)


def test_mep_count_and_oracle(mep_cols):
    assert len(mep_cols) == 18
    assert {c.colors for c in mep_cols} == mep_colorings_from_cycle()


def test_all_rainbow(mep_cols):
    h = mep()
    assert all(c.is_rainbow(h) for c in mep_cols)


def test_canonical_order(mep_cols):
    assert [c.colors for c in mep_cols] == sorted(c.colors for c in mep_cols)


def test_single_context():
    h = Hypergraph.from_contexts([(1, 2, 3)])
    cols = enumerate_colorings(h, 3)
    assert len(cols) == 6
    assert len(color_classes(cols)) == 1
    ext, non = extendable_states(enumerate_states(h), cols)
    assert ext == {1, 2, 3} and not non


@pytest.mark.parametrize("name", ["pruned", "c"])
def test_variants_match_brute_force(name):
    h = builtin(name)
    assert {c.colors for c in enumerate_colorings(h)} == brute_force_colorings(h)


@pytest.mark.parametrize("name", ["a", "b"])
def test_nine_cycle_variants_by_cycle_rule(name):
    h = builtin(name)
    got = {c.colors for c in enumerate_colorings(h)}
    # same odd-vertex construction as for the full hypergraph, with h's contexts
    want = set()
    for odd in itertools.product((1, 2, 3), repeat=9):
        if any(odd[i] == odd[(i + 1) % 9] for i in range(9)):
            continue
        col = {}
        for i in range(9):
            col[str(2 * i + 1)] = odd[i]
            col[str(2 * i + 2)] = 6 - odd[i] - odd[(i + 1) % 9]
        if all(len({col[v] for v in ctx}) == len(ctx) for ctx in h.contexts):
            want.add(tuple(col[v] for v in h.vertices))
    assert got == want


def test_too_few_colors_gives_nothing():
    assert enumerate_colorings(mep(), 2) == []


def test_classes(mep_cols):
    classes = color_classes(mep_cols)
    assert len(classes) == 3 and all(len(c) == 6 for c in classes)
    for c in classes:
        assert c.representative == min(c.members)
        assert {m.permuted(p) for m in [c.representative]
                for p in itertools.permutations((1, 2, 3))} == set(c.members)


def test_class_representatives_match_reference(mep_cols):
    order = mep().vertices
    reps = {c.representative.colors for c in color_classes(mep_cols)}
    ref = {canonical_coloring(Coloring(r, order)).colors for r in COLORING_ROWS}
    assert reps == ref
    assert COLORING_ROWS[0] == (1, 2, 3, 1, 2, 1, 3, 1, 2, 3, 1, 3, 2, 3, 1, 2, 3, 2)


def test_reduced_states_admissible(mep_cols):
    h = mep()
    for c in mep_cols:
        states = [reduced_state(c, k) for k in (1, 2, 3)]
        for s in states:
            assert is_admissible(h, s)
        for v in h.vertices:
            assert sum(s[v] for s in states) == 1


def test_reduced_state_pseudocontext_sums(mep_cols):
    for c in mep_cols:
        for k in (1, 2, 3):
            s = reduced_state(c, k)
            assert sum(s[v] for v in ("1", "7", "13")) == 1
            assert sum(s[v] for v in ("5", "11", "17")) == 1
        assert {c[v] for v in ("1", "7", "13")} == {1, 2, 3}
        assert {c[v] for v in ("5", "11", "17")} == {1, 2, 3}


def test_non_extendable(mep_cols, mep_t):
    ext, non = extendable_states(mep_t, mep_cols)
    assert non == set(NON_EXTENDABLE_STATES)
    assert len(ext) == 9
    for i in non:
        s = mep_t.state(i)
        assert all(s[v] == 0 for v in ("1", "7", "13", "5", "11", "17"))


def test_serialization(mep_cols):
    assert colorings_from_csv(colorings_to_csv(mep_cols)) == mep_cols
    assert colorings_from_csv("") == []
    assert '"colorings"' in colorings_to_json(mep_cols)


@st.composite
def small_hypergraphs(draw):
    n = draw(st.integers(3, 9))
    ctxs = draw(
        st.lists(
            st.lists(st.integers(0, n - 1), min_size=2, max_size=3, unique=True),
            min_size=1,
            max_size=6,
            unique_by=frozenset,
        )
    )
    return Hypergraph.from_contexts(ctxs)


@settings(max_examples=80, deadline=None)
@given(small_hypergraphs())
def test_random_against_brute_force(h):
    cols = enumerate_colorings(h, 3)
    assert {c.colors for c in cols} == brute_force_colorings(h)
    if cols:
        assert len(cols) % 6 == 0
        assert sum(len(c) for c in color_classes(cols)) == len(cols)
