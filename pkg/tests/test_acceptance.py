"""End-to-end acceptance criteria, one test per criterion.

A summary line per criterion (PASS/FAIL) is printed at the end of the run by
the hook in ``conftest.py``.
"""
import time

import numpy as np
import pytest

from orthohyper.chromatic import (
    Coloring,
    canonical_coloring,
    color_classes,
    enumerate_colorings,
    extendable_states,
    reduced_state,
)
from orthohyper.geometry import (
    build_mep_for,
    build_pruned_gadget_for,
    build_variant_a_for,
    eigen_sym3,
    householder,
    operator_sum,
    projector,
    unit,
    verify_for,
)
from orthohyper.hypergraph import builtin, mep, variant
from orthohyper.polytope import (
    MEP_PATH,
    PairConfiguration,
    affine_hull,
    build_vertices,
    facet_enumeration,
    facets_by_subsets,
    quantum_violation,
    same_span,
    slack_vector,
)
from orthohyper.reference import (
    COLORING_ROWS,
    NON_EXTENDABLE_STATES,
    PARTITION_ATOMS,
    TRAVIS_ROWS,
    VIOLATION_ROWS,
    hull_equalities,
    hull_inequalities,
    match_reference_inequalities,
    pseudocontext_eigenvalue_closed_form,
)
from orthohyper.states import (
    enumerate_states,
    is_admissible,
    is_separating,
    max_classical_sum,
    partition_logic,
)

from .test_states import brute_force_states


@pytest.mark.criterion(1, "two-valued states: 12 states equal to the reference rows, < 1 s")
def test_criterion_1_states():
    t0 = time.perf_counter()
    t = enumerate_states(mep())
    elapsed = time.perf_counter() - t0
    rows = {"".join(map(str, r)) for r in t.rows}
    assert t.n_states == 12, f"{t.n_states} states"
    assert rows == set(TRAVIS_ROWS), "rows differ from the reference Travis matrix"
    assert elapsed < 1.0, f"took {elapsed:.3f} s"


@pytest.mark.criterion(2, "partition logic reproduces every reference atom")
def test_criterion_2_partition():
    p = partition_logic(enumerate_states(mep()))
    bad = [v for v, atom in PARTITION_ATOMS.items() if p[v] != atom]
    assert not bad, f"atoms differ for vertices {bad}"
    assert p["18"] == {4, 6, 7, 8, 10, 12}


@pytest.mark.criterion(3, "the 12 states are separating")
def test_criterion_3_separating():
    ok, pair = is_separating(enumerate_states(mep()))
    assert ok, f"not separated: {pair}"


@pytest.mark.criterion(4, "pseudocontext bound: max sum 1 with a witness of sum 0")
def test_criterion_4_pseudocontext_bound():
    t = enumerate_states(mep())
    for side in (("5", "11", "17"), ("1", "7", "13")):
        assert max_classical_sum(t, side) == 1, side
        sums = [sum(r[t.index(v)] for v in side) for r in t.rows]
        assert 0 in sums, f"no state with sum 0 on {side}"


@pytest.mark.criterion(5, "operator pseudocontext identity and degenerate eigenvalue 1.43016")
def test_criterion_5_quantum_pseudocontext():
    f = build_mep_for()
    lhs = operator_sum(f, ("5", "11", "17"))
    rhs = operator_sum(f, ("1", "7", "13"))
    diff = float(np.abs(lhs - rhs).max())
    assert diff <= 1e-9, f"max deviation {diff:.3g}"
    vals, _ = eigen_sym3(lhs)
    closed = pseudocontext_eigenvalue_closed_form()
    assert abs(vals[0] - 1.43016) <= 1e-4, f"eigenvalue {vals[0]}"
    assert abs(vals[1] - vals[0]) <= 1e-9, "eigenvalue is not degenerate"
    assert abs(vals[0] - closed) <= 1e-9, f"closed form {closed} vs {vals[0]}"


@pytest.mark.criterion(6, "faithfulness of the 18-vertex and variant-(a) labellings, cycle closure")
def test_criterion_6_faithfulness():
    f = build_mep_for()
    closure = abs(float(f["5"] @ unit(f["7"])))
    problems = []
    if closure > 1e-9:
        problems.append(f"v5 . v7 = {closure:.3g}")
    for name, h, vecs in (("mep", mep(), f), ("a", variant("a"), build_variant_a_for())):
        rep = verify_for(h, vecs, tol_zero=1e-9, tol_margin=1e-6)
        if not rep.faithful:
            extra = [f"{a}-{b}" for a, b, _ in rep.spurious_orthogonality]
            missing = [f"{a}-{b}" for a, b, _ in rep.orthogonality_violations]
            problems.append(
                f"{name}: unexpected orthogonal pairs {extra}, non-orthogonal context pairs "
                f"{missing}, parallel {rep.parallel_pairs}"
            )
    assert not problems, "; ".join(problems)


@pytest.mark.criterion(7, "hull: dimension 7, 2 equalities, 28 facets in bijection, oracle agrees, < 5 s")
def test_criterion_7_hull():
    t = enumerate_states(mep())
    verts = build_vertices(t, MEP_PATH)
    t0 = time.perf_counter()
    forms = facet_enumeration(verts, MEP_PATH.pairs)
    elapsed = time.perf_counter() - t0
    dim, _ = affine_hull(verts)
    eqs = [g for g in forms if g.is_equality]
    ineqs = [g for g in forms if not g.is_equality]
    assert dim == 7, f"dimension {dim}"
    assert len(eqs) == 2 and same_span(eqs, hull_equalities()), "equalities differ"
    m = match_reference_inequalities(forms)
    assert len(ineqs) == 28 and m.bijective, m.as_dict()
    assert elapsed < 5.0, f"took {elapsed:.3f} s"
    assert sorted(slack_vector(g, verts) for g in ineqs) == facets_by_subsets(verts)


@pytest.mark.criterion(8, "quantum violations: eigenvalues within 1e-4, eigenvector overlap >= 0.999")
def test_criterion_8_violations():
    f = build_mep_for()
    forms = hull_inequalities()
    bad = []
    for num, (value, vec) in sorted(VIOLATION_ROWS.items()):
        q = quantum_violation(forms[num], f, MEP_PATH)
        overlap = q.overlap(vec)
        if abs(q.min_eigenvalue - value) > 1e-4 or overlap < 0.999:
            bad.append(f"#{num}: {q.min_eigenvalue:.6g} vs {value:.6g} (overlap {overlap:.4f})")
    assert not bad, f"{len(bad)} of {len(VIOLATION_ROWS)} rows differ: " + ", ".join(bad)


@pytest.mark.criterion(9, "colorings: 18 in 3 classes, reference representatives, non-extendable {4,8,10}, < 1 s")
def test_criterion_9_colorings():
    h = mep()
    t = enumerate_states(h)
    t0 = time.perf_counter()
    cols = enumerate_colorings(h, 3)
    classes = color_classes(cols)
    _, non = extendable_states(t, cols)
    elapsed = time.perf_counter() - t0
    assert len(cols) == 18
    assert len(classes) == 3 and all(len(c) == 6 for c in classes)
    ref = {canonical_coloring(Coloring(r, h.vertices)).colors for r in COLORING_ROWS}
    assert {c.representative.colors for c in classes} == ref
    assert non == set(NON_EXTENDABLE_STATES), sorted(non)
    for c in cols:
        for k in (1, 2, 3):
            s = reduced_state(c, k)
            assert sum(s[v] for v in ("1", "7", "13")) == 1
            assert sum(s[v] for v in ("5", "11", "17")) == 1
    assert elapsed < 1.0, f"took {elapsed:.3f} s"


PAIRS = {
    "mep": MEP_PATH,
    "a": MEP_PATH,
    "b": MEP_PATH,
    "c": PairConfiguration(tuple((str(i), str(i + 2 if i < 11 else 1)) for i in range(1, 12, 2))),
    "pruned": PairConfiguration((("1", "2"), ("1", "3"), ("2", "3"), ("4", "5"), ("6", "7"), ("8", "9"))),
}


@pytest.mark.criterion(10, "property suites on all built-in hypergraphs")
def test_criterion_10_properties():
    for name, cfg in PAIRS.items():
        h = builtin(name)
        t = enumerate_states(h)
        assert all(is_admissible(h, s) for s in t.states()), name
        assert set(t.rows) == brute_force_states(h), name
        cfg.validate(h)
        pts = [v.coords for v in build_vertices(t, cfg)]
        for g in facet_enumeration(pts):
            vals = [g.evaluate(p) for p in pts]
            assert all(v == 0 for v in vals) if g.is_equality else all(v >= 0 for v in vals), name
    for vecs in (build_mep_for(), build_variant_a_for(), build_pruned_gadget_for()):
        for k in vecs.labels:
            A, E = householder(vecs[k]), projector(vecs[k])
            assert np.abs(A @ A - np.eye(3)).max() <= 1e-12
            assert np.abs(E @ E - E).max() <= 1e-12
    g = build_pruned_gadget_for()
    B = {k: householder(g[k]) for k in g.labels}
    total = B["4"] @ B["5"] + B["6"] @ B["7"] + B["8"] @ B["9"]
    assert np.abs(total + np.eye(3)).max() <= 1e-9
