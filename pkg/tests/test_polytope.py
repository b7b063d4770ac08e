import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, settings, strategies as st
from scipy.spatial import ConvexHull

from orthohyper.hypergraph import builtin
from orthohyper.polytope import (
    MEP_PATH,
    LinearForm,
    PairConfiguration,
    affine_hull,
    build_vertices,
    equivalent_modulo,
    facet_enumeration,
    facets_by_subsets,
    form_operator,
    match_forms,
    quantum_violation,
    read_ext,
    read_ine,
    same_span,
    slack_vector,
    write_ext,
    write_ine,
)
from orthohyper.reference import (
    HULL_INEQUALITIES,
    VIOLATION_ROWS,
    hull_equalities,
    hull_inequalities,
    match_reference_inequalities,
)
from orthohyper.states import TravisMatrix, enumerate_states


@pytest.fixture(scope="module")
def verts(mep_t):
    return build_vertices(mep_t, MEP_PATH)


@pytest.fixture(scope="module")
def forms(verts):
    return facet_enumeration(verts, MEP_PATH.pairs)


def check_vh(points, forms):
    """Every point satisfies every form; every facet is tight on dim independent points."""
    dim, _ = affine_hull(points)
    for f in forms:
        vals = [f.evaluate(p) for p in points]
        if f.is_equality:
            assert all(v == 0 for v in vals)
        else:
            assert all(v >= 0 for v in vals)
            tight = [list(p) + [1] for p, v in zip(points, vals) if v == 0]
            assert sp.Matrix(tight).rank() >= dim


def test_vertex_of_first_state(verts):
    assert len(verts) == 12
    assert verts[0].coords == (-1, 1, 1, 1, -1, -1, -1, -1, -1)
    assert verts[0].state_index == 1


def test_vertex_coordinates_are_products(mep_t, verts):
    for v, row in zip(verts, mep_t.rows):
        for (a, b), w in zip(MEP_PATH.pairs, v.coords):
            assert w == (1 - 2 * row[mep_t.index(a)]) * (1 - 2 * row[mep_t.index(b)])


def test_all_zero_pairs_give_all_ones():
    t = TravisMatrix(("1", "2", "3"), ((0, 0, 1),))
    cfg = PairConfiguration((("1", "2"),))
    assert build_vertices(t, cfg)[0].coords == (1,)


def test_unknown_vertex_in_configuration(mep_t):
    with pytest.raises(KeyError):
        build_vertices(mep_t, PairConfiguration((("1", "99"),)))


def test_configuration_validation(mep_h):
    MEP_PATH.validate(mep_h)
    with pytest.raises(ValueError):
        PairConfiguration((("1", "5"),)).validate(mep_h)
    with pytest.raises(KeyError):
        MEP_PATH.index(("1", "5"))
    assert MEP_PATH.index(("3", "1")) == 0


def test_affine_hull_mep(verts):
    dim, eqs = affine_hull(verts)
    assert dim == 7
    assert same_span(eqs, hull_equalities())
    # exact oracle: sympy rank and nullspace of the homogenised vertex matrix
    M = sp.Matrix([list(v.coords) + [1] for v in verts])
    assert M.rank() - 1 == 7
    null = M.nullspace()
    assert len(null) == len(eqs)
    as_forms = [LinearForm.eq([Fraction(int(x.p), int(x.q)) for x in n[:-1]],
                              Fraction(int(n[-1].p), int(n[-1].q))) for n in null]
    assert same_span(as_forms, eqs)


def test_affine_hull_small():
    assert affine_hull([(1, -1, 1)])[0] == 0
    assert len(affine_hull([(1, -1, 1)])[1]) == 3
    assert affine_hull([(1, 1), (-1, -1)])[0] == 1
    with pytest.raises(ValueError):
        affine_hull([])


def test_hull_counts(forms):
    assert sum(f.is_equality for f in forms) == 2
    assert sum(not f.is_equality for f in forms) == 28
    assert LinearForm.ge([0, 1, 0, 0, 0, 0, 0, 0, 0], 1) in [
        LinearForm(f.coefficients, f.constant, f.kind) for f in forms
    ]


def test_hull_is_deterministic_and_sorted(verts, forms):
    assert facet_enumeration(list(reversed(verts)), MEP_PATH.pairs) == forms
    keys = [f.sort_key() for f in forms]
    assert keys == sorted(keys)


def test_segment():
    forms = facet_enumeration([(-1,), (1,)])
    assert [(f.coefficients, f.constant) for f in forms] == [((-1,), 1), ((1,), 1)]


def test_single_point_has_only_equalities():
    forms = facet_enumeration([(1, -1)])
    assert all(f.is_equality for f in forms) and len(forms) == 2


def test_vh_cross_validation_mep(verts, forms):
    check_vh([v.coords for v in verts], forms)


def test_subset_oracle_agrees(verts, forms):
    dd = sorted(slack_vector(f, verts) for f in forms if not f.is_equality)
    assert dd == facets_by_subsets(verts)
    assert len(list(itertools.combinations(range(12), 7))) == 792


def test_reference_bijection(forms):
    m = match_reference_inequalities(forms)
    assert m.bijective
    # the lifted representatives coincide with the reference ones coefficient by coefficient
    for num, idx in m.pairs.items():
        c, a = HULL_INEQUALITIES[num]
        assert forms[idx].coefficients == tuple(Fraction(x) for x in c)
        assert forms[idx].constant == a


def test_inequality_22_matches(forms):
    eqs = [f for f in forms if f.is_equality]
    ref22 = hull_inequalities()[22]
    assert any(equivalent_modulo(f, ref22, eqs) for f in forms if not f.is_equality)


def test_non_facet_unmatched(forms):
    bogus = LinearForm.ge([1, 1, 1, 1, 1, 1, 1, 1, 1], 9)
    m = match_forms(forms, {99: bogus})
    assert m.unmatched_reference == [99] and len(m.unmatched_computed) == 28


def test_equivalence_modulo_equalities(forms):
    eqs = [f for f in forms if f.is_equality]
    f = hull_inequalities()[25]
    shifted = LinearForm(
        tuple(a + b for a, b in zip(f.coefficients, eqs[0].coefficients)),
        f.constant + eqs[0].constant,
    )
    assert equivalent_modulo(shifted, f, eqs)
    assert not equivalent_modulo(shifted, f, [])
    neg = LinearForm(tuple(-x for x in f.coefficients), -f.constant)
    assert not equivalent_modulo(neg, f, eqs)


def test_linear_form_canonical():
    f = LinearForm.ge([Fraction(1, 2), 1], Fraction(3, 2))
    assert f.coefficients == (1, 2) and f.constant == 3
    e = LinearForm.eq([-2, 4], 2)
    assert e.coefficients == (1, -2) and e.constant == -1
    with pytest.raises(ValueError):
        LinearForm((0, 0), 1)
    with pytest.raises(ValueError):
        LinearForm((1,), 0, "less")
    assert LinearForm.ge([1, -2], 1).format() == "w1 - 2 w2 >= -1"


def test_quantum_violation_examples(mep_for):
    ref = hull_inequalities()
    q5 = quantum_violation(ref[5], mep_for, MEP_PATH)
    assert abs(q5.min_eigenvalue - (-3.89807)) < 1e-4 and q5.violated
    assert abs(np.linalg.norm(q5.eigenvector) - 1) < 1e-12
    q25 = quantum_violation(ref[25], mep_for, MEP_PATH)
    assert q25.min_eigenvalue >= -1 - 1e-9 and not q25.violated


@pytest.mark.parametrize("num", sorted(set(HULL_INEQUALITIES) - set(VIOLATION_ROWS)))
def test_omitted_rows_not_violated(num, mep_for):
    q = quantum_violation(hull_inequalities()[num], mep_for, MEP_PATH)
    assert q.min_eigenvalue + float(hull_inequalities()[num].constant) >= -1e-6


def test_quantum_violation_errors(mep_for):
    f = LinearForm.ge([1], 1, (("1", "5"),))
    with pytest.raises(KeyError):
        quantum_violation(f, mep_for, MEP_PATH)
    with pytest.raises(ValueError):
        quantum_violation(hull_equalities()[0], mep_for, MEP_PATH)


def test_quantum_violation_matches_lapack(mep_for):
    for num, form in hull_inequalities().items():
        q = quantum_violation(form, mep_for, MEP_PATH)
        M = form_operator(form, mep_for, MEP_PATH)
        assert abs(q.min_eigenvalue - np.linalg.eigvalsh(M)[0]) < 1e-10
        assert np.allclose(M @ q.eigenvector, q.min_eigenvalue * q.eigenvector, atol=1e-9)


def test_ine_round_trip(forms):
    text = write_ine(forms, comment="test")
    assert text.splitlines()[1] == "H-representation"
    assert "linearity 2 1 2" in text
    assert " 30 10 integer" in text
    back = read_ine(text)
    assert [(f.coefficients, f.constant, f.kind) for f in back] == [
        (f.coefficients, f.constant, f.kind) for f in forms
    ]


def test_ext_round_trip(verts):
    text = write_ext(verts)
    assert text.splitlines()[3] == " 1 -1 1 1 1 -1 -1 -1 -1 -1"
    assert read_ext(text) == [v.coords for v in verts]
    with pytest.raises(ValueError):
        read_ext("V-representation\nbegin\n 1 3 integer\n 0 1 1\nend\n")


@pytest.mark.parametrize("name", ["mep", "a", "b"])
def test_vh_cross_validation_variants(name):
    t = enumerate_states(builtin(name))
    pts = [v.coords for v in build_vertices(t, MEP_PATH)]
    forms = facet_enumeration(pts)
    check_vh(pts, forms)


pm1_points = st.lists(
    st.tuples(*[st.sampled_from([-1, 1])] * 4), min_size=1, max_size=10, unique=True
)


@settings(max_examples=60, deadline=None)
@given(pm1_points)
def test_dd_equals_subset_oracle_random(pts):
    forms = facet_enumeration(pts)
    check_vh(pts, forms)
    dd = sorted(slack_vector(f, pts) for f in forms if not f.is_equality)
    assert dd == facets_by_subsets(pts)


int_points = st.lists(
    st.tuples(*[st.integers(-3, 3)] * 3), min_size=4, max_size=9, unique=True
)


@settings(max_examples=40, deadline=None)
@given(int_points)
def test_full_dimensional_facets_match_qhull(pts):
    dim, _ = affine_hull(pts)
    assume(dim == 3)
    forms = facet_enumeration(pts)
    hull = ConvexHull(np.array(pts, dtype=float))
    # qhull triangulates facets; merge by normalised plane equation
    planes = {tuple(np.round(eq / np.abs(eq[:3]).max(), 6)) for eq in hull.equations}
    assert len(forms) == len(planes)
