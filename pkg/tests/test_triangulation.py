import dataclasses
import itertools
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclic6j.algebra import GroupElement, group_inv, group_mul
from cyclic6j.fixtures import boundary4simplex_document, boundary4simplex_scene
from cyclic6j.triangulation import (
    BadCharge, BadColoring, BadLoop, Charge, EDGE_CORNERS, FACE_CORNERS,
    Gluing, MoveNotApplicable, NotClosed, NotHamiltonian, NotOrientable,
    NotQuasiRegular, OPPOSITE_EDGE, ParseError, Scene, TriComplex,
    _EDGE_INDEX, _perm_sign, _smith_solve, bubble_minus, bubble_plus,
    charge_class, color_of, deform_charge, edge_between, find_charge,
    gauge_transform, holonomy, is_admissible, load_complex, load_document,
    make_admissible, pachner_minus, pachner_plus, point_gauge, random_gauge,
    scene_document, validate_charge, validate_link,
)


def double_tet() -> TriComplex:
    """Two tetrahedra glued along all four faces by corner-preserving maps."""
    return TriComplex([1, -1], [
        Gluing((0, 0), (1, 0), ((1, 1), (2, 2), (3, 3))),
        Gluing((0, 1), (1, 1), ((0, 0), (2, 2), (3, 3))),
        Gluing((0, 2), (1, 2), ((0, 0), (1, 1), (3, 3))),
        Gluing((0, 3), (1, 3), ((0, 0), (1, 1), (2, 2))),
    ])


def edge_degrees(T: TriComplex) -> list[int]:
    return sorted(len(T.edge_incidences(c)) for c in range(T.n_edges))


def test_corner_schema_constants():
    assert len(EDGE_CORNERS) == 6
    for e, (a, b) in enumerate(EDGE_CORNERS):
        assert a < b
        # opposite edge has the complementary corner pair
        oa, ob = EDGE_CORNERS[OPPOSITE_EDGE[e]]
        assert {a, b} | {oa, ob} == {0, 1, 2, 3}
        assert OPPOSITE_EDGE[OPPOSITE_EDGE[e]] == e
        assert _EDGE_INDEX[(a, b)] == e
    for f in range(4):
        assert f not in FACE_CORNERS[f]


@given(st.permutations(range(5)))
def test_perm_sign_matches_determinant(perm):
    mat = np.zeros((5, 5))
    for i, j in enumerate(perm):
        mat[i, j] = 1.0
    assert _perm_sign(perm) == pytest.approx(np.linalg.det(mat))


def test_smith_solver_on_constructed_systems():
    rng = np.random.default_rng(7)
    for _ in range(50):
        nvars = int(rng.integers(2, 7))
        neqs = int(rng.integers(1, 6))
        A = rng.integers(-4, 5, size=(neqs, nvars))
        x0 = rng.integers(-3, 4, size=nvars)
        b = A @ x0
        res = _smith_solve([list(map(int, row)) for row in A],
                           [int(v) for v in b], nvars)
        assert res is not None
        part, kernel = res
        assert np.array_equal(A @ np.array(part), b)
        for col in kernel:
            assert np.array_equal(A @ np.array(col), np.zeros(neqs, int))


def test_smith_solver_detects_unsolvable():
    assert _smith_solve([[2]], [1], 1) is None


def test_fixture_combinatorics(fixture_scene):
    T = fixture_scene.complex
    assert T.n_tets == 5
    assert T.n_vertices == 5
    assert T.n_edges == 10
    assert T.n_faces == 10
    assert edge_degrees(T) == [3] * 10
    assert len(fixture_scene.link) == 5
    validate_link(T, fixture_scene.link)
    validate_charge(T, fixture_scene.link, fixture_scene.charge)
    assert is_admissible(fixture_scene.coloring)


def test_color_orientation_inverts(fixture_scene):
    T = fixture_scene.complex
    col = fixture_scene.coloring
    for t in range(T.n_tets):
        for a, b in EDGE_CORNERS:
            fwd = color_of(T, col, t, a, b)
            back = color_of(T, col, t, b, a)
            assert group_mul(fwd, back).x == pytest.approx(0.0, abs=1e-12)


def test_unglued_face_detected():
    with pytest.raises(NotClosed):
        TriComplex([1, -1], [
            Gluing((0, 0), (1, 0), ((1, 1), (2, 2), (3, 3))),
            Gluing((0, 1), (1, 1), ((0, 0), (2, 2), (3, 3))),
            Gluing((0, 2), (1, 2), ((0, 0), (1, 1), (3, 3))),
        ])


def test_orientation_parity_rule_enforced(fixture_scene):
    T = fixture_scene.complex
    flipped = [-o if t == 1 else o for t, o in enumerate(T.orientations)]
    with pytest.raises(NotOrientable):
        TriComplex(flipped, T.gluings)


def test_loop_edges_detected():
    doc = {
        "tetrahedra": [{"orientation": 1}],
        "gluings": [
            {"a": [0, 0], "b": [0, 1], "corner_map": [[1, 0], [2, 2], [3, 3]]},
            {"a": [0, 2], "b": [0, 3], "corner_map": [[0, 0], [1, 1], [3, 2]]},
        ],
    }
    with pytest.raises(NotQuasiRegular):
        load_complex(doc)


def test_parse_errors():
    with pytest.raises(ParseError):
        load_complex({"gluings": []})
    with pytest.raises(ParseError):
        load_complex({
            "tetrahedra": [{"orientation": 1}],
            "gluings": [{"a": [0, 0], "b": [5, 0],
                         "corner_map": [[1, 1], [2, 2], [3, 3]]}],
        })


def test_short_link_rejected(fixture_scene):
    T = fixture_scene.complex
    broken = frozenset(list(fixture_scene.link)[1:])
    with pytest.raises(NotHamiltonian):
        validate_link(T, broken)


def test_document_round_trip_is_byte_stable(fixture_scene):
    doc1 = scene_document(fixture_scene)
    text1 = json.dumps(doc1, sort_keys=True)
    doc2 = scene_document(load_document(doc1))
    assert json.dumps(doc2, sort_keys=True) == text1


def test_document_fills_opposite_charge_slots():
    scene = load_document(boundary4simplex_document())
    for row in scene.charge.doubled:
        for e in range(6):
            assert row[e] == row[OPPOSITE_EDGE[e]]


def test_tampered_charge_rejected(fixture_scene):
    T = fixture_scene.complex
    rows = [list(r) for r in fixture_scene.charge.doubled]
    rows[0][0] += 1
    rows[0][OPPOSITE_EDGE[0]] += 1
    with pytest.raises(BadCharge):
        validate_charge(T, fixture_scene.link, Charge(tuple(
            tuple(r) for r in rows)))


def test_tampered_coloring_rejected():
    doc = boundary4simplex_document()
    doc["coloring"][0]["g"] = [2.5, 1.0]
    with pytest.raises(BadColoring):
        load_document(doc)


def test_charge_values_in_doubled_range(fixture_scene):
    # per-tetrahedron pair sums are 1 (doubled), link edges sum to 0
    T = fixture_scene.complex
    for t in range(T.n_tets):
        row = fixture_scene.charge.doubled[t]
        pair_sum = row[0] + row[1] + row[2]
        assert pair_sum == 1
    for cls in range(T.n_edges):
        total = sum(fixture_scene.charge.doubled[t][e]
                    for t, e in T.edge_incidences(cls))
        assert total == (0 if cls in fixture_scene.link else 2)


def test_find_charge_and_all_deformations(fixture_scene):
    T = fixture_scene.complex
    c0 = find_charge(T, fixture_scene.link)
    validate_charge(T, fixture_scene.link, c0)
    for cls in range(T.n_edges):
        validate_charge(T, fixture_scene.link,
                        deform_charge(T, fixture_scene.link, c0, cls))


def _three_tet_loop(T):
    t0 = 0
    t1, f10, _ = T.partner(t0, 0)
    for f_out1 in range(4):
        if f_out1 == f10:
            continue
        t2, f21, _ = T.partner(t1, f_out1)
        if t2 in (t0, t1):
            continue
        for f_out2 in range(4):
            if f_out2 == f21:
                continue
            t3, f3, _ = T.partner(t2, f_out2)
            if t3 == t0 and f3 != 0:
                return [(t0, f3, 0), (t1, f10, f_out1), (t2, f21, f_out2)]
    raise AssertionError("no three-tetrahedron loop found")


def test_charge_class_is_deformation_invariant(fixture_scene):
    T = fixture_scene.complex
    loop = _three_tet_loop(T)
    v = charge_class(T, fixture_scene.charge, loop)
    assert v in (0, 1)
    for cls in range(T.n_edges):
        c1 = deform_charge(T, fixture_scene.link, fixture_scene.charge, cls)
        assert charge_class(T, c1, loop) == v


def test_charge_class_rejects_broken_loops(fixture_scene):
    T = fixture_scene.complex
    loop = _three_tet_loop(T)
    with pytest.raises(BadLoop):
        charge_class(T, fixture_scene.charge, [(0, 1, 1)])
    with pytest.raises(BadLoop):
        charge_class(T, fixture_scene.charge, loop[:2])


def test_pachner_round_trip_restores_combinatorics(fixture_scene):
    bigger = pachner_plus(fixture_scene, 0, 0)
    T2 = bigger.complex
    assert T2.n_tets == 6
    assert sum(edge_degrees(T2)) == 6 * T2.n_tets
    assert edge_degrees(T2) == [2, 2, 2, 3, 3, 4, 4, 4, 4, 4, 4]
    load_document(scene_document(bigger))  # transported data revalidates
    new_tets = {T2.n_tets - 3, T2.n_tets - 2, T2.n_tets - 1}
    central = next(cls for cls in range(T2.n_edges)
                   if {t for t, _ in T2.edge_incidences(cls)} == new_tets)
    t_at, e_at = T2.edge_incidences(central)[0]
    back = pachner_minus(bigger, t_at, e_at)
    assert back.complex.n_tets == 5
    assert edge_degrees(back.complex) == [3] * 10
    load_document(scene_document(back))


def test_pachner_minus_refusals(fixture_scene):
    T = fixture_scene.complex
    link_cls = next(iter(fixture_scene.link))
    t, e = T.edge_incidences(link_cls)[0]
    with pytest.raises(MoveNotApplicable):
        pachner_minus(fixture_scene, t, e)


def test_pachner_plus_refuses_coincident_apexes():
    sc = Scene(double_tet(), frozenset())
    with pytest.raises(MoveNotApplicable):
        pachner_plus(sc, 0, 0)


def _link_face(scene):
    T = scene.complex
    return next(
        (t, f) for t in range(T.n_tets) for f in range(4)
        if any(T.edge_class(t, _EDGE_INDEX[(a, b)]) in scene.link
               for a, b in itertools.combinations(FACE_CORNERS[f], 2)))


def test_bubble_round_trip_restores_charge(fixture_scene):
    t, f = _link_face(fixture_scene)
    blown = bubble_plus(fixture_scene, t, f)
    T2 = blown.complex
    assert T2.n_tets == 7
    assert T2.n_vertices == 6
    assert len(blown.link) == 6
    load_document(scene_document(blown))
    new_v = max(range(T2.n_vertices), key=lambda v: T2.vertex_rank[v])
    back = bubble_minus(blown, new_v)
    assert back.complex.n_tets == 5
    assert back.charge.doubled == fixture_scene.charge.doubled
    assert set(back.link) == set(fixture_scene.link)


def test_bubble_plus_needs_a_link_edge(fixture_scene):
    # every face of the bare fixture meets the link (no independent
    # vertex triple on a 5-cycle), so grow the complex first
    grown = pachner_plus(fixture_scene, 0, 0)
    T = grown.complex
    non_link = next(
        (t, f) for t in range(T.n_tets) for f in range(4)
        if not any(T.edge_class(t, _EDGE_INDEX[(a, b)]) in grown.link
                   for a, b in itertools.combinations(FACE_CORNERS[f], 2)))
    with pytest.raises(MoveNotApplicable):
        bubble_plus(grown, *non_link)


def test_bubble_minus_needs_a_small_vertex(fixture_scene):
    with pytest.raises(MoveNotApplicable):
        bubble_minus(fixture_scene, 0)


def test_gauge_preserves_cocycle_and_conjugates_holonomy(fixture_scene, rng):
    T = fixture_scene.complex
    col = fixture_scene.coloring
    gauge = random_gauge(T, rng)
    col2 = gauge_transform(T, col, gauge)
    load_document(scene_document(dataclasses.replace(
        fixture_scene, coloring=col2)))
    # holonomy around a vertex cycle transforms by basepoint conjugation
    cycle = [0, 1, 2]
    h1 = holonomy(T, col, cycle)
    h2 = holonomy(T, col2, cycle)
    d = gauge.values[cycle[0]]
    want = group_mul(d, group_mul(h1, group_inv(d)))
    assert h2.x == pytest.approx(want.x, abs=1e-9)
    assert h2.y == pytest.approx(want.y, rel=1e-9)


def test_make_admissible_recovers_from_bad_gauge(fixture_scene, rng):
    T = fixture_scene.complex
    col = fixture_scene.coloring
    # a point gauge chosen to zero out one edge color's x part
    cls0 = min(col)
    lo, _ = T.edge_ends(cls0)
    killer = point_gauge(T, lo, GroupElement(-col[cls0].x, 1.0))
    broken = gauge_transform(T, col, killer)
    assert not is_admissible(broken)
    fixed = make_admissible(T, broken, rng)
    assert is_admissible(fixed)


def test_edge_between_endpoints(fixture_scene):
    T = fixture_scene.complex
    for cls in range(T.n_edges):
        lo, hi = T.edge_ends(cls)
        assert edge_between(T, lo, hi) == cls
