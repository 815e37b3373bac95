import numpy as np
import pytest

import sectorlab as sl
from sectorlab.complexes import Dart
from sectorlab.errors import (
    InvalidRegionError,
    InvalidRepresentationError,
)
from sectorlab.holonomy import (
    FlatConnection,
    enumerate_reduced_words,
    rep_from_json,
    rep_to_json,
)
from sectorlab.pi1 import PathWord, based_loop_from_word, random_word


@pytest.fixture
def c8():
    cx = sl.build_cycle(8)
    return cx, sl.guess_backend(sl.spanning_tree(cx))


@pytest.fixture
def s3():
    cx = sl.build_presentation_complex(["a", "b"], ["a^2", "b^2", "(ab)^3"])
    return cx, sl.guess_backend(sl.spanning_tree(cx))


def full_loop(cx):
    return PathWord(cx, "v0", tuple(Dart(f"e{i}", 1) for i in range(cx.n_edges)))


# -- cocycle construction -----------------------------------------------------


def test_trivial_rep_gives_identity_connection(c8):
    cx, pres = c8
    conn = sl.cocycle_from_rep(cx, pres, sl.trivial_rep(pres.backend, 1))
    for eid in cx.edge_ids:
        assert np.allclose(conn.edge_matrix(eid), np.eye(1))


def test_character_connection_tree_gauge(c8):
    cx, pres = c8
    rep = sl.character_rep(pres.backend, {pres.chords[0]: 0.3})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    for eid in cx.edge_ids:
        if eid == pres.chords[0]:
            assert np.allclose(conn.edge_matrix(eid), np.exp(2j * np.pi * 0.3))
        else:
            assert np.allclose(conn.edge_matrix(eid), 1.0)


def test_s3_connection_carries_generator_matrices(s3):
    cx, pres = s3
    rep = sl.two_dim_reflection_rep(pres.backend)
    conn = sl.cocycle_from_rep(cx, pres, rep)
    for g in ("a", "b"):
        assert np.allclose(conn.edge_matrix(g), rep.matrices[g])
    assert conn.is_flat()


def test_backend_mismatch_rejected(c8):
    cx, pres = c8
    other = sl.CyclicGroup(4, pres.chords[0])
    rep = sl.character_rep(other, {pres.chords[0]: 0.25})
    with pytest.raises(InvalidRepresentationError):
        sl.cocycle_from_rep(cx, pres, rep)


def test_relator_violation_rejected(s3):
    cx, pres = s3
    # a -> phase i is not an involution, so it cannot represent this group
    with pytest.raises(InvalidRepresentationError):
        sl.character_rep(pres.backend, {"a": 0.25, "b": 0.5})


# -- transport -----------------------------------------------------------------


def test_transport_empty_path(c8):
    cx, pres = c8
    conn = sl.cocycle_from_rep(cx, pres, sl.trivial_rep(pres.backend, 2))
    assert np.allclose(sl.transport(conn, PathWord(cx, "v0")), np.eye(2))


def test_transport_inverse_law(c8):
    cx, pres = c8
    rep = sl.character_rep(pres.backend, {pres.chords[0]: 0.3})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    rng = np.random.default_rng(1)
    for _ in range(20):
        p = sl.pi1.random_path(cx, rng)
        m = sl.transport(conn, p.then(p.reverse()))
        assert np.allclose(m, np.eye(1), atol=1e-12)


def test_closed_loop_phase(c8):
    cx, pres = c8
    theta = 0.3
    rep = sl.character_rep(pres.backend, {pres.chords[0]: theta})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    hol = sl.transport(conn, full_loop(cx))
    assert abs(hol[0, 0] - np.exp(2j * np.pi * theta)) < 1e-12


# -- cocycle law -----------------------------------------------------------------


@pytest.mark.parametrize("theta", [0.0, 0.25, 0.5])
def test_verify_cocycle_character(c8, theta):
    cx, pres = c8
    rep = sl.character_rep(pres.backend, {pres.chords[0]: theta})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    report = sl.verify_cocycle(conn, trials=500)
    assert report.ok and report.max_deviation <= 1e-12


def test_cocycle_on_random_phase_tree():
    # trees carry no loop constraints: any phase assignment is a cocycle
    cx = sl.build_path(6)
    rng = np.random.default_rng(3)
    mats = {eid: np.array([[np.exp(2j * np.pi * rng.random())]]) for eid in cx.edge_ids}
    conn = FlatConnection(cx, 1, mats)
    assert conn.is_flat()
    assert sl.verify_cocycle(conn, trials=200).ok


def test_nonflat_connection_flagged():
    cx = sl.build_grid_with_holes(3, 3)
    mats = {"h0x0": np.array([[np.exp(0.7j)]])}
    conn = FlatConnection(cx, 1, mats)
    assert not conn.is_flat()
    assert conn.max_face_deviation() > 0.1
    region = sl.star_region(cx, "v0x0", 2)
    assert region.small
    report = sl.ls_check(conn, region)
    assert not report.ok
    assert report.offending_loop is not None
    hol = sl.transport(conn, report.offending_loop)
    assert np.linalg.norm(hol - np.eye(1)) > 0.1


# -- gauge transformations ---------------------------------------------------------


def test_identity_gauge_noop(c8):
    cx, pres = c8
    rep = sl.character_rep(pres.backend, {pres.chords[0]: 0.25})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    gauged = sl.gauge_transform(conn, sl.holonomy.identity_gauge(1))
    for eid in cx.edge_ids:
        assert np.allclose(gauged.edge_matrix(eid), conn.edge_matrix(eid))


def test_gauge_preserves_loop_spectrum(c8):
    cx, pres = c8
    rep = sl.character_rep(pres.backend, {pres.chords[0]: 0.25})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    rng = np.random.default_rng(7)
    gauged = sl.gauge_transform(conn, sl.random_gauge(cx, 1, rng))
    before = np.linalg.eigvals(sl.transport(conn, full_loop(cx)))
    after = np.linalg.eigvals(sl.transport(gauged, full_loop(cx)))
    assert np.allclose(sorted(before), sorted(after), atol=1e-10)
    assert gauged.is_flat()


def test_tree_gauge_canonical_form(c8):
    cx, pres = c8
    rep = sl.character_rep(pres.backend, {pres.chords[0]: 0.25})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    rng = np.random.default_rng(11)
    messy = sl.gauge_transform(conn, sl.random_gauge(cx, 1, rng))
    fixed, _ = sl.tree_gauge(messy, pres)
    for eid in cx.edge_ids:
        if eid not in pres.chords:
            assert np.allclose(fixed.edge_matrix(eid), np.eye(1), atol=1e-12)
    assert abs(fixed.edge_matrix(pres.chords[0])[0, 0]
               - np.exp(2j * np.pi * 0.25)) < 1e-10


def test_gauge_dimension_mismatch(c8):
    cx, pres = c8
    conn = sl.cocycle_from_rep(cx, pres, sl.trivial_rep(pres.backend, 2))
    with pytest.raises(Exception):
        sl.gauge_transform(conn, sl.holonomy.GaugeField(1, {"v0": np.eye(1)}))


# -- local triviality ---------------------------------------------------------------


def test_ls_check_star_in_grid():
    cx = sl.build_grid_with_holes(5, 5)
    pres = sl.guess_backend(sl.spanning_tree(cx))
    rng = np.random.default_rng(5)
    conn = sl.gauge_transform(
        sl.cocycle_from_rep(cx, pres, sl.trivial_rep(pres.backend, 2)),
        sl.random_gauge(cx, 2, rng))
    region = sl.star_region(cx, "v2x2", 1)
    report = sl.ls_check(conn, region)
    assert report.ok
    # the returned family trivializes every region edge: U(e) = S(head) S(tail)^-1
    for eid in sorted(region.edge_ids):
        u, v = cx.edge_ends(eid)
        lhs = conn.edge_matrix(eid)
        rhs = report.gauge.at(v) @ report.gauge.at(u).conj().T
        assert np.allclose(lhs, rhs, atol=1e-10)


def test_ls_check_arc_on_cycle(c8):
    cx, pres = c8
    rep = sl.character_rep(pres.backend, {pres.chords[0]: 0.3})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    arc = sl.region_from_vertices(cx, ["v0", "v1", "v2", "v3"])
    assert sl.ls_check(conn, arc).ok


def test_ls_check_requires_small_region(c8):
    cx, pres = c8
    conn = sl.cocycle_from_rep(cx, pres, sl.trivial_rep(pres.backend, 1))
    whole = sl.star_region(cx, "v0", 5)
    with pytest.raises(InvalidRegionError):
        sl.ls_check(conn, whole)


# -- topological operators -----------------------------------------------------------


def test_topological_operator_trivial(c8):
    cx, pres = c8
    conn = sl.cocycle_from_rep(cx, pres, sl.trivial_rep(pres.backend, 1))
    region = sl.star_region(cx, "v0", 1)
    top = sl.topological_operator(conn, full_loop(cx), region)
    assert np.allclose(top.holonomy, np.eye(1), atol=1e-12)
    assert top.deviation <= 1e-10


def test_topological_operator_character(c8):
    cx, pres = c8
    theta = 0.3
    rep = sl.character_rep(pres.backend, {pres.chords[0]: theta})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    region = sl.star_region(cx, "v0", 1)
    top = sl.topological_operator(conn, full_loop(cx), region)
    assert abs(top.holonomy[0, 0] - np.exp(2j * np.pi * theta)) < 1e-10
    assert top.deviation <= 1e-10


def test_topological_operator_s3_generator(s3):
    cx, pres = s3
    rep = sl.two_dim_reflection_rep(pres.backend)
    conn = sl.cocycle_from_rep(cx, pres, rep)
    region = sl.star_region(cx, "v0", 1)
    for g in ("a", "b"):
        loop = PathWord(cx, "v0", (Dart(g, 1),))
        top = sl.topological_operator(conn, loop, region)
        assert np.allclose(top.holonomy, rep.matrices[g], atol=1e-12)
        assert top.deviation <= 1e-10


def test_topological_operator_needs_base_in_region(c8):
    cx, pres = c8
    conn = sl.cocycle_from_rep(cx, pres, sl.trivial_rep(pres.backend, 1))
    region = sl.region_from_vertices(cx, ["v3", "v4"])
    with pytest.raises(InvalidRegionError):
        sl.topological_operator(conn, full_loop(cx), region)


# -- fingerprints ----------------------------------------------------------------


def test_enumerate_reduced_words_counts():
    words = enumerate_reduced_words(["a"], 3)
    # empty word plus g^k for 0 < |k| <= 3
    assert len(words) == 7
    words2 = enumerate_reduced_words(["a", "b"], 2)
    assert len(words2) == 1 + 4 + 12


def test_fingerprint_trivial_rep(c8):
    cx, pres = c8
    conn = sl.cocycle_from_rep(cx, pres, sl.trivial_rep(pres.backend, 2))
    fp = sl.equivalence_fingerprint(conn, pres, word_length=3)
    assert all(abs(t - 2.0) < 1e-12 for t in fp.traces)


def test_fingerprint_gauge_invariant(c8):
    cx, pres = c8
    rep = sl.character_rep(pres.backend, {pres.chords[0]: 0.25})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    rng = np.random.default_rng(13)
    gauged = sl.gauge_transform(conn, sl.random_gauge(cx, 1, rng))
    d = sl.fingerprint_distance(
        sl.equivalence_fingerprint(conn, pres, 4),
        sl.equivalence_fingerprint(gauged, pres, 4))
    assert d <= 1e-10


def test_fingerprint_separates_conjugate_characters(c8):
    cx, pres = c8
    f1 = sl.equivalence_fingerprint(
        sl.cocycle_from_rep(cx, pres, sl.character_rep(pres.backend, {pres.chords[0]: 0.25})),
        pres, 1)
    f2 = sl.equivalence_fingerprint(
        sl.cocycle_from_rep(cx, pres, sl.character_rep(pres.backend, {pres.chords[0]: 0.75})),
        pres, 1)
    assert sl.fingerprint_distance(f1, f2) > 1.0  # |i - (-i)| = 2 at word length 1


def test_homotopy_invariance(s3):
    cx, pres = s3
    rep = sl.two_dim_reflection_rep(pres.backend)
    conn = sl.cocycle_from_rep(cx, pres, rep)
    rng = np.random.default_rng(17)
    gauged = sl.gauge_transform(conn, sl.random_gauge(cx, 2, rng))
    by_element = {}
    pairs = 0
    for _ in range(120):
        w = random_word(pres, rng)
        loop = based_loop_from_word(pres, w)
        elem = sl.loop_class(pres, loop)
        for other in by_element.get(elem, []):
            assert np.allclose(sl.transport(gauged, loop),
                               sl.transport(gauged, other), atol=1e-10)
            pairs += 1
        by_element.setdefault(elem, []).append(loop)
    assert pairs >= 50


def test_base_point_conjugacy(c8):
    # holonomy at a second base point is conjugate by any connecting transport
    cx, pres = c8
    rep = sl.character_rep(pres.backend, {pres.chords[0]: 0.3})
    conn = sl.cocycle_from_rep(cx, pres, rep)
    rng = np.random.default_rng(19)
    conn = sl.gauge_transform(conn, sl.random_gauge(cx, 1, rng))
    gamma = full_loop(cx)
    delta = sl.base_path(pres, "v3").reverse()  # path from v3 to the base v0
    conj_loop = delta.then(gamma).then(delta.reverse())
    t = sl.transport(conn, delta)
    lhs = sl.transport(conn, conj_loop)
    rhs = np.conj(t).T @ sl.transport(conn, gamma) @ t
    assert np.allclose(lhs, rhs, atol=1e-12)


# -- representation files -------------------------------------------------------------


def test_rep_json_roundtrip(s3):
    cx, pres = s3
    rep = sl.two_dim_reflection_rep(pres.backend)
    data = rep_to_json(rep)
    back = rep_from_json(data, pres.backend)
    for g in pres.backend.generators:
        assert np.allclose(back.matrices[g], rep.matrices[g])
    assert back.dim == 2
