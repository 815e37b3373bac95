import pytest

import sectorlab as sl
from sectorlab.errors import (
    FileFormatError,
    InvalidParameterError,
    InvalidRegionError,
    NotConnectedError,
)


def test_cycle_counts():
    cx = sl.build_cycle(3)
    assert (cx.n_vertices, cx.n_edges, cx.n_faces) == (3, 3, 0)
    assert sl.build_cycle(8).cycle_rank() == 1


def test_cycle_rejects_small():
    with pytest.raises(InvalidParameterError):
        sl.build_cycle(2)


def test_presentation_complex_z3():
    cx = sl.build_presentation_complex(["a"], ["a^3"])
    assert (cx.n_vertices, cx.n_edges, cx.n_faces) == (1, 1, 1)
    assert len(cx.face_word("r0")) == 3


def test_presentation_complex_wedge():
    cx = sl.build_presentation_complex(["a", "b"], [])
    assert (cx.n_vertices, cx.n_edges, cx.n_faces) == (1, 2, 0)


def test_presentation_complex_unknown_generator():
    with pytest.raises(InvalidParameterError):
        sl.build_presentation_complex(["a"], ["a b"])


def test_grid_full_is_simply_connected():
    cx = sl.build_grid_with_holes(5, 5)
    assert cx.n_vertices == 25 and cx.n_edges == 40 and cx.n_faces == 16
    assert sl.is_simply_connected(cx)


@pytest.mark.parametrize("holes,rank", [
    ([(2, 2, 1, 1)], 1),
    ([(2, 2, 1, 1), (2, 4, 1, 1)], 2),
])
def test_grid_hole_count_is_homology_rank(holes, rank):
    cx = sl.build_grid_with_holes(7, 7, holes)
    hom = sl.presentation_homology(sl.spanning_tree(cx))
    assert hom == {"free_rank": rank, "torsion": []}


def test_grid_hole_validation():
    with pytest.raises(InvalidParameterError):
        sl.build_grid_with_holes(7, 7, [(0, 2, 1, 1)])  # touches the boundary
    with pytest.raises(InvalidParameterError):
        sl.build_grid_with_holes(7, 7, [(2, 2, 2, 2), (3, 3, 1, 1)])  # overlap


def test_two_particle_cycle6():
    pairs = sl.build_two_particle_space(sl.build_cycle(6))
    assert (pairs.n_vertices, pairs.n_edges, pairs.n_faces) == (15, 24, 9)


def test_two_particle_degenerate_edge():
    pairs = sl.build_two_particle_space(sl.build_path(2))
    assert (pairs.n_vertices, pairs.n_edges) == (1, 0)


def test_two_particle_subdivided_star_connected():
    star = sl.ConfigComplex(
        ["c", "m1", "l1", "m2", "l2", "m3", "l3"],
        [("a1", "c", "m1"), ("a2", "m1", "l1"), ("b1", "c", "m2"),
         ("b2", "m2", "l2"), ("c1", "c", "m3"), ("c2", "m3", "l3")])
    pairs = sl.build_two_particle_space(star)
    assert pairs.n_vertices == 21  # C(7,2): builder reached every configuration


def test_two_particle_rejects_faces_and_loops():
    with pytest.raises(InvalidParameterError):
        sl.build_two_particle_space(sl.build_presentation_complex(["a"], ["a^3"]))
    loopy = sl.ConfigComplex(["u", "v"], [("e", "u", "v"), ("l", "u", "u")])
    with pytest.raises(InvalidParameterError):
        sl.build_two_particle_space(loopy)


def test_two_particle_vertices_unordered():
    pairs = sl.build_two_particle_space(sl.build_cycle(5))
    # every id names the smaller base vertex first: the pair is genuinely unordered
    for vid in pairs.vertices:
        a, b = vid.split("|")
        assert a < b


def test_connectivity_enforced():
    with pytest.raises(NotConnectedError):
        sl.ConfigComplex(["a", "b"], [])


def test_face_must_close():
    with pytest.raises(InvalidParameterError):
        sl.ConfigComplex(["a", "b", "c"],
                         [("e0", "a", "b"), ("e1", "b", "c")],
                         [("f", ("e0", "e0"))])


def test_duplicate_ids_rejected():
    with pytest.raises(InvalidParameterError):
        sl.ConfigComplex(["a", "a"], [])
    with pytest.raises(InvalidParameterError):
        sl.ConfigComplex(["a", "b"], [("e", "a", "b"), ("e", "b", "a")])


def test_weights_must_be_positive():
    with pytest.raises(InvalidParameterError):
        sl.ConfigComplex({"a": 0.0}, [])
    with pytest.raises(InvalidParameterError):
        sl.ConfigComplex(["a", "b"], [("e", "a", "b", -1.0)])


def test_star_region_grid_interior():
    cx = sl.build_grid_with_holes(5, 5)
    region = sl.star_region(cx, "v2x2", 1)
    assert region.small
    assert len(region.vertices) == 5 and not region.face_ids


def test_star_region_whole_cycle_not_small():
    cx = sl.build_cycle(8)
    region = sl.star_region(cx, "v0", 5)
    assert region.vertices == frozenset(cx.vertices)
    assert not region.small


def test_star_region_z3_not_small():
    cx = sl.build_presentation_complex(["a"], ["a^3"])
    region = sl.star_region(cx, "v0", 1)
    assert region.vertices == frozenset(["v0"])
    assert not region.small  # the relator face leaves a cyclic group, not a trivial one


def test_arc_region_is_small():
    cx = sl.build_cycle(8)
    region = sl.region_from_vertices(cx, ["v0", "v1", "v2", "v3"])
    assert region.small


def test_region_must_be_connected():
    cx = sl.build_cycle(8)
    with pytest.raises(InvalidRegionError):
        sl.region_from_vertices(cx, ["v0", "v4"])


def test_star_region_radius_precondition():
    cx = sl.build_cycle(8)
    with pytest.raises(InvalidParameterError):
        sl.star_region(cx, "v0", 0)


def test_euler_consistency_simply_connected():
    # cycle-space rank equals the number of independent face relations
    cx = sl.build_grid_with_holes(5, 5)
    pres = sl.spanning_tree(cx)
    hom = sl.presentation_homology(pres)
    assert cx.cycle_rank() == 16
    assert hom["free_rank"] == 0 and not hom["torsion"]


def test_text_roundtrip():
    cx = sl.ConfigComplex({"a": 2.0, "b": 1.0},
                          [("e0", "a", "b", 0.5), ("e1", "b", "a")],
                          [("f0", ("e0", "e1"))])
    text = cx.to_text()
    back = sl.ConfigComplex.from_text(text)
    assert back.vertices == cx.vertices
    assert back.edge_ids == cx.edge_ids
    assert back.face_ids == cx.face_ids
    assert back.vertex_weight("a") == 2.0
    assert back.edge_weight("e0") == 0.5


def test_text_parse_errors():
    with pytest.raises(FileFormatError):
        sl.ConfigComplex.from_text("[edges]\ne0 a b\n")
    with pytest.raises(FileFormatError):
        sl.ConfigComplex.from_text("[vertices]\na\n[unknown]\n")
    with pytest.raises(FileFormatError):
        sl.ConfigComplex.from_text("[vertices]\na notanumber\n")
