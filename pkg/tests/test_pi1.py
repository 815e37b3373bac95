import numpy as np
import pytest

import sectorlab as sl
from sectorlab.complexes import Dart
from sectorlab.errors import (
    BackendUnavailableError,
    InvalidParameterError,
    PossiblyInfiniteGroupError,
)
from sectorlab.pi1 import (
    PathWord,
    base_path,
    based_loop_from_word,
    guess_backend,
    loop_class,
    loop_word,
    random_path,
    random_word,
    spanning_tree,
)


@pytest.fixture
def c8():
    cx = sl.build_cycle(8)
    return cx, guess_backend(spanning_tree(cx))


@pytest.fixture
def s3():
    cx = sl.build_presentation_complex(["a", "b"], ["a^2", "b^2", "(ab)^3"])
    return cx, guess_backend(spanning_tree(cx))


def test_chord_counts():
    assert spanning_tree(sl.build_cycle(8)).betti == 1
    assert spanning_tree(sl.build_grid_with_holes(7, 7)).betti == 36
    wedge = sl.build_presentation_complex(["a", "b"], [])
    pres = spanning_tree(wedge)
    assert pres.betti == 2 and not pres.relators


def test_grid_chords_all_killed():
    pres = guess_backend(spanning_tree(sl.build_grid_with_holes(7, 7)))
    assert pres.backend.describe() == {"type": "free", "generators": [], "rank": 0}


def test_base_path_identity(c8):
    cx, pres = c8
    path = base_path(pres, pres.base)
    assert len(path) == 0 and path.start == pres.base


def test_base_path_adjacent(c8):
    cx, pres = c8
    assert len(base_path(pres, "v1")) == 1


def test_base_path_backtrack_cancels(c8):
    cx, pres = c8
    for v in cx.vertices:
        p = base_path(pres, v)
        assert len(p.then(p.reverse()).reduced()) == 0


def test_tree_path_maps_to_identity(c8):
    cx, pres = c8
    for v in cx.vertices:
        assert pres.backend.is_identity(loop_class(pres, base_path(pres, v)))


def test_full_cycle_loop_is_generator(c8):
    cx, pres = c8
    loop = PathWord(cx, "v0", tuple(Dart(f"e{i}", 1) for i in range(8)))
    element = loop_class(pres, loop)
    gen = pres.backend.generator(pres.chords[0])
    assert element in (gen, pres.backend.inverse(gen))


@pytest.mark.parametrize("fixture_name", ["c8", "s3"])
def test_loop_class_multiplicative(fixture_name, request):
    # the class of p.then(q) composes the classes with q acting later
    cx, pres = request.getfixturevalue(fixture_name)
    backend = pres.backend
    rng = np.random.default_rng(42)
    for _ in range(100):
        p = random_path(cx, rng)
        q = random_path(cx, rng, start=p.end)
        lhs = loop_class(pres, p.then(q))
        rhs = backend.compose(loop_class(pres, q), loop_class(pres, p))
        assert lhs == rhs


def test_face_relators_hold(s3):
    cx, pres = s3
    backend = pres.backend
    for fid in cx.face_ids:
        word = cx.face_word(fid)
        start = cx.dart_tail(word[0])
        closed = base_path(pres, start).then(PathWord(cx, start, word)).then(
            base_path(pres, start).reverse())
        assert backend.is_identity(loop_class(pres, closed))


def test_simply_connected_exhaustive_small_walks():
    # every closed walk of length <= 8 on the 3x3 grid has trivial class
    cx = sl.build_grid_with_holes(3, 3)
    pres = guess_backend(spanning_tree(cx))
    backend = pres.backend
    base = pres.base
    checked = 0

    def explore(v, depth, darts):
        nonlocal checked
        if v == base and darts:
            assert backend.is_identity(loop_class(pres, PathWord(cx, base, tuple(darts))))
            checked += 1
        if depth == 0:
            return
        for d in cx.darts_at(v):
            explore(cx.dart_head(d), depth - 1, darts + [d])

    explore(base, 8, [])
    assert checked > 100


def test_based_loop_realizes_word(s3):
    cx, pres = s3
    rng = np.random.default_rng(9)
    for _ in range(25):
        w = random_word(pres, rng)
        loop = based_loop_from_word(pres, w)
        assert loop.is_closed()
        assert loop_class(pres, loop) == pres.backend.from_word(w)


def test_loop_word_is_free_class(c8):
    cx, pres = c8
    loop = PathWord(cx, "v0", tuple(Dart(f"e{i}", 1) for i in range(8)))
    w = loop_word(pres, loop)
    assert w in (((pres.chords[0], 1),), ((pres.chords[0], -1),))


def test_finite_backend_examples():
    z4 = sl.finite_backend_from_presentation(["a"], ["a^4"])
    assert z4.order == 4
    s3 = sl.finite_backend_from_presentation(["a", "b"], ["a^2", "b^2", "(ab)^3"])
    assert s3.order == 6 and not s3.is_abelian()
    with pytest.raises(PossiblyInfiniteGroupError):
        sl.finite_backend_from_presentation(["a", "b"], [], order_bound=1000)


def test_guess_backend_variants():
    z3 = guess_backend(spanning_tree(sl.build_presentation_complex(["a"], ["a^3"])))
    assert z3.backend.describe() == {"type": "cyclic", "generators": ["a"], "n": 3}
    torus = guess_backend(spanning_tree(
        sl.build_presentation_complex(["a", "b"], ["a b a^-1 b^-1"])))
    assert torus.backend.describe()["type"] == "free-abelian"
    holes = guess_backend(spanning_tree(
        sl.build_grid_with_holes(7, 7, [(2, 2, 1, 1)])))
    assert holes.backend.describe()["type"] == "free"
    assert holes.backend.rank == 1


def test_attach_backend_validates_relators():
    cx = sl.build_presentation_complex(["a"], ["a^3"])
    pres = spanning_tree(cx)
    with pytest.raises(BackendUnavailableError):
        sl.attach_backend(pres, sl.CyclicGroup(4, "a"))  # a^3 fails in Z4


def test_backend_required_for_loop_class(c8):
    cx, _ = c8
    raw = spanning_tree(cx)
    with pytest.raises(BackendUnavailableError):
        loop_class(raw, base_path(raw, "v1"))


def test_two_particle_homology_oracle():
    pairs = sl.build_two_particle_space(sl.build_cycle(6))
    pres = spanning_tree(pairs)
    hom = sl.presentation_homology(pres)
    assert hom == {"free_rank": 1, "torsion": []}

    sympy = pytest.importorskip("sympy")
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    idx = {g: i for i, g in enumerate(pres.chords)}
    rows = []
    for rel in pres.relators:
        row = [0] * len(pres.chords)
        for g, e in rel:
            row[idx[g]] += e
        rows.append(row)
    snf = sympy_snf(Matrix(rows))
    diag = [abs(snf[i, i]) for i in range(min(snf.shape))]
    rank = sum(1 for d in diag if d != 0)
    assert len(pres.chords) - rank == 1
    assert all(d in (0, 1) for d in diag)


def test_path_word_validation():
    cx = sl.build_cycle(4)
    with pytest.raises(InvalidParameterError):
        PathWord(cx, "nope")
    with pytest.raises(InvalidParameterError):
        PathWord(cx, "v0", (Dart("e1", 1),))  # e1 starts at v1, not v0
    with pytest.raises(InvalidParameterError):
        PathWord(cx, "v0", (Dart("e0", 1),)).then(PathWord(cx, "v3", ()))


def test_spanning_tree_deterministic():
    cx = sl.build_grid_with_holes(5, 5)
    a = spanning_tree(cx)
    b = spanning_tree(cx)
    assert a.chords == b.chords
    assert a.relators == b.relators
    assert a.bfs_order == b.bfs_order


def test_reduce_word_service():
    backend = sl.CyclicGroup(3, "a")
    assert sl.reduce_word(backend, "a^5") == sl.reduce_word(backend, "a^2")
    free = sl.FreeGroup(["a", "b"])
    assert sl.reduce_word(free, "a b b^-1 a^-1") == free.identity()
