import numpy as np
import pytest

from sectorlab.errors import PossiblyInfiniteGroupError
from sectorlab.groups import (
    CyclicGroup,
    FiniteTableGroup,
    FreeAbelianGroup,
    FreeGroup,
    abelianization,
    character_table,
    invert_word,
    normalize_word,
    parse_word,
    simplify_presentation,
    smith_normal_form,
    word_mul,
    word_to_text,
)

S3_RELATORS = [(("a", 2),), (("b", 2),), (("a", 1), ("b", 1)) * 3]


def s3_group():
    return FiniteTableGroup.from_presentation(("a", "b"), S3_RELATORS, order_bound=24)


# -- words -------------------------------------------------------------------


def test_free_reduction():
    w = normalize_word((("a", 1), ("b", 1), ("b", -1), ("a", -1)))
    assert w == ()


def test_word_mul_cancels_at_junction():
    assert word_mul((("a", 2),), (("a", -2), ("b", 1))) == (("b", 1),)


def test_invert_word():
    w = (("a", 2), ("b", -1))
    assert word_mul(w, invert_word(w)) == ()


def test_parse_word_basic():
    gens = ["a", "b"]
    assert parse_word("a b b^-1 a^-1", gens) == ()
    assert parse_word("a2", gens) == (("a", 2),)
    assert parse_word("(ab)^3", gens) == (("a", 1), ("b", 1)) * 3
    assert parse_word("aBA", gens) == (("a", 1), ("b", -1), ("a", -1))
    assert parse_word("1", gens) == ()  # identity word, matching word_to_text


def test_parse_word_unknown_generator():
    with pytest.raises(Exception):
        parse_word("a c", ["a", "b"])


def test_word_to_text():
    assert word_to_text(()) == "1"
    assert word_to_text((("a", 1), ("b", -2))) == "a b^-2"


# -- backends -----------------------------------------------------------------


def test_free_group_reduce():
    f = FreeGroup(["a", "b"])
    assert f.from_word((("a", 1), ("b", 1), ("b", -1), ("a", -1))) == f.identity()


def test_cyclic_reduction():
    z3 = CyclicGroup(3)
    assert z3.from_word((("a", 5),)) == z3.from_word((("a", 2),))
    assert z3.power(z3.generator("a"), 3) == z3.identity()


def test_free_abelian():
    z2 = FreeAbelianGroup(["a", "b"])
    x = z2.from_word((("a", 1), ("b", 2), ("a", 3)))
    assert x == (4, 2)
    assert z2.compose(x, z2.inverse(x)) == z2.identity()


def test_s3_table_relator():
    g = s3_group()
    assert g.order == 6
    assert not g.is_abelian()
    ab = g.compose(g.generator("a"), g.generator("b"))
    assert g.element_order(ab) == 3  # the product of the two reflections rotates
    assert g.is_identity(g.from_word((("a", 1), ("b", 1)) * 3))


def test_s3_order_against_sympy():
    sympy = pytest.importorskip("sympy")
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    F, a, b = free_group("a b")
    fp = FpGroup(F, [a**2, b**2, (a * b)**3])
    assert fp.order() == s3_group().order


def test_z4_table():
    g = FiniteTableGroup.from_presentation(("a",), [(("a", 4),)], order_bound=8)
    assert g.order == 4
    assert g.is_abelian()
    assert g.element_order(g.generator("a")) == 4


def test_quaternion_group_order():
    rels = [parse_word(r, ["a", "b"]) for r in ("a^4", "a^2 b^-2", "b^-1 a b a")]
    q8 = FiniteTableGroup.from_presentation(("a", "b"), rels, order_bound=16)
    assert q8.order == 8
    assert not q8.is_abelian()
    sympy = pytest.importorskip("sympy")
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    F, a, b = free_group("a b")
    assert FpGroup(F, [a**4, a**2 * b**-2, b**-1 * a * b * a]).order() == 8


def test_free_presentation_exceeds_bound():
    with pytest.raises(PossiblyInfiniteGroupError):
        FiniteTableGroup.from_presentation(("a", "b"), [], order_bound=1000)


def test_element_word_roundtrip():
    g = s3_group()
    for x in g.elements():
        assert g.from_word(g.element_word(x)) == x


def test_composition_order_is_function_composition():
    g = s3_group()
    a, b = g.generator("a"), g.generator("b")
    # compose(a, b) applies b first; its word is written a·b
    assert g.compose(a, b) == g.from_word((("a", 1), ("b", 1)))
    assert g.compose(a, b) != g.compose(b, a)


def test_conjugacy_classes_s3():
    g = s3_group()
    sizes = sorted(len(c) for c in g.conjugacy_classes())
    assert sizes == [1, 2, 3]


# -- simplification and abelianization ---------------------------------------------


def test_simplify_eliminates_single_occurrence():
    simp = simplify_presentation(("a", "b"), [(("a", 1), ("b", 1))])
    assert simp.generators in ((("a",)), (("b",)))
    assert not simp.relators
    # the eliminated generator maps to the inverse of the survivor
    survivor = simp.generators[0]
    other = "a" if survivor == "b" else "b"
    assert simp.images[other] == ((survivor, -1),)


def test_simplify_stalls_on_commutator():
    simp = simplify_presentation(("a", "b"),
                                 [(("a", 1), ("b", 1), ("a", -1), ("b", -1))])
    assert simp.generators == ("a", "b")
    assert len(simp.relators) == 1


def test_smith_normal_form_against_sympy():
    sympy = pytest.importorskip("sympy")
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    rng = np.random.default_rng(5)
    for _ in range(10):
        m, n = rng.integers(1, 5, size=2)
        mat = rng.integers(-4, 5, size=(int(m), int(n)))
        ours = smith_normal_form(mat.tolist())
        theirs = sympy_snf(Matrix(mat.tolist()))
        t_diag = [abs(theirs[i, i]) for i in range(min(theirs.shape))]
        t_nonzero = sorted(d for d in t_diag if d != 0)
        # ranks agree and the torsion orders have the same product
        assert len(ours) == len(t_nonzero)
        prod_ours = int(np.prod(ours)) if ours else 1
        prod_theirs = int(np.prod(t_nonzero)) if t_nonzero else 1
        assert prod_ours == prod_theirs


def test_abelianization_examples():
    assert abelianization(("a",), [(("a", 3),)]) == {"free_rank": 0, "torsion": [3]}
    assert abelianization(("a", "b"), [(("a", 1), ("b", 1), ("a", -1), ("b", -1))]) == \
        {"free_rank": 2, "torsion": []}
    assert abelianization(("a", "b"), []) == {"free_rank": 2, "torsion": []}


# -- character tables ---------------------------------------------------------------


def test_character_table_s3_exact():
    table = character_table(s3_group())
    assert table.method == "exact-s3"
    assert table.dims == (1, 1, 2)
    assert table.class_sizes == (1, 3, 2)


def test_character_table_cyclic():
    table = character_table(FiniteTableGroup.from_presentation(
        ("a",), [(("a", 4),)], order_bound=8))
    assert table.method == "exact-cyclic"
    assert table.dims == (1, 1, 1, 1)
    # rows are the discrete Fourier characters: orthogonality
    n = 4
    sizes = np.array(table.class_sizes, dtype=float)
    gram = (table.table * sizes[None, :]) @ table.table.conj().T / n
    assert np.allclose(gram, np.eye(n), atol=1e-12)


def test_character_table_s4_exact():
    # (2,3,4) triangle presentation: s a transposition, c a 4-cycle
    rels = [parse_word(r, ["s", "c"]) for r in ("s^2", "c^4", "(sc)^3")]
    s4 = FiniteTableGroup.from_presentation(("s", "c"), rels, order_bound=48)
    assert s4.order == 24
    table = character_table(s4)
    assert table.method == "exact-s4"
    assert table.dims == (1, 1, 2, 3, 3)


def test_character_table_numeric_quaternion():
    rels = [parse_word(r, ["a", "b"]) for r in ("a^4", "a^2 b^-2", "b^-1 a b a")]
    q8 = FiniteTableGroup.from_presentation(("a", "b"), rels, order_bound=16)
    table = character_table(q8)
    assert table.method == "numeric"
    assert table.dims == (1, 1, 1, 1, 2)
    sizes = np.array(table.class_sizes, dtype=float)
    gram = (table.table * sizes[None, :]) @ table.table.conj().T / q8.order
    assert np.allclose(gram, np.eye(5), atol=1e-8)
