import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opetopic.category import (
    IllTypedWord,
    MorphismWord,
    UnionFind,
    face_address,
    face_table,
    generators_of,
    hom,
    identity,
    iso,
    morphism_of,
    normalize,
    normalize_counted,
    restrict,
    slide,
    source,
    target,
    word,
    words_equal,
)
from opetopic.opetopes import (
    ARROW,
    POINT,
    build,
    enumerate_opetopes,
    node,
    null,
    parse_code,
    polygon,
    random_presentation,
    with_node_order,
)
from opetopic.verify import (
    WordCongruence,
    face_partitions_agree,
    oracle_face_counts,
    oracle_normalize,
    one_gap_words,
)

BINARY = polygon(2)
TWO_BINARY = parse_code("3[2[1:[1:.]]:[2[1:[1:.]]:.,.],.]")


def test_generators_of_the_arrow():
    gens = generators_of(ARROW)
    assert [g.kind for g in gens] == ["source", "target"]
    assert all(g.dom == POINT for g in gens)
    assert generators_of(POINT) == []


def test_face_counts_match_oracle():
    # expected vectors come from the brute-force quotient of all face words
    assert oracle_face_counts(ARROW) == (1, 2)
    assert oracle_face_counts(BINARY) == (1, 3, 3)
    assert oracle_face_counts(TWO_BINARY) == (1, 3, 5, 4)
    for o in (ARROW, BINARY, TWO_BINARY):
        assert face_table(o).counts() == oracle_face_counts(o)


def test_codimension_one_faces_are_distinct():
    for o in enumerate_opetopes(3, 3, 3):
        assert len(face_table(o).classes[o.dim - 1]) == o.arity + 1


def test_null_opetope_faces():
    assert face_table(null(ARROW)).counts() == (1, 1, 1, 2)


def test_face_table_json_layout():
    data = face_table(BINARY).to_json()
    assert set(data) == {"dim 2", "dim 1", "dim 0"}
    top = data["dim 2"][0]
    assert top["class"] == 0 and top["shape"] == BINARY.code
    assert set(top["boundary"]) == {"s1", "s2", "t"}


def test_identity_is_absorbed():
    g = source(BINARY, 1)
    assert normalize(word(identity(ARROW), g)) == word(g)


def test_slide_with_identity_keeps_index():
    for g in generators_of(BINARY):
        restricted, moved = slide(g, identity(BINARY))
        assert moved == g and restricted.is_identity


def test_slide_follows_the_permutation():
    swapped = with_node_order(BINARY, [2, 1])
    f, g = slide(source(BINARY, 1), iso(BINARY, swapped))
    assert g == source(swapped, 2)
    assert f == iso(ARROW, ARROW)
    assert restrict(iso(BINARY, swapped), source(BINARY, 1)) == f


def test_restrict_rejects_foreign_face():
    with pytest.raises(ValueError, match="incompatible"):
        restrict(iso(BINARY, BINARY), source(polygon(3), 1))


def test_ill_typed_word():
    with pytest.raises(IllTypedWord, match="ill-typed word"):
        word(source(BINARY, 1), source(polygon(3), 1))


def test_distinct_sources_are_different():
    assert not words_equal(word(source(BINARY, 1)), word(source(BINARY, 2)))


def test_words_equal_needs_parallel_words():
    with pytest.raises(ValueError, match="not parallel"):
        words_equal(word(source(BINARY, 1)), word(source(polygon(3), 1)))


def test_glued_vertex_is_shared():
    # node 2 feeds node 1, so the start of s1 is the end of s2
    w1 = word(source(ARROW, 1), source(BINARY, 1))
    w2 = word(target(ARROW), source(BINARY, 2))
    assert words_equal(w1, w2)
    assert not words_equal(w1, word(source(ARROW, 1), source(BINARY, 2)))
    congruence = WordCongruence(BINARY)
    assert congruence.equal(w1, w2)


def test_hom_counts():
    assert len(hom(BINARY, BINARY)) == 1
    assert len(hom(POINT, ARROW)) == 2
    assert len(hom(ARROW, TWO_BINARY)) == 5
    assert hom(TWO_BINARY, BINARY) == []
    assert hom(BINARY, polygon(3)) == []


def test_hom_words_land_on_their_address():
    for h in hom(POINT, TWO_BINARY):
        assert morphism_of(h.word()) == h


def test_word_json_round_trip():
    swapped = with_node_order(BINARY, [2, 1])
    w = word(source(ARROW, 1), source(BINARY, 2), iso(BINARY, swapped))
    data = w.to_json()
    assert all(set(r) >= {"kind", "index", "at"} for r in data)
    assert MorphismWord.from_json(data) == w


def test_union_find_least_representative():
    uf = UnionFind(range(5))
    uf.union(4, 2)
    uf.union(2, 3)
    assert uf.find(4) == 2
    assert sorted(map(sorted, uf.groups())) == [[0], [1], [2, 3, 4]]


def test_face_oracle_on_small_opetopes():
    for o in enumerate_opetopes(3, 2, 2) + enumerate_opetopes(2, 3, 3):
        assert face_partitions_agree(o)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(enumerate_opetopes(3, 3, 3)), st.integers(0, 1000))
def test_face_table_invariant_under_presentation(o, seed):
    p = random_presentation(o, random.Random(seed))
    assert face_table(p).counts() == face_table(o).counts()
    assert face_partitions_agree(p)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(enumerate_opetopes(3, 2, 2) + [BINARY]), st.integers(0, 1000))
def test_one_gap_words_normalize_uniquely(o, seed):
    rng = random.Random(seed)
    words = list(one_gap_words(o, 6, 2, rng))
    for w, j, m in rng.sample(words, min(15, len(words))):
        forms, longest = oracle_normalize(w)
        assert len(forms) == 1
        assert longest <= 2 * j + m
        assert next(iter(forms)) == normalize(w).steps
        nf, count = normalize_counted(w)
        assert count <= 2 * j + m
        isos = [g for g in nf.steps if not g.is_face]
        assert len(isos) <= 1 and (not isos or nf.steps[0] == isos[0])


def test_face_address_of_composite():
    t3 = TWO_BINARY
    w = word(target(BINARY), source(t3, 1))
    assert face_address(w)[0] == 1
    assert build(node(BINARY, node(BINARY), None)).code == t3.code
