import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opetopic.opetopes import (
    ARROW,
    POINT,
    Isomorphism,
    Opetope,
    PastingError,
    build,
    enumerate_opetopes,
    is_isomorphic,
    isomorphism,
    make_opetope,
    node,
    null,
    parse_code,
    polygon,
    random_presentation,
    render_text,
    short_label,
    to_dot,
    unit,
    with_node_order,
)
from opetopic.trees import ROOT, Wiring
from opetopic.verify import all_matchings, automorphism_count

BINARY = polygon(2)
TWO_BINARY = build(node(BINARY, node(BINARY), None))


def test_low_dimensions():
    assert make_opetope(0) is POINT
    assert make_opetope(1) is ARROW
    assert ARROW.sources == (POINT,)
    assert ARROW.target == POINT
    with pytest.raises(ValueError, match="no source"):
        POINT.sources
    with pytest.raises(ValueError, match="no target"):
        POINT.target


def test_two_opetopes_have_the_arrow_as_target():
    for m in range(4):
        assert polygon(m).target == ARROW
    assert BINARY.sources == (ARROW, ARROW)


def test_target_of_two_binary_nodes_is_ternary():
    assert TWO_BINARY.code == "3[2[1:[1:.]]:[2[1:[1:.]]:.,.],.]"
    assert TWO_BINARY.target.code == polygon(3).code


def test_null_target_is_unit():
    assert null(ARROW).target == unit(ARROW).canonical
    assert null(POINT).sources == ()
    assert null(POINT).code == "2|0"


def test_invalid_pasting():
    # the ternary output cannot feed a binary input
    with pytest.raises(PastingError, match="invalid pasting"):
        build(node(unit(BINARY), node(unit(polygon(3)))))


def test_loop_rejected():
    w = Wiring.from_dict((1,), {(1, 1): (1, 0), ROOT: (0, 1)})
    with pytest.raises(PastingError, match="not a tree"):
        make_opetope(2, w, [ARROW])


def test_swapped_node_order_is_isomorphic():
    swapped = with_node_order(BINARY, [2, 1])
    assert swapped != BINARY
    assert is_isomorphic(BINARY, swapped)
    iso = isomorphism(BINARY, swapped)
    assert iso.perm == (1, 0)
    assert all_matchings(BINARY, swapped)[0][0] == iso.perm


def test_not_isomorphic_across_arity():
    assert isomorphism(polygon(2), polygon(3)) is None
    with pytest.raises(ValueError):
        Isomorphism(polygon(2), polygon(3))


def test_enumeration_small_counts():
    assert [o.arity for o in enumerate_opetopes(2, 3, 3)] == [1, 2, 3, 0]
    assert enumerate_opetopes(1, 3, 3) == [ARROW]
    assert len(enumerate_opetopes(3, 2, 2)) == 13


def test_enumeration_is_sorted_and_canonical():
    found = enumerate_opetopes(3, 3, 2)
    codes = [o.code for o in found]
    assert codes == sorted(codes)
    assert len(set(codes)) == len(codes)
    assert all(parse_code(c) == o for c, o in zip(codes, found))


def test_codes_parse_back():
    for o in enumerate_opetopes(3, 3, 3) + enumerate_opetopes(4, 2, 2):
        assert parse_code(o.code).code == o.code
    with pytest.raises(ValueError):
        parse_code("2[1:")


def test_json_round_trip():
    rng = random.Random(3)
    for o in enumerate_opetopes(3, 3, 3)[:60]:
        p = random_presentation(o, rng)
        q = Opetope.from_json(p.to_json())
        assert q == p and q.code == o.code


def test_rendering():
    assert "2[1:[1:.]]" in render_text(BINARY)
    assert to_dot(TWO_BINARY).startswith("digraph")
    long = "x" * 40
    short = short_label(long)
    assert short.startswith("x" * 24) and short != long and len(short) < 40


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(enumerate_opetopes(3, 3, 3)), st.randoms(use_true_random=False))
def test_presentations_share_code_and_unique_matching(o, rnd):
    p, q = random_presentation(o, rnd), random_presentation(o, rnd)
    assert p.code == q.code == o.code
    assert p.target.code == o.target.code
    assert p.canonical == o.canonical
    found = all_matchings(p, q)
    assert len(found) == 1
    assert found[0][0] == Isomorphism(p, q).perm
    assert Isomorphism(p, q).then(Isomorphism(q, p)).is_identity


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(enumerate_opetopes(4, 2, 2)))
def test_no_nontrivial_automorphisms(o):
    assert automorphism_count(o) == 1
