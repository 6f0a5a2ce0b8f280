import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opetopic.category import face_table, hom
from opetopic.opetopes import ARROW, POINT, enumerate_opetopes, parse_code, polygon
from opetopic.osets import (
    Arrow,
    Colimit,
    Diagram,
    InvalidOSet,
    OpetopicSet,
    OSetMorphism,
    cells_of_shape,
    colimit,
    coproduct,
    enumerate_openings,
    fill,
    hom_oset,
    identity_morphism,
    induced_morphism,
    is_colimit,
    realize,
    realize_morphism,
    to_frames,
    to_niches,
    top_cell,
)
from opetopic.verify import (
    example_diagrams,
    mutant_extra_cell,
    mutant_wrong_frame,
    projectivity_witness,
    random_diagram,
    random_oset,
    random_oset_morphism,
    restrictions_bijective,
    shape_pool,
)

BINARY = polygon(2)
TWO_BINARY = parse_code("3[2[1:[1:.]]:[2[1:[1:.]]:.,.],.]")


def two_points():
    X = OpetopicSet()
    X.add_cell("p", POINT)
    X.add_cell("q", POINT)
    return X


def test_realized_cell_counts():
    assert realize(POINT).counts() == (1,)
    assert realize(ARROW).counts() == (2, 1)
    assert realize(BINARY).counts() == (3, 3, 1)
    assert realize(TWO_BINARY).counts() == (4, 5, 3, 1)


def test_realizations_validate():
    for o in enumerate_opetopes(3, 2, 2):
        X = realize(o)
        assert X.validate() == []
        assert X[top_cell(o)].shape == o.code


def test_validation_reports_problems():
    X = two_points()
    X.add_cell("f", ARROW, ("p", "q"))
    assert X.validate() == []
    with pytest.raises(InvalidOSet):
        X.add_cell("g", ARROW, ("p", "missing"))
    with pytest.raises(InvalidOSet):
        X.add_cell("h", BINARY, ("f", "f", "f"))


def test_json_round_trip():
    X = realize(TWO_BINARY)
    Y = OpetopicSet.from_json(X.to_json())
    assert Y.to_json() == X.to_json()
    assert Y.counts() == X.counts()


def test_point_cells_are_all_zero_cells():
    X = two_points()
    X.add_cell("f", ARROW, ("p", "q"))
    assert {c.id for c in cells_of_shape(POINT, X)} == {"p", "q"}
    assert len(hom_oset(realize(POINT), X)) == 2


def test_hom_point_to_arrow():
    assert len(hom_oset(realize(POINT), realize(ARROW))) == len(hom(POINT, ARROW)) == 2


def test_only_identity_endomorphism():
    for o in (ARROW, BINARY, TWO_BINARY):
        homs = hom_oset(realize(o), realize(o))
        assert len(homs) == 1
        assert homs[0].map == identity_morphism(realize(o)).map


def test_full_faithfulness_small():
    for a in [POINT, ARROW, BINARY, polygon(3)]:
        for b in [ARROW, BINARY, TWO_BINARY]:
            found = hom_oset(realize(a), realize(b))
            assert len(found) == len(hom(a, b))
            images = {realize_morphism(h).map[top_cell(a)] for h in hom(a, b)}
            assert images == {f.map[top_cell(a)] for f in found}


def test_yoneda_on_random_sets():
    rng = random.Random(5)
    for _ in range(10):
        X = random_oset(rng, max_cells=12)
        for o in (POINT, ARROW, BINARY):
            cells = cells_of_shape(o, X)
            assert len(hom_oset(realize(o), X)) == len(cells)
            for c in cells:
                assert induced_morphism(o, X, c.id).is_valid()


def test_hom_bound():
    with pytest.raises(ValueError, match="bound exceeded"):
        hom_oset(realize(TWO_BINARY), realize(TWO_BINARY), max_cells=5)


def test_example_colimits():
    ex = example_diagrams()
    assert colimit(ex["coproduct"]).apex.counts() == (2,)
    assert colimit(ex["pushout"]).apex.counts() == (3, 2)
    assert colimit(ex["coequalizer"]).apex.counts() == (1, 1)
    for D in ex.values():
        col = colimit(D)
        assert is_colimit(col.apex, col.coprojections, D)


def test_coequalizer_arrow_is_a_loop():
    col = colimit(example_diagrams()["coequalizer"])
    (f,) = col.apex.at(1)
    assert len(set(f.frame())) == 1


def test_coproduct_of_points():
    assert coproduct(realize(POINT), realize(POINT)).apex.counts() == (2,)


def test_mutants_are_not_colimits():
    for D in example_diagrams().values():
        col = colimit(D)
        assert not is_colimit(*_parts(mutant_extra_cell(col)), D)
        wrong = mutant_wrong_frame(col)
        if wrong is not None:
            assert not is_colimit(*_parts(wrong), D)
    D = example_diagrams()["pushout"]
    skipped = colimit(D, skip_merges=1)
    assert not is_colimit(skipped.apex, skipped.coprojections, D)


def test_non_commuting_cocone_rejected():
    D = example_diagrams()["pushout"]
    col = colimit(D)
    legs = list(col.coprojections)
    # send the shared vertex of one arm somewhere else
    Z = col.apex
    bad = dict(legs[0].map)
    (p,) = bad
    other = next(c.id for c in Z.at(0) if c.id != bad[p])
    legs[0] = OSetMorphism(legs[0].dom, Z, {p: other})
    assert not is_colimit(Z, legs, D)


def test_non_functorial_diagram_rejected():
    P, A = realize(POINT), realize(ARROW)
    (p,) = [c.id for c in P.ordered()]
    top = top_cell(ARROW)
    broken = OSetMorphism(P, A, {p: top})
    D = Diagram([P, A], [Arrow(0, 1, broken)])
    assert D.errors()
    with pytest.raises(InvalidOSet, match="non-functorial diagram"):
        colimit(D)


def test_diagram_json_round_trip():
    D = example_diagrams()["pushout"]
    E = Diagram.from_json(D.to_json())
    assert colimit(E).apex.counts() == colimit(D).apex.counts()


def test_one_openings():
    assert len(enumerate_openings(two_points(), 1)) == 1


def test_binary_openings_over_two_points():
    found = [p for p in enumerate_openings(two_points(), 2) if p.shape == BINARY.code]
    assert len(found) == 8
    assert all(p.kind() == "opening" for p in found)
    assert len(face_table(BINARY).classes[0]) == 3


def test_niches_frames_and_filling():
    X = two_points()
    X.add_cell("f", ARROW, ("p", "q"))
    X.add_cell("g", ARROW, ("q", "q"))
    X.add_cell("h", ARROW, ("p", "q"))
    openings = [p for p in enumerate_openings(X, 2) if p.shape == BINARY.code]
    niches = [n for o in openings for n in to_niches(o, X)]
    assert niches and all(n.kind() == "niche" for n in niches)
    for n in niches:
        frames = to_frames(n, X)
        # a target must run from the start of the composite to its end
        labels = n.as_dict()
        ends = (labels[(0, 2)], labels[(0, 0)])
        expected = [c.id for c in X.at(1) if c.frame() == ends]
        assert sorted(f.as_dict()[(1, 2)] for f in frames) == sorted(expected)
        for f in frames:
            assert f.kind() == "frame"
            Y = OpetopicSet(X.ordered())
            fill(Y, f, ("filler", f.labels))
            assert Y.validate() == []


def _parts(col: Colimit):
    return col.apex, col.coprojections


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_random_colimits(seed):
    rng = random.Random(seed)
    D = random_diagram(rng, max_cells=12)
    col = colimit(D)
    assert col.apex.validate() == []
    assert all(h.is_valid() for h in col.coprojections)
    assert projectivity_witness(D, col, shape_pool()) is None
    assert is_colimit(col.apex, col.coprojections, D)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_strong_generation(seed):
    F, kind = random_oset_morphism(random.Random(seed), max_cells=12)
    assert F.is_valid()
    if kind == "iso":
        assert F.is_isomorphism()
    assert F.is_isomorphism() == restrictions_bijective(F)
