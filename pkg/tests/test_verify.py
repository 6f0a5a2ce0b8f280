import json
import random

import pytest

from opetopic import verify
from opetopic.category import identity, source, word
from opetopic.opetopes import ARROW, count_candidates, enumerate_opetopes, polygon
from opetopic.verify import (
    MUTATIONS,
    CheckReport,
    ExplosionGuard,
    oracle_face_quotient,
    oracle_normalize,
    run_checks,
    selected_checks,
    summary_table,
)


def test_report_json_is_stable():
    r = CheckReport("faces", "x", True, {"b": 1, "a": 2}, 3.5)
    line = r.to_json()
    assert json.loads(line) == {"check": "faces", "instance": "x", "passed": True, "witness": {"a": 2, "b": 1}}
    assert "elapsed" not in line


def test_suite_selection():
    assert selected_checks(["trees"]) == ["trees", "leaves"]
    assert selected_checks(["faces"]) == ["faces"]
    # leaves are reported by the tree sweep itself
    assert set(selected_checks(None)) == set(verify.CHECKS) | {"leaves"}
    with pytest.raises(ValueError):
        selected_checks(["nonsense"])


def test_unknown_mutation():
    with pytest.raises(ValueError):
        run_checks(only=["faces"], mutate="nonsense")


def test_identity_then_face_has_one_normal_form():
    g = source(polygon(2), 1)
    forms, longest = oracle_normalize(word(identity(ARROW), g))
    assert forms == {(g,)} and longest == 1


def test_face_oracle_guard():
    big = max(enumerate_opetopes(4, 2, 2), key=lambda o: o.arity)
    with pytest.raises(ExplosionGuard):
        oracle_face_quotient(big, max_paths=10)


def test_candidate_count_matches_enumeration():
    for spec in [(2, 3, 3), (3, 2, 2), (3, 3, 3), (4, 2, 2), (4, 3, 2)]:
        assert count_candidates(*spec) == len(enumerate_opetopes(*spec))


def test_opetope_checks_pass():
    reports = run_checks(only=["opetopes", "face-vectors"])
    assert reports and all(r.passed for r in reports)
    assert "face-vectors" in summary_table(reports)


def test_runs_are_reproducible():
    a = [r.to_json() for r in run_checks(only=["projectivity", "generation"], seed=7)]
    b = [r.to_json() for r in run_checks(only=["projectivity", "generation"], seed=7)]
    assert a == b


@pytest.mark.parametrize("mutation", MUTATIONS)
def test_each_mutation_is_caught(mutation):
    reports = run_checks(only=["presheaf"], mutate=mutation)
    assert not all(r.passed for r in reports)


def test_random_shapes_are_deterministic():
    x = verify.random_oset(random.Random(1), 15).to_json()
    y = verify.random_oset(random.Random(1), 15).to_json()
    assert x == y
