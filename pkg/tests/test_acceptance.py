"""Acceptance suite: one PASS/FAIL line per criterion.

The full ``check`` command runs once up front; most criteria read its
JSON-lines report.  Criterion 10 runs it a second time and compares bytes.
Run directly (``python3 tests/test_acceptance.py``) or under pytest, where the
lines are repeated in the terminal summary.
"""

import contextlib
import io
import json
import sys
import tempfile
import time
from pathlib import Path

import pytest

from opetopic import verify
from opetopic.category import face_table
from opetopic.cli import main
from opetopic.opetopes import count_candidates, enumerate_opetopes, parse_code

RESULTS: list[str] = []

# pinned tolerances: every comparison below is exact
TREE_PORTS = 7
TREE_EXPECTED_SECONDS = 60
REWRITE_SECONDS = 300
MIN_DIAGRAMS = 50
MIN_MORPHISMS = 50
MAX_INDEX_OBJECTS = 3
MAX_ARROWS = 4
MAX_OBJECT_CELLS = 20
FACE_BOUNDS = (4, 4, 3)  # k <= 4, <= 4 nodes, arity <= 3
ENUMERATION_GUARD = 1_000_000
TWO_BINARY = "3[2[1:[1:.]]:[2[1:[1:.]]:.,.],.]"
TWO_BINARY_FACES = (1, 3, 5, 4)  # frozen after the quotient oracle produced it


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)


def _run_check(out: Path) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(["check", "--out", str(out)])
    return code, buf.getvalue()


def _seconds(table: str) -> dict[str, float]:
    rows = {}
    for line in table.splitlines()[1:]:
        name, _, _, secs = line.rsplit(None, 3)
        rows[name.strip()] = float(secs)
    return rows


class Run:
    def __init__(self, path: Path):
        self.path = path
        self.code, table = _run_check(path)
        self.seconds = _seconds(table)
        self.reports = [json.loads(x) for x in path.read_text().splitlines()]

    def of(self, check: str) -> list[dict]:
        return [r for r in self.reports if r["check"] == check]


@pytest.fixture(scope="module")
def first_run(tmp_path_factory):
    return Run(tmp_path_factory.mktemp("acceptance") / "first.jsonl")


def crit_tree_correspondence(run: Run) -> bool:
    (r,) = run.of("trees")
    w = r["witness"]
    secs = run.seconds["trees"]
    ok = r["passed"] and "profiles with <= 7 ports" in r["instance"]
    record(
        1,
        ok,
        f"{w.get('profiles')} profiles, {w.get('bijections')} bijections, {w.get('trees')} trees agree, "
        f"round trips exact; {secs:.0f}s (expected < {TREE_EXPECTED_SECONDS}s)",
    )
    return ok


def crit_leaf_formula(run: Run) -> bool:
    (r,) = run.of("leaves")
    ok = r["passed"]
    record(2, ok, f"every decoded tree has sum(m_i) - k + 1 leaves ({r['witness'].get('trees')} trees)")
    return ok


def crit_rewriting(run: Run) -> bool:
    rw, cg = run.of("rewriting"), run.of("congruence")
    secs = run.seconds["rewriting"] + run.seconds["congruence"]
    words = sum(r["witness"].get("words", 0) for r in rw)
    pairs = sum(r["witness"].get("pairs", 0) for r in cg)
    ok = bool(rw) and bool(cg) and all(r["passed"] for r in rw + cg) and secs < REWRITE_SECONDS
    record(
        3,
        ok,
        f"{words} one-gap words normalize uniquely within 2j+m; {pairs} parallel pairs agree "
        f"with the congruence oracle; {secs:.0f}s (< {REWRITE_SECONDS}s)",
    )
    return ok


def crit_distinct_faces() -> bool:
    max_dim, nodes, arity = FACE_BOUNDS
    checked, blocked = 0, []
    for k in range(1, max_dim + 1):
        size = count_candidates(k, nodes, arity)
        if size > ENUMERATION_GUARD:
            blocked.append(f"dim {k}: {size} opetopes exceed the guard of {ENUMERATION_GUARD}")
            continue
        for o in enumerate_opetopes(k, nodes, arity):
            if len(face_table(o).classes[k - 1]) != o.arity + 1:
                record(4, False, f"{o.code} has the wrong number of codimension-1 classes")
                return False
            checked += 1
    ok = not blocked
    record(4, ok, f"{checked} opetopes checked" + ("; " + "; ".join(blocked) if blocked else ""))
    return ok


def crit_face_vector() -> bool:
    expected = verify.oracle_face_counts(parse_code(TWO_BINARY))
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(["faces", TWO_BINARY, "--format", "json"])
    got = tuple(json.loads(buf.getvalue())["counts"])
    ok = code == 0 and got == expected == TWO_BINARY_FACES
    record(5, ok, f"CLI faces {got}, oracle {expected}")
    return ok


def crit_full_faithfulness(run: Run) -> bool:
    rs = run.of("full-faithfulness")
    pairs = sum(r["witness"].get("targets", 0) for r in rs)
    ok = bool(rs) and all(r["passed"] for r in rs)
    record(6, ok, f"{pairs} pairs of opetopes of dim <= 3: hom sets match cell for cell")
    return ok


def crit_projectivity(run: Run) -> bool:
    rs = run.of("projectivity")
    sizes_ok = all(
        r["witness"].get("objects", 0) <= MAX_INDEX_OBJECTS and r["witness"].get("arrows", 0) <= MAX_ARROWS
        for r in rs
        if r["passed"]
    )
    ok = len(rs) >= MIN_DIAGRAMS and all(r["passed"] for r in rs) and sizes_ok
    record(7, ok, f"{sum(r['passed'] for r in rs)}/{len(rs)} seeded diagrams: shape-wise cells match the set colimit")
    return ok


def crit_strong_generation(run: Run) -> bool:
    rs = run.of("generation")
    isos = sum(bool(r["witness"].get("isomorphism")) for r in rs)
    ok = len(rs) >= MIN_MORPHISMS and all(r["passed"] for r in rs)
    record(8, ok, f"{sum(r['passed'] for r in rs)}/{len(rs)} morphisms ({isos} isomorphisms)")
    return ok


def crit_colimits(run: Run) -> bool:
    cs, ms = run.of("colimits"), run.of("mutants")
    kinds = {r["instance"] for r in ms if r["passed"] and r["witness"].get("rejected", 0) > 0}
    ok = bool(cs) and all(r["passed"] for r in cs) and kinds == {
        "colim-skip-merge",
        "colim-extra-cell",
        "colim-wrong-frame",
    }
    record(9, ok, f"{sum(r['passed'] for r in cs)}/{len(cs)} colimits verified; mutants rejected: {sorted(kinds)}")
    return ok


def crit_determinism(run: Run) -> bool:
    second = run.path.with_name("second.jsonl")
    code, _ = _run_check(second)
    same = run.path.read_bytes() == second.read_bytes()
    ok = same and code == run.code
    record(10, ok, f"two full runs with seed {verify.BOUNDS['seed']}: reports {'identical' if same else 'differ'}")
    return ok


def test_criterion_01_tree_correspondence(first_run):
    assert crit_tree_correspondence(first_run)


def test_criterion_02_leaf_formula(first_run):
    assert crit_leaf_formula(first_run)


def test_criterion_03_rewriting(first_run):
    assert crit_rewriting(first_run)


def test_criterion_04_distinct_codimension_one_faces():
    assert crit_distinct_faces()


def test_criterion_05_face_vector():
    assert crit_face_vector()


def test_criterion_06_full_faithfulness(first_run):
    assert crit_full_faithfulness(first_run)


def test_criterion_07_small_projectivity(first_run):
    assert crit_projectivity(first_run)


def test_criterion_08_strong_generation(first_run):
    assert crit_strong_generation(first_run)


def test_criterion_09_colimit_universal_property(first_run):
    assert crit_colimits(first_run)


def test_criterion_10_determinism(first_run):
    assert crit_determinism(first_run)


if __name__ == "__main__":
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory() as d:
        run = Run(Path(d) / "first.jsonl")
        results = [
            crit_tree_correspondence(run),
            crit_leaf_formula(run),
            crit_rewriting(run),
            crit_distinct_faces(),
            crit_face_vector(),
            crit_full_faithfulness(run),
            crit_projectivity(run),
            crit_strong_generation(run),
            crit_colimits(run),
            crit_determinism(run),
        ]
    print(f"{sum(results)}/{len(results)} criteria pass ({time.perf_counter() - t0:.0f}s)")
    sys.exit(0 if all(results) else 1)
