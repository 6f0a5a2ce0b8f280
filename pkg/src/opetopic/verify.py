"""Brute-force oracles and the check runner.

Each oracle recomputes its answer from definitions, sharing only the core
value types with the optimized code it is compared against.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Optional, Sequence

import networkx as nx

from opetopic.opetopes import (
    ARROW,
    POINT,
    Isomorphism,
    Opetope,
    enumerate_opetopes,
    random_presentation,
)
from opetopic.trees import ROOT, Wiring, codomain_ports, domain_ports

# Published bounds.  The check runner uses exactly these unless overridden.
BOUNDS: dict[str, Any] = {
    "tree_ports": 7,
    "tree_relabelled": True,
    "word_length": 8,
    "congruence_word_length": 5,
    "presentations": 2,
    "rewrite_opetopes": [(1, 1, 1), (2, 4, 3), (3, 2, 2)],
    "face_opetopes": [(1, 1, 1), (2, 4, 3), (3, 4, 3), (4, 2, 3)],
    "oracle_face_opetopes": [(2, 4, 3), (3, 3, 3), (4, 2, 2)],
    "realize_opetopes": [(0, 0, 0), (1, 1, 1), (2, 3, 3), (3, 2, 2)],
    "diagrams": 50,
    "morphisms": 50,
    "max_cells": 60,
    "max_object_cells": 20,
    "max_diagram_objects": 4,
    "seed": 0,
}


class ExplosionGuard(RuntimeError):
    pass


# ------------------------------------------------------------ trees


def oracle_acyclic(w: Wiring) -> bool:
    """Build the node graph literally and test it for cycles by Kahn's traversal."""
    n = len(w.arities)
    succ: list[list[int]] = [[] for _ in range(n + 1)]
    indegree = [0] * (n + 1)
    for (i, _), (j, _) in w.map:
        # an edge from the producing node j into the consuming node i
        if i and j:
            succ[j].append(i)
            indegree[i] += 1
    ready = [v for v in range(1, n + 1) if not indegree[v]]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for u in succ[v]:
            indegree[u] -= 1
            if not indegree[u]:
                ready.append(u)
    return seen == n


def all_bijections(arities: Sequence[int]) -> Iterator[Wiring]:
    """Every bijection of the right shape on a profile, looped or not."""
    arities = tuple(arities)
    dom = domain_ports(arities)
    for image in itertools.permutations(codomain_ports(arities)):
        yield Wiring.trusted(arities, tuple(zip(dom, image)))


def tree_sweep(max_ports: int, relabelled: bool = True) -> dict[str, Any]:
    """Compare loop detection with the oracle on every bijection of every profile.

    Also checks both encode/decode round trips and the leaf count of every
    decoded tree.  With ``relabelled`` every ordering of each profile's node
    arities is swept; otherwise one profile per multiset of arities.  Returns
    counts and the first disagreement, if any.
    """
    from opetopic.trees import decode, encode, is_tree, iter_profiles, leaf_count

    mismatch = leaf_mismatch = None
    profiles = bijections = trees = 0
    for prof in iter_profiles(max_ports, sorted_only=not relabelled):
        profiles += 1
        leaves = leaf_count(prof)
        for w in all_bijections(prof):
            bijections += 1
            fast = is_tree(w)
            if fast != oracle_acyclic(w):
                mismatch = mismatch or {"wiring": w.to_json(), "is_tree": fast}
                continue
            if not fast:
                continue
            trees += 1
            t = decode(w)
            # with t = decode(w), encode(t) == w also gives decode(encode(t)) == t
            if encode(t) != w:
                mismatch = mismatch or {"wiring": w.to_json(), "round_trip": False}
            if t.leaf_count != leaves:
                leaf_mismatch = leaf_mismatch or {"wiring": w.to_json(), "leaves": t.leaf_count}
    return {
        "profiles": profiles,
        "bijections": bijections,
        "trees": trees,
        "mismatch": mismatch,
        "leaf_mismatch": leaf_mismatch,
    }


# ------------------------------------------------------------ isomorphisms


def all_matchings(a: Opetope, b: Opetope) -> list[tuple]:
    """Every structural matching ``a -> b``: a node bijection plus label matchings.

    A matching is a pair ``(sigma, subs)`` with ``sigma[i]`` the node of ``b``
    matched with node ``i`` of ``a`` (0-based) and ``subs[i]`` a matching of the
    labels.  Ports must correspond under the induced map, leaves included.
    """
    if a.dim != b.dim:
        return []
    if a.dim <= 1:
        return [((0,) if a.dim else (), ())]
    if a.arity != b.arity or a.wiring.leaf_count != b.wiring.leaf_count:
        return []
    n = a.arity
    out = []
    fa, fb = a.wiring.as_dict(), b.wiring.as_dict()
    for sigma in itertools.permutations(range(n)):
        options = [all_matchings(a.nodes[i], b.nodes[sigma[i]]) for i in range(n)]
        if any(not opts for opts in options):
            continue
        for subs in itertools.product(*options):
            if _respects(a, b, fa, fb, sigma, subs):
                out.append((sigma, subs))
    return out


def _respects(a, b, fa, fb, sigma, subs) -> bool:
    def port(p):
        i, s = p
        if i == 0:
            return None if s else ROOT
        if s == 0:
            return (sigma[i - 1] + 1, 0)
        return (sigma[i - 1] + 1, subs[i - 1][0][s - 1] + 1)

    leaves: dict[int, int] = {}
    for y, x in fa.items():
        y2 = port(y)
        x_img = fb[y2]
        if x[0] == 0:
            if x_img[0] != 0:
                return False
            if leaves.setdefault(x[1], x_img[1]) != x_img[1]:
                return False
        elif port(x) != x_img:
            return False
        if a.edge(y).code != b.edge(y2).code:
            return False
    return len(set(leaves.values())) == len(leaves)


def automorphism_count(a: Opetope) -> int:
    return len(all_matchings(a, a))


# ------------------------------------------------------------ face quotient


def _face_steps(obj: Opetope) -> list[tuple[int, Opetope]]:
    """(position, face) for every face generator into ``obj``."""
    if obj.dim == 0:
        return []
    return list(enumerate(obj.sources)) + [(obj.arity, obj.target)]


def _transport(path: Sequence[int], iso: Isomorphism) -> tuple[int, ...]:
    """Re-express a path into ``iso.dom`` as a path into ``iso.cod``."""
    out = []
    for p in path:
        if p == iso.dom.arity:
            out.append(iso.cod.arity)
            iso = iso.target()
        else:
            out.append(iso.perm[p])
            iso = iso.source(p)
    return tuple(out)


def all_paths(a: Opetope) -> dict[tuple[int, ...], Opetope]:
    """Every composable chain of face generators into ``a``, keyed by positions."""
    out = {(): a}
    frontier = [((), a)]
    while frontier:
        nxt = []
        for path, obj in frontier:
            for p, face in _face_steps(obj):
                out[path + (p,)] = face
                nxt.append((path + (p,), face))
        frontier = nxt
    return out


def _relations_at(obj: Opetope) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Two-step identifications inside ``obj`` where composition occurs.

    Returns pairs of two-generator paths (read from ``obj`` downwards) whose
    endpoints are isomorphic and must be identified.
    """
    if obj.dim < 2:
        return []
    rels = []
    t = obj.arity
    tt = obj.target.arity  # position of t inside the target face
    for (i, b), (j, c) in obj.wiring.map:
        if i == 0:
            left = (t, tt)
        else:
            left = (i - 1, b - 1)
        if j == 0:
            right = (t, c - 1)
        else:
            right = (j - 1, obj.nodes[j - 1].arity)
        rels.append((left, right))
    return rels


def oracle_face_quotient(a: Opetope, max_paths: int = 20000) -> dict[int, list[list[tuple]]]:
    """Partition of all face chains into ``a`` by dimension of their domain.

    Seeds every two-step identification at every intermediate face, extended
    by every continuation (transported through the matching isomorphism), then
    closes under equivalence.
    """
    paths = all_paths(a)
    if len(paths) > max_paths:
        raise ExplosionGuard(f"explosion guard: {len(paths)} face chains")
    g = nx.Graph()
    g.add_nodes_from(paths)
    for prefix, obj in paths.items():
        for u, v in _relations_at(obj):
            pu, pv = prefix + u, prefix + v
            iso = Isomorphism(paths[pu], paths[pv])
            for rest, _ in all_paths(paths[pu]).items():
                g.add_edge(pu + rest, pv + _transport(rest, iso))
    out: dict[int, list[list[tuple]]] = {}
    for comp in nx.connected_components(g):
        comp = sorted(comp)
        out.setdefault(paths[comp[0]].dim, []).append(comp)
    for m in out:
        out[m].sort()
    return out


def oracle_face_counts(a: Opetope) -> tuple[int, ...]:
    q = oracle_face_quotient(a)
    return tuple(len(q.get(m, [])) for m in range(a.dim, -1, -1))


def oracle_word_path(word) -> tuple[int, ...]:
    """Face chain into ``word.cod`` denoted by a generator word.

    Isomorphisms are pushed to the right by restricting them to faces.
    """
    path: list[int] = []
    pending: Optional[Isomorphism] = None  # from the current object to the actual one
    for g in reversed(word.steps):
        if g.kind == "iso":
            step = Isomorphism(g.dom, g.cod)
            pending = step if pending is None else Isomorphism(step.dom, pending.cod)
            continue
        p = g.position
        if pending is None:
            path.append(p)
            continue
        if p == g.cod.arity:
            path.append(pending.cod.arity)
            pending = pending.target()
        else:
            path.append(pending.perm[p])
            pending = pending.source(p)
    return tuple(path)


class WordCongruence:
    """Congruence-closure equality of words into a fixed opetope."""

    def __init__(self, a: Opetope):
        self.a = a
        self.index = {}
        for m, classes in oracle_face_quotient(a).items():
            for c, comp in enumerate(classes):
                for path in comp:
                    self.index[path] = (m, c)

    def class_of(self, word) -> tuple[int, int]:
        return self.index[oracle_word_path(word)]

    def equal(self, w1, w2) -> bool:
        return self.class_of(w1) == self.class_of(w2)


# ------------------------------------------------------------ rewriting


def _redexes(steps: tuple) -> list[tuple]:
    """Every single-step rewrite of a word, at every position."""
    from opetopic.category import iso, slide

    out = []
    for i in range(len(steps) - 1):
        a, b = steps[i], steps[i + 1]
        if a.is_face and b.kind == "iso":
            out.append(steps[:i] + slide(a, b) + steps[i + 2 :])
        elif a.kind == "iso" and b.kind == "iso":
            out.append(steps[:i] + (iso(a.dom, b.cod),) + steps[i + 2 :])
        elif a.is_identity and b.is_face:
            out.append(steps[:i] + steps[i + 1 :])
    return out


def oracle_normalize(word, max_states: int = 200000) -> tuple[set, int]:
    """All normal forms reachable in any order, and the longest reduction."""
    start = tuple(word.steps)
    succ: dict = {}
    longest: dict = {}
    normal = set()
    stack = [start]
    while stack:
        s = stack[-1]
        if s not in succ:
            if len(succ) >= max_states:
                raise ExplosionGuard("explosion guard: too many rewrite states")
            succ[s] = _redexes(s)
            if not succ[s]:
                normal.add(s)
        pending = [t for t in succ[s] if t not in longest]
        if pending:
            # rewriting strictly decreases a potential, so this never revisits s
            stack.extend(pending)
            continue
        stack.pop()
        longest[s] = 1 + max((longest[t] for t in succ[s]), default=-1)
    return normal, longest[start]


# ------------------------------------------------------------ reports


@dataclass
class CheckReport:
    check: str
    instance: str
    passed: bool
    witness: Any = None
    elapsed: float = field(default=0.0, compare=False)

    def to_json(self) -> str:
        # elapsed time is left out so reports are reproducible byte for byte
        return json.dumps(
            {
                "check": self.check,
                "instance": self.instance,
                "passed": self.passed,
                "witness": self.witness,
            },
            sort_keys=True,
        )


def timed(name: str, instance: str, fn: Callable[[], tuple[bool, Any]]) -> CheckReport:
    t0 = time.perf_counter()
    try:
        ok, witness = fn()
    except ExplosionGuard as e:
        ok, witness = False, str(e)
    return CheckReport(name, instance, bool(ok), witness, time.perf_counter() - t0)


def opetopes_within(specs: Iterable[tuple[int, int, int]]) -> list[Opetope]:
    out = []
    for dim, nodes, arity in specs:
        if dim == 0:
            out.append(POINT)
        elif dim == 1:
            out.append(ARROW)
        else:
            out.extend(enumerate_opetopes(dim, nodes, arity))
    return out


# ------------------------------------------------------------ word supply


def presentation_pool(a: Opetope, size: int, rng: random.Random) -> list[Opetope]:
    """``a`` (canonical) plus up to ``size - 1`` distinct shuffled presentations."""
    pool = [a.canonical]
    for _ in range(8 * size):
        if len(pool) >= size:
            break
        p = random_presentation(a, rng)
        if all(p != q for q in pool):
            pool.append(p)
    return pool


def one_gap_words(a: Opetope, max_steps: int, pool_size: int, rng: random.Random):
    """Words ``f_1..f_m ; gamma ; g_1..g_j`` with ``j + m <= max_steps`` into ``a``.

    For every presentation of ``a`` in the pool, every face generator and every
    split ``(j, m)``, one word whose intermediate presentations are drawn from
    the pools.  Yields ``(word, j, m)``.
    """
    from opetopic.category import MorphismWord, generators_of, iso

    pools = {a.code: presentation_pool(a, pool_size, rng)}
    seen = set()
    for a0 in pools[a.code]:
        for gamma in generators_of(a0):
            x = gamma.dom
            xpool = pools.setdefault(x.code, presentation_pool(x, pool_size, rng))
            for total in range(max_steps + 1):
                for j in range(total + 1):
                    m = total - j
                    xs = [rng.choice(xpool) for _ in range(m)] + [x]
                    ys = [a0] + [rng.choice(pools[a.code]) for _ in range(j)]
                    steps = [iso(xs[i], xs[i + 1]) for i in range(m)]
                    steps.append(gamma)
                    steps += [iso(ys[i], ys[i + 1]) for i in range(j)]
                    w = MorphismWord(tuple(steps))
                    if w.steps not in seen:
                        seen.add(w.steps)
                        yield w, j, m


def words_upto(a: Opetope, max_length: int, pool_size: int, rng: random.Random):
    """Every composable word of length ``<= max_length`` ending at ``a``.

    Objects range over the presentation pools; generators are face maps and
    isomorphisms between pooled presentations.  Yields words grouped by length.
    """
    from opetopic.category import MorphismWord, generators_of, iso

    pools: dict[str, list[Opetope]] = {}

    def pool(o):
        if o.code not in pools:
            pools[o.code] = presentation_pool(o, pool_size, rng)
        return pools[o.code]

    def into(o):
        gens = []
        for p in pool(o):
            gens.append(iso(p, o))
        for g in generators_of(o):
            gens.append(g)
        return gens

    layer = [(g,) for g in into(a)]
    out = []
    for _ in range(max_length):
        out.extend(MorphismWord(w) for w in layer)
        layer = [(g,) + w for w in layer for g in into(w[0].dom)]
    return out


def parallel_pairs(words) -> Iterator[tuple]:
    groups: dict = {}
    for w in words:
        groups.setdefault((w.dom.dim, w.dom), []).append(w)
    for ws in groups.values():
        for i in range(len(ws)):
            for k in range(i + 1, len(ws)):
                yield ws[i], ws[k]


# ------------------------------------------------------------ random opetopic sets


def shape_pool() -> list[Opetope]:
    from opetopic.opetopes import polygon

    threes = enumerate_opetopes(3, 2, 2)
    return [ARROW, polygon(0), polygon(1), polygon(2), polygon(3)] + threes[:6]


def random_oset(
    rng: random.Random,
    max_cells: int = 20,
    base=None,
    prefix: str = "c",
    shapes: Optional[Sequence[Opetope]] = None,
):
    """A random opetopic set, optionally grown on top of ``base``."""
    from opetopic.osets import OpetopicSet, fill, random_frame

    shapes = list(shapes or shape_pool())
    X = OpetopicSet(base.ordered() if base is not None else ())
    size = rng.randint(max(len(X), 1), max(max_cells, len(X), 1))
    fresh = (f"{prefix}{n}" for n in itertools.count())
    for _ in range(rng.randint(1, 3)):
        if len(X) < size:
            X.add_cell(next(fresh), POINT)
    for _ in range(6 * size):
        if len(X) >= size:
            break
        if rng.random() < 0.15:
            X.add_cell(next(fresh), POINT)
            continue
        frame = random_frame(X, rng.choice(shapes), rng)
        if frame is not None:
            fill(X, frame, next(fresh))
    return X


def random_subset(X, rng: random.Random):
    """A random sub-opetopic set: a face-closed set of cells."""
    keep = set()
    for c in X.ordered():
        if rng.random() < 0.6 and all(y in keep for y in c.boundary.values()):
            keep.add(c.id)
    return X.restrict(keep)


def random_morphism_into(X, Y, rng: random.Random):
    """Some morphism ``X -> Y`` found by shuffled search, or None."""
    from opetopic.osets import iter_homs

    def order(pool):
        pool = list(pool)
        rng.shuffle(pool)
        return pool

    for h in iter_homs(X, Y, limit=1, order=order):
        return h
    return None


def random_diagram(rng: random.Random, max_cells: int = 20):
    """A span, possibly with an extra parallel arrow, gluing random sets.

    At most 3 objects and 4 arrows; every object has at most ``max_cells`` cells.
    """
    from opetopic.osets import Arrow, Diagram, OSetMorphism

    A = random_oset(rng, max_cells, prefix="a")
    C = random_subset(A, rng)
    if len(C) == 0:
        C = A.restrict([A.at(0)[0].id])
    ren = {c.id: f"b{n}" for n, c in enumerate(C.ordered())}
    B = random_oset(rng, max_cells, base=C.relabel(ren), prefix="n")
    objects = [C, A, B]
    arrows = [
        Arrow(0, 1, OSetMorphism(C, A, {x: x for x in C.cells})),
        Arrow(0, 2, OSetMorphism(C, B, dict(ren))),
    ]
    for src, dst in [(0, 1), (0, 2)]:
        if len(arrows) < 4 and rng.random() < 0.5:
            h = random_morphism_into(objects[src], objects[dst], rng)
            if h is not None:
                arrows.append(Arrow(src, dst, h))
    if rng.random() < 0.3:
        # drop the second leg: a coequalizer-like or plain inclusion diagram
        objects = objects[:2]
        arrows = [u for u in arrows if u.dst < 2]
    return Diagram(objects, arrows)


def random_oset_morphism(rng: random.Random, max_cells: int = 20):
    """Isomorphisms, inclusions, quotients and random maps, in equal measure."""
    from opetopic.osets import OSetMorphism, colimit, Diagram, Arrow

    X = random_oset(rng, max_cells)
    kind = rng.choice(["iso", "inclusion", "quotient", "random"])
    if kind == "iso":
        ids = [c.id for c in X.ordered()]
        perm = ids[:]
        rng.shuffle(perm)
        ren = {x: f"r{n}" for n, x in enumerate(perm)}
        return OSetMorphism(X, X.relabel(ren), ren), kind
    if kind == "inclusion":
        S = random_subset(X, rng)
        return OSetMorphism(S, X, {x: x for x in S.cells}), kind
    if kind == "quotient":
        h = random_morphism_into(X, X, rng)
        D = Diagram([X, X], [Arrow(0, 1, OSetMorphism(X, X, {x: x for x in X.cells})), Arrow(0, 1, h)])
        col = colimit(D)
        return col.coprojections[1], kind
    # grow a target around a copy of X so that some morphism exists
    ren = {c.id: f"y{n}" for n, c in enumerate(X.ordered())}
    Y = random_oset(rng, max_cells, base=X.relabel(ren), prefix="z")
    return random_morphism_into(X, Y, rng), kind


# ------------------------------------------------------------ presheaf oracles


def oracle_set_colimit(D, shape: str) -> tuple[list[frozenset], dict]:
    """Classes of cells of one shape in the set-level colimit of the diagram."""
    g = nx.Graph()
    for i, X in enumerate(D.objects):
        g.add_nodes_from((i, c.id) for c in X.ordered() if c.shape == shape)
    for u in D.arrows:
        for x, y in u.map.map.items():
            if D.objects[u.src][x].shape == shape:
                g.add_edge((u.src, x), (u.dst, y))
    comps = [frozenset(c) for c in nx.connected_components(g)]
    where = {e: comp for comp in comps for e in comp}
    return comps, where


def projectivity_witness(D, col, shapes: Iterable[str]) -> Optional[dict]:
    """None if each shape's cells of the colimit match the set-colimit exactly."""
    for shape in shapes:
        comps, where = oracle_set_colimit(D, shape)
        image: dict = {}
        for comp in comps:
            targets = {col.coprojections[i].map[x] for i, x in comp}
            if len(targets) != 1:
                return {"shape": shape, "class": sorted(map(str, comp)), "images": sorted(map(str, targets))}
            image[comp] = targets.pop()
        cells = [c.id for c in col.apex.ordered() if c.shape == shape]
        if sorted(map(str, image.values())) != sorted(map(str, cells)):
            return {"shape": shape, "expected": len(comps), "found": len(cells)}
    return None


def restrictions_bijective(F) -> bool:
    shapes = set(F.dom.shapes()) | set(F.cod.shapes())
    for shape in shapes:
        part = F.restricted(shape)
        image = set(part.values())
        targets = {c.id for c in F.cod.ordered() if c.shape == shape}
        if len(image) != len(part) or image != targets:
            return False
    return True


# ------------------------------------------------------------ mutants


def mutant_extra_cell(col):
    from opetopic.osets import Colimit, OpetopicSet, OSetMorphism

    Z = OpetopicSet(col.apex.ordered())
    Z.add_cell(("extra", 0), POINT)
    legs = [OSetMorphism(h.dom, Z, dict(h.map)) for h in col.coprojections]
    return Colimit(Z, legs)


def mutant_wrong_frame(col):
    """Move one boundary entry of the first cell that has one to another cell."""
    from opetopic.osets import Cell, Colimit, OpetopicSet, OSetMorphism

    cells = col.apex.ordered()
    for c in cells:
        for addr, y in c.boundary.items():
            other = [
                d.id for d in cells if d.dim == col.apex[y].dim and d.shape == col.apex[y].shape and d.id != y
            ]
            if other:
                bd = dict(c.boundary)
                bd[addr] = other[0]
                Z = OpetopicSet(d if d.id != c.id else Cell(c.id, c.dim, c.shape, bd) for d in cells)
                legs = [OSetMorphism(h.dom, Z, dict(h.map)) for h in col.coprojections]
                return Colimit(Z, legs)
    return None


def example_diagrams() -> dict[str, Any]:
    """The named small diagrams: a coproduct, a pushout and a coequalizer."""
    from opetopic.category import hom
    from opetopic.osets import Arrow, Diagram, OSetMorphism, realize, realize_morphism

    s, t = hom(POINT, ARROW)
    P1, P2 = realize(POINT), realize(POINT)
    coproduct = Diagram([P1, P2])
    P, A1, A2 = realize(POINT), realize(ARROW), realize(ARROW)
    pushout = Diagram(
        [P, A1, A2],
        [
            Arrow(0, 1, OSetMorphism(P, A1, realize_morphism(t).map)),
            Arrow(0, 2, OSetMorphism(P, A2, realize_morphism(s).map)),
        ],
    )
    P, A = realize(POINT), realize(ARROW)
    coequalizer = Diagram(
        [P, A],
        [
            Arrow(0, 1, OSetMorphism(P, A, realize_morphism(s).map)),
            Arrow(0, 1, OSetMorphism(P, A, realize_morphism(t).map)),
        ],
    )
    return {"coproduct": coproduct, "pushout": pushout, "coequalizer": coequalizer}


# ------------------------------------------------------------ check runner

SUITES: dict[str, list[str]] = {
    "trees": ["trees", "leaves"],
    "opetopes": ["isomorphisms", "targets"],
    "category": ["rewriting", "congruence", "faces", "face-oracle", "face-vectors"],
    "presheaf": ["full-faithfulness", "yoneda", "projectivity", "generation", "colimits", "mutants"],
}

MUTATIONS = ("colim-skip-merge", "colim-extra-cell", "colim-wrong-frame", "non-frame-map")

# face vectors of named opetopes, top dimension first
NAMED_OPETOPES = {
    "arrow": "1",
    "binary 2-opetope": "2[1:[1:.]]",
    "two-binary-node 3-opetope": "3[2[1:[1:.]]:[2[1:[1:.]]:.,.],.]",
}


def _rng(seed: int, *tags) -> random.Random:
    return random.Random(":".join(map(str, (seed,) + tags)))


def _bound_name(spec) -> str:
    dim, nodes, arity = spec
    return f"dim {dim}, <= {nodes} nodes, arity <= {arity}"


def check_trees(b, seed, mutate) -> list[CheckReport]:
    t0 = time.perf_counter()
    stats = tree_sweep(b["tree_ports"], b["tree_relabelled"])
    dt = time.perf_counter() - t0
    inst = f"profiles with <= {b['tree_ports']} ports" + (" (all node orders)" if b["tree_relabelled"] else "")
    counts = {k: stats[k] for k in ("profiles", "bijections", "trees")}
    return [
        CheckReport("trees", inst, stats["mismatch"] is None, stats["mismatch"] or counts, dt),
        CheckReport("leaves", inst, stats["leaf_mismatch"] is None, stats["leaf_mismatch"] or counts, 0.0),
    ]


def check_isomorphisms(b, seed, mutate) -> list[CheckReport]:
    out = []
    for spec in b["oracle_face_opetopes"]:
        rng = _rng(seed, "iso", *spec)

        def run():
            n = 0
            for o in enumerate_opetopes(*spec):
                if automorphism_count(o) != 1:
                    return False, {"automorphisms": o.code}
                p, q = random_presentation(o, rng), random_presentation(o, rng)
                found = all_matchings(p, q)
                if len(found) != 1 or found[0][0] != Isomorphism(p, q).perm:
                    return False, {"opetope": o.code, "matchings": len(found)}
                n += 1
            return True, {"opetopes": n}

        out.append(timed("isomorphisms", _bound_name(spec), run))
    return out


def check_targets(b, seed, mutate) -> list[CheckReport]:
    out = []
    for spec in b["face_opetopes"]:
        if spec[0] < 3:
            continue

        def run():
            n = 0
            for o in enumerate_opetopes(*spec):
                t = o.target
                if t.dim != o.dim - 1:
                    return False, {"opetope": o.code, "target_dim": t.dim}
                x, steps = o, 0
                while x.dim:
                    x, steps = x.target, steps + 1
                if steps != o.dim:
                    return False, {"opetope": o.code, "steps": steps}
                if not o.is_null:
                    expected = sum(x.arity for x in o.nodes) - (o.arity - 1)
                    if t.arity != expected:
                        return False, {"opetope": o.code, "arity": t.arity, "expected": expected}
                n += 1
            return True, {"opetopes": n}

        out.append(timed("targets", _bound_name(spec), run))
    return out


def check_rewriting(b, seed, mutate) -> list[CheckReport]:
    from opetopic.category import normalize

    out = []
    for a in opetopes_within(b["rewrite_opetopes"]):
        rng = _rng(seed, "rewrite", a.code)

        def run():
            n, tightest = 0, 0
            for w, j, m in one_gap_words(a, b["word_length"], b["presentations"], rng):
                forms, longest = oracle_normalize(w)
                if len(forms) != 1 or longest > 2 * j + m:
                    return False, {"word": repr(w.steps), "normal_forms": len(forms), "steps": longest, "bound": 2 * j + m}
                if next(iter(forms)) != normalize(w).steps:
                    return False, {"word": repr(w.steps), "normalize": "disagrees"}
                n += 1
                tightest = max(tightest, longest - (2 * j + m))
            return True, {"words": n, "slack": -tightest}

        out.append(timed("rewriting", a.code, run))
    return out


def check_congruence(b, seed, mutate) -> list[CheckReport]:
    from opetopic.category import words_equal

    out = []
    for a in opetopes_within(b["rewrite_opetopes"]):
        rng = _rng(seed, "congruence", a.code)

        def run():
            words = words_upto(a, b["congruence_word_length"], b["presentations"], rng)
            oracle = WordCongruence(a)
            cls = {w: oracle.class_of(w) for w in words}
            pairs = 0
            for w1, w2 in parallel_pairs(words):
                pairs += 1
                if words_equal(w1, w2) != (cls[w1] == cls[w2]):
                    return False, {"left": repr(w1.steps), "right": repr(w2.steps)}
            return True, {"words": len(words), "pairs": pairs}

        out.append(timed("congruence", a.code, run))
    return out


def check_faces(b, seed, mutate) -> list[CheckReport]:
    from opetopic.category import face_table

    out = []
    for spec in b["face_opetopes"]:

        def run():
            n = 0
            for o in enumerate_opetopes(*spec) if spec[0] > 1 else [ARROW]:
                got = len(face_table(o).classes[o.dim - 1])
                if got != o.arity + 1:
                    return False, {"opetope": o.code, "classes": got, "nodes": o.arity}
                n += 1
            return True, {"opetopes": n}

        out.append(timed("faces", _bound_name(spec), run))
    return out


def face_partitions_agree(o: Opetope) -> bool:
    from opetopic.category import face_table

    table = face_table(o)
    to_canon = Isomorphism(o, o.canonical)
    for m, classes in oracle_face_quotient(o).items():
        addrs = [{table.address(_transport(p, to_canon)) for p in comp} for comp in classes]
        if any(len(s) != 1 for s in addrs):
            return False
        if len({next(iter(s)) for s in addrs}) != len(table.classes[m]):
            return False
    return True


def check_face_oracle(b, seed, mutate) -> list[CheckReport]:
    out = []
    for spec in b["oracle_face_opetopes"]:

        def run():
            n = 0
            for o in enumerate_opetopes(*spec):
                if not face_partitions_agree(o):
                    return False, {"opetope": o.code}
                n += 1
            return True, {"opetopes": n}

        out.append(timed("face-oracle", _bound_name(spec), run))
    return out


def check_face_vectors(b, seed, mutate) -> list[CheckReport]:
    from opetopic.category import face_table
    from opetopic.opetopes import parse_code

    out = []
    for name, code in NAMED_OPETOPES.items():
        o = parse_code(code)

        def run():
            expected = oracle_face_counts(o)
            got = face_table(o).counts()
            return got == expected, {"oracle": list(expected), "face_table": list(got)}

        out.append(timed("face-vectors", name, run))
    return out


def check_full_faithfulness(b, seed, mutate) -> list[CheckReport]:
    from opetopic.category import hom
    from opetopic.osets import hom_oset, id_key, realize, realize_morphism

    shapes = opetopes_within(b["realize_opetopes"])
    out = []
    for a in shapes:

        def run():
            pairs = 0
            for c in shapes:
                homs = hom(a, c)
                images = sorted(sorted(realize_morphism(h).map.items(), key=lambda p: id_key(p[0])) for h in homs)
                found = sorted(
                    sorted(h.map.items(), key=lambda p: id_key(p[0])) for h in hom_oset(realize(a), realize(c))
                )
                if images != found:
                    return False, {"to": c.code, "hom": len(homs), "hom_oset": len(found)}
                pairs += 1
            return True, {"targets": pairs}

        out.append(timed("full-faithfulness", a.code, run))
    return out


def _test_sets(b, seed) -> list:
    from opetopic.osets import realize

    sets = [realize(a) for a in opetopes_within(b["realize_opetopes"])[:6]]
    for n in range(10):
        sets.append(random_oset(_rng(seed, "yoneda", n), b["max_object_cells"]))
    return sets


def check_yoneda(b, seed, mutate) -> list[CheckReport]:
    from opetopic.osets import cells_of_shape, hom_oset, induced_morphism, realize

    shapes = opetopes_within(b["realize_opetopes"]) + shape_pool()
    sets = _test_sets(b, seed)
    out = []
    for n, X in enumerate(sets):

        def run():
            for a in shapes:
                homs = hom_oset(realize(a), X, b["max_cells"])
                cells = cells_of_shape(a, X)
                if len(homs) != len(cells):
                    return False, {"shape": a.code, "homs": len(homs), "cells": len(cells)}
                induced = sorted(sorted(map(str, induced_morphism(a, X, c.id).map.items())) for c in cells)
                if induced != sorted(sorted(map(str, h.map.items())) for h in homs):
                    return False, {"shape": a.code, "induced": "differs"}
            return True, {"shapes": len(shapes), "cells": len(X)}

        out.append(timed("yoneda", f"test set {n}", run))
    return out


def _colimit_for(D, mutate):
    from opetopic.osets import colimit

    if mutate == "colim-skip-merge":
        return colimit(D, skip_merges=1)
    col = colimit(D)
    if mutate == "colim-extra-cell":
        return mutant_extra_cell(col)
    if mutate == "colim-wrong-frame":
        return mutant_wrong_frame(col) or col
    return col


def check_projectivity(b, seed, mutate) -> list[CheckReport]:
    shapes = [a.code for a in opetopes_within(b["realize_opetopes"]) + shape_pool()]
    out = []
    for n in range(b["diagrams"]):

        def run():
            D = _guarded_diagram(b, seed, n)
            col = _colimit_for(D, mutate)
            witness = projectivity_witness(D, col, sorted(set(shapes)))
            if witness is not None:
                return False, witness
            return True, {"objects": len(D.objects), "arrows": len(D.arrows), "cells": len(col.apex)}

        out.append(timed("projectivity", f"diagram {n}", run))
    return out


def corrupt_frame(F):
    """Redirect one cell with faces to another cell of its shape, if possible."""
    from opetopic.osets import OSetMorphism

    for c in F.dom.ordered():
        if not c.boundary:
            continue
        for d in F.cod.ordered():
            if d.shape == c.shape and d.id != F.map[c.id]:
                mapping = dict(F.map)
                mapping[c.id] = d.id
                G = OSetMorphism(F.dom, F.cod, mapping)
                if not G.is_valid():
                    return G
    return None


def check_generation(b, seed, mutate) -> list[CheckReport]:
    out = []
    for n in range(b["morphisms"]):

        def run():
            F, kind = random_oset_morphism(_rng(seed, "morphism", n), b["max_object_cells"])
            if mutate == "non-frame-map":
                F = corrupt_frame(F) or F
            errors = F.errors()
            if errors:
                return False, {"kind": kind, "invalid": errors[0]}
            iso, restricted = F.is_isomorphism(), restrictions_bijective(F)
            return iso == restricted, {"kind": kind, "isomorphism": iso, "restrictions_bijective": restricted}

        out.append(timed("generation", f"morphism {n}", run))
    return out


def _diagram_supply(b, seed):
    yield from example_diagrams().items()
    for n in range(b["diagrams"]):
        yield f"diagram {n}", _guarded_diagram(b, seed, n)


def _guarded_diagram(b, seed, n):
    D = random_diagram(_rng(seed, "diagram", n), b["max_object_cells"])
    if len(D.objects) > b["max_diagram_objects"]:
        raise ExplosionGuard(f"explosion guard: diagram with {len(D.objects)} objects")
    return D


def check_colimits(b, seed, mutate) -> list[CheckReport]:
    from opetopic.osets import is_colimit

    out = []
    for name, D in _diagram_supply(b, seed):

        def run():
            col = _colimit_for(D, mutate)
            ok = is_colimit(col.apex, col.coprojections, D, max_cells=b["max_cells"])
            return ok, {"cells": list(col.apex.counts())}

        out.append(timed("colimits", name, run))
    return out


def check_mutants(b, seed, mutate) -> list[CheckReport]:
    """Each broken colimit must be rejected wherever the breakage applies."""
    from opetopic.osets import colimit, is_colimit

    out = []
    for kind in ("colim-skip-merge", "colim-extra-cell", "colim-wrong-frame"):

        def run():
            tried = 0
            for name, D in _diagram_supply(b, seed):
                if kind == "colim-skip-merge":
                    if not D.arrows:
                        continue
                    bad = colimit(D, skip_merges=1)
                elif kind == "colim-extra-cell":
                    bad = mutant_extra_cell(colimit(D))
                else:
                    bad = mutant_wrong_frame(colimit(D))
                    if bad is None:
                        continue
                tried += 1
                if is_colimit(bad.apex, bad.coprojections, D, max_cells=b["max_cells"]):
                    return False, {"accepted": name}
            return True, {"rejected": tried}

        out.append(timed("mutants", kind, run))
    return out


CHECKS: dict[str, Callable] = {
    "trees": check_trees,
    "isomorphisms": check_isomorphisms,
    "targets": check_targets,
    "rewriting": check_rewriting,
    "congruence": check_congruence,
    "faces": check_faces,
    "face-oracle": check_face_oracle,
    "face-vectors": check_face_vectors,
    "full-faithfulness": check_full_faithfulness,
    "yoneda": check_yoneda,
    "projectivity": check_projectivity,
    "generation": check_generation,
    "colimits": check_colimits,
    "mutants": check_mutants,
}


def selected_checks(only: Optional[Sequence[str]] = None) -> list[str]:
    names = [n for suite in SUITES.values() for n in suite]
    if not only:
        return names
    chosen = set()
    for item in only:
        if item in SUITES:
            chosen.update(SUITES[item])
        elif item in names:
            chosen.add(item)
        else:
            raise ValueError(f"unknown check or suite {item!r}")
    if "leaves" in chosen:
        chosen.add("trees")
    return [n for n in names if n in chosen]


def run_checks(
    bounds: Optional[dict] = None,
    only: Optional[Sequence[str]] = None,
    mutate: Optional[str] = None,
    seed: Optional[int] = None,
) -> list[CheckReport]:
    b = dict(BOUNDS, **(bounds or {}))
    seed = b["seed"] if seed is None else seed
    if mutate is not None and mutate not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutate!r}")
    names = selected_checks(only)
    reports: list[CheckReport] = []
    for name in names:
        if name == "leaves":
            continue  # produced together with the tree sweep
        reports.extend(CHECKS[name](b, seed, mutate))
    if "trees" in names and "leaves" not in names:
        reports = [r for r in reports if r.check != "leaves"]
    return reports


def run_presheaf_evidence(bounds: Optional[dict] = None, mutate: Optional[str] = None) -> list[CheckReport]:
    return run_checks(bounds, only=["presheaf"], mutate=mutate)


def summary_table(reports: Sequence[CheckReport]) -> str:
    """Pass and fail counts per check, with wall-clock seconds."""
    rows: dict[str, list[float]] = {}
    for r in reports:
        row = rows.setdefault(r.check, [0, 0, 0.0])
        row[0 if r.passed else 1] += 1
        row[2] += r.elapsed
    width = max([len(k) for k in rows] + [5])
    lines = [f"{'check':<{width}}  pass  fail  seconds"]
    for k, (p, f, dt) in rows.items():
        lines.append(f"{k:<{width}}  {p:>4}  {f:>4}  {dt:>7.1f}")
    return "\n".join(lines)
