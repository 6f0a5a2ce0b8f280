"""Opetopes as recursively labelled trees.

A k-opetope for k >= 2 is a tree (stored as a :class:`~opetopic.trees.Wiring`)
whose nodes are labelled by (k-1)-opetopes and whose edges carry
(k-2)-opetopes.  Input ``b`` of node ``i`` is the ``b``-th source of the node
label; the leaves are numbered so that leaf ``j`` becomes source ``j`` of the
target.  There is exactly one 0-opetope and one 1-opetope.

Any presentation (node order, leaf order, label presentations) is accepted.
Isomorphism classes are identified by a canonical code; every class has a
unique canonical presentation, reachable through :attr:`Opetope.canonical`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Iterator, Mapping, Optional, Sequence

from opetopic.trees import ROOT, Port, Wiring, domain_ports, is_tree


class PastingError(ValueError):
    """Raised for labelled trees that do not describe an opetope."""


@dataclass(frozen=True, eq=False)
class Opetope:
    dim: int
    wiring: Optional[Wiring] = None
    nodes: tuple["Opetope", ...] = ()
    edges: tuple["Opetope", ...] = ()

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Opetope):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.code == other.code
            and self.wiring == other.wiring
            and self.nodes == other.nodes
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash(self.code)

    def __repr__(self):
        return f"Opetope({self.code!r})"

    @property
    def arity(self) -> int:
        if self.dim == 0:
            return 0
        if self.dim == 1:
            return 1
        return len(self.nodes)

    @property
    def is_null(self) -> bool:
        return self.dim >= 2 and not self.nodes

    @cached_property
    def sources(self) -> tuple[Opetope, ...]:
        if self.dim == 0:
            raise ValueError("no source: a 0-opetope has no faces")
        if self.dim == 1:
            return (POINT,)
        return self.nodes

    @cached_property
    def target(self) -> Opetope:
        if self.dim == 0:
            raise ValueError("no target: a 0-opetope has no faces")
        return _compute_target(self)

    @cached_property
    def _canon(self) -> tuple[str, tuple[int, ...]]:
        return _canonical_data(self)

    @property
    def code(self) -> str:
        """Canonical code; equal exactly for isomorphic opetopes."""
        return self._canon[0]

    @property
    def rank(self) -> tuple[int, ...]:
        """``rank[i]`` is the canonical position of source ``i`` (0-based)."""
        return self._canon[1]

    @cached_property
    def canonical(self) -> Opetope:
        if self.dim <= 1:
            return self
        c = _canonicalize(self)
        # keep identity when already canonical so `is` checks stay cheap
        return self if c == self else c

    @property
    def is_canonical(self) -> bool:
        return self.canonical is self

    def root(self) -> Optional[int]:
        """Index of the root node, or None for a null opetope."""
        node = self.wiring[ROOT][0]
        return node or None

    def edge(self, port: Port) -> Opetope:
        return self.edges[domain_ports(self.wiring.arities).index(port)]

    def to_json(self) -> dict[str, Any]:
        if self.dim <= 1:
            return {"dim": self.dim}
        return {
            "dim": self.dim,
            "tree": {
                "wiring": self.wiring.to_json(),
                "nodes": [n.to_json() for n in self.nodes],
                "edges": [e.code for e in self.edges],
            },
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Opetope:
        dim = int(data["dim"])
        if dim == 0:
            return POINT
        if dim == 1:
            return ARROW
        tree = data["tree"]
        return make_opetope(
            dim,
            Wiring.from_json(tree["wiring"]),
            [cls.from_json(n) for n in tree["nodes"]],
            [parse_code(e) for e in tree["edges"]],
        )


POINT = Opetope(0)
ARROW = Opetope(1)


def make_opetope(
    dim: int,
    wiring: Optional[Wiring] = None,
    nodes: Sequence[Opetope] = (),
    edges: Optional[Sequence[Opetope]] = None,
) -> Opetope:
    """Validated constructor.  ``edges`` default to the canonical shapes."""
    if dim < 0:
        raise ValueError("dimension must be non-negative")
    if dim <= 1:
        if wiring is not None or nodes or edges:
            raise PastingError(f"a {dim}-opetope carries no tree")
        return POINT if dim == 0 else ARROW
    if wiring is None:
        raise PastingError("missing wiring")
    nodes = tuple(nodes)
    for n in nodes:
        if n.dim != dim - 1:
            raise PastingError(f"node label of dimension {n.dim}, expected {dim - 1}")
    if wiring.arities != tuple(n.arity for n in nodes):
        raise PastingError("wiring arities do not match the node labels")
    if not is_tree(wiring):
        raise PastingError("not a tree")
    if edges is None:
        edges = _default_edges(wiring, nodes)
    edges = tuple(edges)
    ports = domain_ports(wiring.arities)
    if len(edges) != len(ports):
        raise PastingError("need one edge label per domain port")
    feed = wiring.as_dict()
    for y, e in zip(ports, edges):
        if e.dim != dim - 2:
            raise PastingError(f"edge label at {y} has dimension {e.dim}")
        if y != ROOT:
            j, b = y
            if nodes[j - 1].sources[b - 1].code != e.code:
                raise PastingError(f"invalid pasting: edge {y} does not match source {b} of node {j}")
        i = feed[y][0]
        if i and nodes[i - 1].target.code != e.code:
            raise PastingError(f"invalid pasting: edge {y} does not match target of node {i}")
    return Opetope(dim, wiring, nodes, edges)


def _default_edges(wiring: Wiring, nodes: Sequence[Opetope]) -> tuple[Opetope, ...]:
    feed = wiring.as_dict()
    out = []
    for y in domain_ports(wiring.arities):
        if y == ROOT:
            i = feed[ROOT][0]
            if not i:
                raise PastingError("a null opetope needs an explicit edge label")
            out.append(nodes[i - 1].target.canonical)
        else:
            out.append(nodes[y[0] - 1].sources[y[1] - 1].canonical)
    return tuple(out)


# ---------------------------------------------------------------- builders


@dataclass(frozen=True)
class Node:
    """Planar tree spec: a label and one child (or None for a leaf) per source."""

    label: Opetope
    children: tuple[Optional["Node"], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) != self.label.arity:
            raise PastingError(
                f"label of arity {self.label.arity} given {len(self.children)} children"
            )


def node(label: Opetope, *children: Optional[Node]) -> Node:
    if not children and label.arity:
        children = (None,) * label.arity
    return Node(label, children)


def null(edge: Opetope) -> Opetope:
    """The null (edge.dim + 2)-opetope: no nodes, one edge labelled ``edge``."""
    return Opetope(edge.dim + 2, Wiring((), ((ROOT, (0, 1)),)), (), (edge,))


def build(tree: Node, canonical_leaves: bool = True) -> Opetope:
    """Opetope whose nodes are numbered in depth-first order of ``tree``.

    With ``canonical_leaves`` the leaves are numbered so the target comes out
    in canonical node order; otherwise they are numbered left to right.
    """
    dim = tree.label.dim + 1
    if dim < 2:
        raise PastingError("trees describe opetopes of dimension >= 2")
    labels: list[Opetope] = []
    mapping: dict[Port, Port] = {}
    leaves = 0

    def visit(t: Node) -> Port:
        nonlocal leaves
        if t.label.dim != dim - 1:
            raise PastingError("node labels must all have the same dimension")
        idx = len(labels) + 1
        labels.append(t.label)
        for b, child in enumerate(t.children, start=1):
            if child is None:
                leaves += 1
                mapping[(idx, b)] = (0, leaves)
            else:
                mapping[(idx, b)] = visit(child)
        return (idx, 0)

    mapping[ROOT] = visit(tree)
    arities = tuple(n.arity for n in labels)
    o = make_opetope(dim, Wiring.from_dict(arities, mapping), labels)
    if canonical_leaves and dim >= 3:
        rank = o.target.rank
        if any(r != j for j, r in enumerate(rank)):
            renumber = {(0, j + 1): (0, r + 1) for j, r in enumerate(rank)}
            mapping = {y: renumber.get(x, x) for y, x in mapping.items()}
            o = Opetope(dim, Wiring.from_dict(arities, mapping), o.nodes, o.edges)
    return o


def polygon(m: int) -> Opetope:
    """The canonical 2-opetope with ``m`` source arrows."""
    if m == 0:
        return null(POINT)
    t = None
    for _ in range(m):
        t = Node(ARROW, (t,))
    return build(t)


def unit(x: Opetope) -> Opetope:
    """The one-node (x.dim + 1)-opetope on ``x``, leaves in source order of ``x``."""
    return build(node(x), canonical_leaves=False)


def with_node_order(o: Opetope, order: Sequence[int]) -> Opetope:
    """Same opetope with node ``i`` renumbered ``order[i - 1]``."""
    if o.dim < 2:
        return o
    if sorted(order) != list(range(1, o.arity + 1)):
        raise ValueError("order must be a permutation of the nodes")
    ren = {0: 0}
    ren.update({i + 1: order[i] for i in range(o.arity)})
    mapping = {(ren[a], b): (ren[c], d) for (a, b), (c, d) in o.wiring.map}
    edge_at = {
        (ren[a], b): e for (a, b), e in zip(domain_ports(o.wiring.arities), o.edges)
    }
    nodes = [None] * o.arity
    for i, n in enumerate(o.nodes):
        nodes[order[i] - 1] = n
    arities = tuple(n.arity for n in nodes)
    edges = [edge_at[y] for y in domain_ports(arities)]
    return make_opetope(o.dim, Wiring.from_dict(arities, mapping), nodes, edges)


def with_leaf_order(o: Opetope, order: Sequence[int]) -> Opetope:
    """Same opetope with leaf ``j`` renumbered ``order[j - 1]``."""
    if o.dim < 2:
        return o
    leaves = o.wiring.leaf_count
    if sorted(order) != list(range(1, leaves + 1)):
        raise ValueError("order must be a permutation of the leaves")
    mapping = {
        y: ((0, order[x[1] - 1]) if x[0] == 0 else x) for y, x in o.wiring.map
    }
    return make_opetope(o.dim, Wiring.from_dict(o.wiring.arities, mapping), o.nodes, o.edges)


def with_node_label(o: Opetope, i: int, label: Opetope) -> Opetope:
    """Replace the label of node ``i`` by another presentation of the same opetope."""
    if o.dim < 2:
        return o
    old = o.nodes[i - 1]
    perm = Isomorphism(old, label).perm
    mapping = {
        ((a, perm[b - 1] + 1) if a == i and b else (a, b)): x for (a, b), x in o.wiring.map
    }
    edge_at = {
        ((a, perm[b - 1] + 1) if a == i and b else (a, b)): e
        for (a, b), e in zip(domain_ports(o.wiring.arities), o.edges)
    }
    nodes = list(o.nodes)
    nodes[i - 1] = label
    edges = [edge_at[y] for y in domain_ports(o.wiring.arities)]
    return make_opetope(o.dim, Wiring.from_dict(o.wiring.arities, mapping), nodes, edges)


def random_presentation(o: Opetope, rng) -> Opetope:
    """A presentation of ``o`` with node order, leaf order and labels shuffled."""
    if o.dim < 2:
        return o
    for i in range(1, o.arity + 1):
        o = with_node_label(o, i, random_presentation(o.nodes[i - 1], rng))
    order = list(range(1, o.arity + 1))
    rng.shuffle(order)
    o = with_node_order(o, order)
    leaves = list(range(1, o.wiring.leaf_count + 1))
    rng.shuffle(leaves)
    return with_leaf_order(o, leaves)


# ------------------------------------------------------- canonical forms


def _canonical_data(o: Opetope) -> tuple[str, tuple[int, ...]]:
    k = o.dim
    if k == 0:
        return "0", ()
    if k == 1:
        return "1", (0,)
    feed = o.wiring.as_dict()
    root = feed[ROOT][0]
    if not root:
        return f"{k}|{o.edges[0].code}", ()
    rank = [0] * o.arity
    counter = 0

    def sub(i: int) -> str:
        nonlocal counter
        rank[i - 1] = counter
        counter += 1
        label = o.nodes[i - 1]
        parts = []
        for b in _slot_order(label):
            src = feed[(i, b + 1)][0]
            parts.append(sub(src) if src else ".")
        return f"[{label.code}:{','.join(parts)}]"

    return f"{k}{sub(root)}", tuple(rank)


def _slot_order(label: Opetope) -> list[int]:
    """Presentation slots (0-based) of ``label`` listed in canonical order."""
    order = [0] * label.arity
    for b, r in enumerate(label.rank):
        order[r] = b
    return order


def _canonicalize(o: Opetope) -> Opetope:
    feed = o.wiring.as_dict()
    root = feed[ROOT][0]
    if not root:
        return null(o.edges[0].canonical)

    def sub(i: int) -> Node:
        label = o.nodes[i - 1]
        children = []
        for b in _slot_order(label):
            src = feed[(i, b + 1)][0]
            children.append(sub(src) if src else None)
        return Node(label.canonical, tuple(children))

    return build(sub(root))


def _compute_target(o: Opetope) -> Opetope:
    k = o.dim
    if k == 1:
        return POINT
    if k == 2:
        return ARROW
    feed = o.wiring.as_dict()
    root = feed[ROOT][0]
    if not root:
        return unit(o.edges[0])

    inner = [n.wiring.as_dict() for n in o.nodes]
    fed_by: dict[Port, int] = {}
    consumer: dict[int, Port] = {}
    leaf_slot: dict[int, Port] = {}
    for y, x in feed.items():
        if y == ROOT:
            continue
        if x[0] == 0:
            leaf_slot[x[1]] = y
        else:
            fed_by[y] = x[0]
            consumer[x[0]] = y
    final_index = {slot: j for j, slot in leaf_slot.items()}

    def transfer(child: int, i: int, b: int, d: int) -> int:
        # unique iso target(child label) -> source b of node i, on sources
        x = o.nodes[child - 1].target
        y = o.nodes[i - 1].sources[b - 1]
        return y.rank.index(x.rank[d - 1]) + 1

    def resolve(i: int, port: Port) -> Port:
        b, s = port
        while True:
            if b:
                # output of node b inside the tree of node i
                if (i, b) in final_index:
                    return (final_index[(i, b)], 0)
                i = fed_by[(i, b)]
                b, s = inner[i - 1][ROOT]
                continue
            if i == root:
                return (0, s)
            i2, b2 = consumer[i]
            c = transfer(i, i2, b2, s)
            i = i2
            b, s = inner[i - 1][(b2, c)]

    labels = []
    mapping: dict[Port, Port] = {}
    for j in range(1, len(leaf_slot) + 1):
        i, b = leaf_slot[j]
        y = o.nodes[i - 1].sources[b - 1]
        labels.append(y)
        for c in range(1, y.arity + 1):
            mapping[(j, c)] = resolve(i, inner[i - 1][(b, c)])
    mapping[ROOT] = resolve(root, inner[root - 1][ROOT])
    arities = tuple(n.arity for n in labels)
    return _assemble(k - 1, Wiring.from_dict(arities, mapping), labels, o)


def _assemble(dim: int, w: Wiring, labels: list[Opetope], o: Opetope) -> Opetope:
    feed = w.as_dict()
    edges = []
    for y in domain_ports(w.arities):
        if y == ROOT:
            i = feed[ROOT][0]
            edges.append(labels[i - 1].target.canonical if i else _root_edge_shape(o))
        else:
            edges.append(labels[y[0] - 1].sources[y[1] - 1].canonical)
    return make_opetope(dim, w, labels, edges)


def _root_edge_shape(o: Opetope) -> Opetope:
    # the target's root edge carries target(target(root label))
    root = o.wiring[ROOT][0]
    return o.nodes[root - 1].target.target.canonical


# ------------------------------------------------------------ isomorphism


@dataclass(frozen=True)
class Isomorphism:
    """The unique isomorphism between two presentations of one opetope."""

    dom: Opetope
    cod: Opetope

    def __post_init__(self):
        if self.dom.code != self.cod.code:
            raise ValueError("opetopes are not isomorphic")

    @cached_property
    def perm(self) -> tuple[int, ...]:
        """``perm[i]`` is the source of ``cod`` matched with source ``i`` of ``dom``."""
        if self.dom.dim == 0:
            return ()
        inv = {r: j for j, r in enumerate(self.cod.rank)}
        return tuple(inv[r] for r in self.dom.rank)

    @property
    def is_identity(self) -> bool:
        return self.dom == self.cod

    def source(self, i: int) -> Isomorphism:
        """Restriction to source ``i`` (0-based)."""
        return Isomorphism(self.dom.sources[i], self.cod.sources[self.perm[i]])

    def target(self) -> Isomorphism:
        return Isomorphism(self.dom.target, self.cod.target)

    def then(self, other: Isomorphism) -> Isomorphism:
        if self.cod != other.dom:
            raise ValueError("isomorphisms are not composable")
        return Isomorphism(self.dom, other.cod)

    def inverse(self) -> Isomorphism:
        return Isomorphism(self.cod, self.dom)

    def matching(self) -> tuple:
        """Node permutation together with the recursive matchings of the labels."""
        if self.dom.dim < 2:
            return (self.perm, ())
        return (self.perm, tuple(self.source(i).matching() for i in range(self.dom.arity)))


def isomorphism(a: Opetope, b: Opetope) -> Optional[Isomorphism]:
    if a.dim != b.dim or a.code != b.code:
        return None
    return Isomorphism(a, b)


def is_isomorphic(a: Opetope, b: Opetope) -> bool:
    return a.dim == b.dim and a.code == b.code


def canonical_code(o: Opetope) -> str:
    return o.code


# ------------------------------------------------------------ parsing


def parse_code(s: str) -> Opetope:
    """Inverse of :attr:`Opetope.code`; returns the canonical presentation."""
    o, pos = _parse(s, 0)
    if pos != len(s):
        raise ValueError(f"trailing characters in code at {pos}")
    if o.code != s:
        raise ValueError("code is not canonical")
    return o


def _parse(s: str, pos: int) -> tuple[Opetope, int]:
    start = pos
    while pos < len(s) and s[pos].isdigit():
        pos += 1
    if start == pos:
        raise ValueError(f"expected a dimension at {pos} in {s!r}")
    k = int(s[start:pos])
    if k == 0:
        return POINT, pos
    if k == 1:
        return ARROW, pos
    if pos < len(s) and s[pos] == "|":
        x, pos = _parse(s, pos + 1)
        if x.dim != k - 2:
            raise ValueError("null opetope edge has the wrong dimension")
        return null(x), pos
    t, pos = _parse_node(s, pos, k)
    return build(t), pos


def _parse_node(s: str, pos: int, k: int) -> tuple[Node, int]:
    if s[pos : pos + 1] != "[":
        raise ValueError(f"expected '[' at {pos} in {s!r}")
    label, pos = _parse(s, pos + 1)
    if label.dim != k - 1:
        raise ValueError("node label has the wrong dimension")
    if s[pos : pos + 1] != ":":
        raise ValueError(f"expected ':' at {pos} in {s!r}")
    pos += 1
    children: list[Optional[Node]] = []
    for b in range(label.arity):
        if b:
            if s[pos : pos + 1] != ",":
                raise ValueError(f"expected ',' at {pos} in {s!r}")
            pos += 1
        if s[pos : pos + 1] == ".":
            children.append(None)
            pos += 1
        else:
            child, pos = _parse_node(s, pos, k)
            children.append(child)
    if s[pos : pos + 1] != "]":
        raise ValueError(f"expected ']' at {pos} in {s!r}")
    return Node(label, tuple(children)), pos + 1


# ------------------------------------------------------------ enumeration


def within_bounds(o: Opetope, max_nodes: int, max_arity: int) -> bool:
    if o.dim < 2:
        return True
    if o.arity > max_nodes:
        return False
    return all(n.arity <= max_arity and within_bounds(n, max_nodes, max_arity) for n in o.nodes) and all(
        within_bounds(e, max_nodes, max_arity) for e in o.edges
    )


@lru_cache(maxsize=None)
def _enumerate(dim: int, max_nodes: int, max_arity: int) -> tuple[Opetope, ...]:
    if dim == 0:
        return (POINT,)
    if dim == 1:
        return (ARROW,)
    found = {x.code: x for x in (null(e) for e in _enumerate(dim - 2, max_nodes, max_arity))}
    labels = [b for b in _enumerate(dim - 1, max_nodes, max_arity) if b.arity <= max_arity]
    by_target: dict[str, list[Opetope]] = {}
    for b in labels:
        by_target.setdefault(b.target.code, []).append(b)

    @lru_cache(maxsize=None)
    def trees(required: Optional[str], budget: int) -> tuple[tuple[Node, int], ...]:
        if budget <= 0:
            return ()
        out = []
        pool = labels if required is None else by_target.get(required, [])
        for label in pool:
            for children, used in fill(label, 0, budget - 1):
                out.append((Node(label, children), used + 1))
        return tuple(out)

    def fill(label: Opetope, b: int, budget: int) -> Iterator[tuple[tuple, int]]:
        if b == label.arity:
            yield (), 0
            return
        for rest, used in fill(label, b + 1, budget):
            yield (None,) + rest, used
        slot = label.sources[b].code
        for sub, n in trees(slot, budget):
            for rest, used in fill(label, b + 1, budget - n):
                yield (sub,) + rest, used + n

    for t, _ in trees(None, max_nodes):
        o = build(t)
        found.setdefault(o.code, o)
    return tuple(found[c] for c in sorted(found))


def count_candidates(dim: int, max_nodes: int, max_arity: int) -> int:
    """Number of labelled planar trees :func:`enumerate_opetopes` would build.

    Counted without building them, so callers can refuse a bound before
    paying for it.  Null opetopes are included.
    """
    if dim < 2:
        return 1
    # the labels one dimension down are enumerated; that is the cheap part
    labels = [b for b in _enumerate(dim - 1, max_nodes, max_arity) if b.arity <= max_arity]
    by_target: dict[str, list[Opetope]] = {}
    for b in labels:
        by_target.setdefault(b.target.code, []).append(b)

    @lru_cache(maxsize=None)
    def trees(required: Optional[str], budget: int) -> dict[int, int]:
        """Map nodes used -> number of trees rooted at a label with that output."""
        out: dict[int, int] = {}
        if budget <= 0:
            return out
        pool = labels if required is None else by_target.get(required, [])
        for label in pool:
            for used, n in fill(label, 0, budget - 1).items():
                out[used + 1] = out.get(used + 1, 0) + n
        return out

    @lru_cache(maxsize=None)
    def fill(label: Opetope, b: int, budget: int) -> dict[int, int]:
        if b == label.arity:
            return {0: 1}
        out = dict(fill(label, b + 1, budget))
        for n, k in trees(label.sources[b].code, budget).items():
            for used, r in fill(label, b + 1, budget - n).items():
                out[used + n] = out.get(used + n, 0) + k * r
        return out

    nulls = len(_enumerate(dim - 2, max_nodes, max_arity))
    return nulls + sum(trees(None, max_nodes).values())


def enumerate_opetopes(dim: int, max_nodes: int, max_arity: int) -> list[Opetope]:
    """Canonical opetopes of one dimension within the bounds, sorted by code.

    Every tree at every level has at most ``max_nodes`` nodes whose labels
    have at most ``max_arity`` sources.
    """
    if min(dim, max_nodes, max_arity) < 0:
        raise ValueError("bounds must be non-negative")
    return list(_enumerate(dim, max_nodes, max_arity))


# ------------------------------------------------------------ rendering


def render_text(o: Opetope, indent: str = "") -> str:
    if o.dim <= 1:
        return f"{indent}{o.code}"
    if o.is_null:
        return f"{indent}{o.dim}-opetope null on {o.edges[0].code}"
    lines = [f"{indent}{o.dim}-opetope {o.code}"]
    feed = o.wiring.as_dict()

    def walk(i: int, depth: str):
        label = o.nodes[i - 1]
        lines.append(f"{depth}node {i}: {label.code}")
        for b in range(1, label.arity + 1):
            src = feed[(i, b)]
            if src[0]:
                walk(src[0], depth + "  ")
            else:
                lines.append(f"{depth}  leaf {src[1]}")

    walk(o.root(), indent + "  ")
    return "\n".join(lines)


def short_label(code: str, width: int = 24) -> str:
    if len(code) <= width:
        return code
    digest = hashlib.sha1(code.encode()).hexdigest()[:6]
    return f"{code[:width]}~{digest}"


def to_dot(o: Opetope) -> str:
    lines = ["digraph opetope {", f'  label="{short_label(o.code)}";']
    if o.dim < 2:
        lines.append(f'  n0 [label="{o.code}"];')
        lines.append("}")
        return "\n".join(lines)
    lines.append('  root [shape=point];')
    for i, n in enumerate(o.nodes, start=1):
        lines.append(f'  n{i} [label="{i}: {short_label(n.code)}"];')
    leaves = o.wiring.leaf_count
    for j in range(1, leaves + 1):
        lines.append(f'  leaf{j} [shape=plaintext, label="{j}"];')
    for (y, x), e in zip(o.wiring.map, o.edges):
        src = f"n{x[0]}" if x[0] else f"leaf{x[1]}"
        dst = f"n{y[0]}" if y[0] else "root"
        lines.append(f'  {src} -> {dst} [label="{short_label(e.code)}"];')
    lines.append("}")
    return "\n".join(lines)
