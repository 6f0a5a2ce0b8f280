"""Combed trees and their encoding as wiring bijections.

A tree with nodes ``N_1 .. N_k`` (node ``i`` having ``m_i`` inputs and one
output) is stored as a bijection from the node inputs plus the formal output
onto the node outputs plus the formal inputs (the leaves).  Ports are integer
pairs ``(node, slot)``:

* ``(i, b)`` with ``i >= 1, b >= 1`` -- input ``b`` of node ``i``
* ``(i, 0)`` with ``i >= 1``         -- output of node ``i``
* ``(0, j)`` with ``j >= 1``         -- formal input ``j`` (leaf ``j``)
* ``(0, 0)``                         -- formal output (the root edge)

The map sends every input port to whatever feeds it.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Hashable, Iterator, Mapping, Optional, Sequence

Port = tuple[int, int]

ROOT: Port = (0, 0)

#: default bound on the number of ports searched by :func:`enumerate_wirings`
MAX_ENUMERATION_PORTS = 8


def leaf_count(arities: Sequence[int]) -> int:
    """Number of leaves ``sum(m_i) - k + 1`` of any tree with these node arities."""
    if any(m < 0 for m in arities):
        raise ValueError("node arities must be non-negative")
    leaves = sum(arities) - len(arities) + 1
    if leaves < 0:
        raise ValueError(f"no tree exists for this profile {tuple(arities)}")
    return leaves


def port_kind(port: Port) -> str:
    node, slot = port
    if node == 0:
        return "root" if slot == 0 else "leaf"
    return "output" if slot == 0 else "input"


def domain_ports(arities: Sequence[int]) -> list[Port]:
    """Sorted domain of a wiring: the formal output then every node input."""
    return list(_domain(tuple(arities)))


def codomain_ports(arities: Sequence[int]) -> list[Port]:
    """Sorted codomain of a wiring: the leaves then every node output."""
    return list(_codomain(tuple(arities)))


@lru_cache(maxsize=4096)
def _domain(arities: tuple[int, ...]) -> tuple[Port, ...]:
    ports = [ROOT]
    for i, m in enumerate(arities, start=1):
        ports.extend((i, b) for b in range(1, m + 1))
    return tuple(ports)


@lru_cache(maxsize=4096)
def _codomain(arities: tuple[int, ...]) -> tuple[Port, ...]:
    leaves = leaf_count(arities)
    return tuple([(0, j) for j in range(1, leaves + 1)] + [(i, 0) for i in range(1, len(arities) + 1)])


@dataclass(frozen=True)
class Wiring:
    """A bijection encoding a (possibly looped) graph on a node profile."""

    arities: tuple[int, ...]
    map: tuple[tuple[Port, Port], ...]

    def __post_init__(self):
        object.__setattr__(self, "arities", tuple(self.arities))
        pairs = tuple(sorted((tuple(a), tuple(b)) for a, b in self.map))
        object.__setattr__(self, "map", pairs)
        dom = tuple(a for a, _ in pairs)
        cod = tuple(sorted(b for _, b in pairs))
        if dom != _domain(self.arities):
            raise ValueError("wiring domain does not match the node profile")
        if cod != _codomain(self.arities):
            raise ValueError("wiring is not a bijection onto the codomain ports")

    @classmethod
    def trusted(cls, arities: tuple[int, ...], pairs: tuple[tuple[Port, Port], ...]) -> Wiring:
        """Skip validation; ``pairs`` must already be a sorted bijection."""
        w = object.__new__(cls)
        object.__setattr__(w, "arities", arities)
        object.__setattr__(w, "map", pairs)
        return w

    @classmethod
    def from_dict(cls, arities: Sequence[int], mapping: Mapping[Port, Port]) -> Wiring:
        return cls(tuple(arities), tuple(mapping.items()))

    @property
    def node_count(self) -> int:
        return len(self.arities)

    @property
    def leaf_count(self) -> int:
        return leaf_count(self.arities)

    def as_dict(self) -> dict[Port, Port]:
        return dict(self.map)

    def __getitem__(self, port: Port) -> Port:
        return self.as_dict()[port]

    def consumers(self) -> dict[Port, Port]:
        """Inverse map: for each output/leaf port, the input port it feeds."""
        return {b: a for a, b in self.map}

    def to_json(self) -> dict[str, Any]:
        return {
            "arities": list(self.arities),
            "map": [[_port_json(a), _port_json(b)] for a, b in self.map],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Wiring:
        return cls(
            tuple(data["arities"]),
            tuple((_port_from_json(a), _port_from_json(b)) for a, b in data["map"]),
        )

    def to_dot(self, name: str = "wiring") -> str:
        lines = [f"digraph {name} {{", '  N0 [label="N", shape=box];']
        for i, m in enumerate(self.arities, start=1):
            lines.append(f'  N{i} [label="N{i} ({m})"];')
        for (i, b), (j, c) in self.map:
            # edge drawn from the producer towards the consumer
            label = f"{port_kind((j, c))}{c}->{port_kind((i, b))}{b}"
            lines.append(f'  N{j} -> N{i} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


def _port_json(port: Port) -> dict[str, Any]:
    return {"kind": port_kind(port), "node": port[0], "slot": port[1]}


def _port_from_json(data: Mapping[str, Any]) -> Port:
    port = (int(data["node"]), int(data["slot"]))
    if port_kind(port) != data.get("kind", port_kind(port)):
        raise ValueError(f"port kind {data['kind']!r} does not match {port}")
    return port


def has_closed_loop(w: Wiring) -> bool:
    """True iff some non-empty sequence of nodes feeds itself round a cycle.

    Every node output feeds exactly one input (or the root), so following
    consumers from a node either reaches the root or cycles.
    """
    n = len(w.arities)
    # consumer[i] is the node whose input the output of node i feeds (0 for the root)
    consumer = [0] * (n + 1)
    for (a, _), (c, d) in w.map:
        if c and not d:
            consumer[c] = a
    # state: 0 unseen, 1 on current walk, 2 known to reach the root
    state = [0] * (n + 1)
    for start in range(1, n + 1):
        walk = []
        node = start
        while node and not state[node]:
            state[node] = 1
            walk.append(node)
            node = consumer[node]
        if node and state[node] == 1:
            return True
        for v in walk:
            state[v] = 2
    return False


def is_tree(w: Wiring) -> bool:
    return not has_closed_loop(w)


# A planar tree is either None (a bare edge / leaf) or a tuple of children,
# one entry per input of the node.
Planar = Optional[tuple]


@dataclass(frozen=True)
class CombedTree:
    """Planar tree plus leaf permutation ``leaf_perm`` and node order ``node_order``.

    Nodes of ``planar`` are numbered by depth-first traversal from the root,
    children left to right; ``node_order[p]`` is the wiring index of the node at
    traversal position ``p``.  Leaves are numbered in traversal order and
    ``leaf_perm[q]`` is the formal input index of the leaf at position ``q``.
    """

    planar: Planar
    leaf_perm: tuple[int, ...]
    node_order: tuple[int, ...]

    def __post_init__(self):
        nodes, leaves = _planar_counts(self.planar)
        if sorted(self.node_order) != list(range(1, nodes + 1)):
            raise ValueError("node_order is not a bijection onto 1..k")
        if sorted(self.leaf_perm) != list(range(1, leaves + 1)):
            raise ValueError("leaf_perm is not a permutation of the leaves")

    @classmethod
    def null(cls) -> CombedTree:
        return cls(None, (1,), ())

    # both lengths are checked against the planar tree on construction
    @property
    def node_count(self) -> int:
        return len(self.node_order)

    @property
    def leaf_count(self) -> int:
        return len(self.leaf_perm)

    def arities(self) -> tuple[int, ...]:
        """Node arities indexed by wiring node number."""
        by_position = []

        def walk(t):
            if t is None:
                return
            by_position.append(len(t))
            for c in t:
                walk(c)

        walk(self.planar)
        out = [0] * len(by_position)
        for p, m in enumerate(by_position):
            out[self.node_order[p] - 1] = m
        return tuple(out)


def _planar_counts(t: Planar) -> tuple[int, int]:
    if t is None:
        return 0, 1
    nodes, leaves = 1, 0
    for c in t:
        n, l = _planar_counts(c)
        nodes += n
        leaves += l
    return nodes, leaves


def encode(t: CombedTree) -> Wiring:
    mapping: dict[Port, Port] = {}
    arities = [0] * t.node_count
    order, perm = t.node_order, t.leaf_perm
    seen = [0, 0]  # nodes and leaves visited so far

    def visit(sub) -> Port:
        if sub is None:
            seen[1] += 1
            return (0, perm[seen[1] - 1])
        node = order[seen[0]]
        seen[0] += 1
        arities[node - 1] = len(sub)
        for b, child in enumerate(sub, start=1):
            mapping[(node, b)] = visit(child)
        return (node, 0)

    mapping[ROOT] = visit(t.planar)
    return Wiring.from_dict(arities, mapping)


def decode(w: Wiring) -> CombedTree:
    feed = w.as_dict()
    node_order: list[int] = []
    leaf_perm: list[int] = []

    def visit(port: Port) -> Planar:
        node, slot = port
        if node == 0:
            leaf_perm.append(slot)
            return None
        node_order.append(node)
        return tuple([visit(feed[(node, b)]) for b in range(1, w.arities[node - 1] + 1)])

    planar = visit(feed[ROOT])
    # nodes on a closed loop never feed the root, so the walk misses them
    if len(node_order) != len(w.arities):
        raise ValueError("not a tree")
    return CombedTree(planar, tuple(leaf_perm), tuple(node_order))


def enumerate_wirings(
    arities: Sequence[int], max_ports: int = MAX_ENUMERATION_PORTS, trees_only: bool = True
) -> list[Wiring]:
    """All wirings on a profile (only the trees, by default), sorted by map."""
    arities = tuple(arities)
    dom = domain_ports(arities)
    cod = codomain_ports(arities)
    if len(dom) > max_ports:
        raise ValueError(f"profile too large: {len(dom)} ports exceeds {max_ports}")
    out = []
    for image in itertools.permutations(cod):
        w = Wiring(arities, tuple(zip(dom, image)))
        if not trees_only or is_tree(w):
            out.append(w)
    out.sort(key=lambda w: w.map)
    return out


@dataclass(frozen=True)
class Label:
    """An edge label: an abstract morphism ``name: dom -> cod``."""

    dom: Hashable
    cod: Hashable
    name: Hashable = None


@dataclass(frozen=True)
class LabelledWiring:
    """A wiring with one label per domain port, in sorted domain order."""

    wiring: Wiring
    labels: tuple[Label, ...]

    def label(self, port: Port) -> Label:
        return self.labels[domain_ports(self.wiring.arities).index(port)]


def attach_labels(
    w: Wiring,
    labels: Mapping[Port, Label] | Sequence[Label],
    objects: Mapping[Port, Hashable] | None = None,
) -> LabelledWiring:
    """Label every edge; the edge ``y -> w[y]`` carries ``f`` with ``cod(f)`` at ``y``.

    ``objects`` optionally fixes the object carried by some ports; every label
    must then agree with it at both ends.
    """
    dom = domain_ports(w.arities)
    if isinstance(labels, Mapping):
        if set(labels) != set(dom):
            raise ValueError("need exactly one label per domain port")
        ordered = tuple(labels[y] for y in dom)
    else:
        ordered = tuple(labels)
        if len(ordered) != len(dom):
            raise ValueError("need exactly one label per domain port")
    if objects:
        feed = w.as_dict()
        for y, f in zip(dom, ordered):
            if y in objects and objects[y] != f.cod:
                raise ValueError(f"label incompatible with wiring at {y}")
            x = feed[y]
            if x in objects and objects[x] != f.dom:
                raise ValueError(f"label incompatible with wiring at {x}")
    return LabelledWiring(w, ordered)


def dumps(w: Wiring) -> str:
    return json.dumps(w.to_json())


def iter_profiles(max_ports: int, sorted_only: bool = True) -> Iterator[tuple[int, ...]]:
    """Node profiles with at most ``max_ports`` domain ports that admit a tree.

    With ``sorted_only`` each profile is listed once up to node relabelling
    (arities non-increasing).
    """
    for total in range(max_ports):
        for k in range(0, total + 2):
            if sorted_only:
                for parts in _partitions(total, k, total):
                    yield parts
            else:
                for cut in itertools.combinations(range(total + k - 1), k - 1) if k else [()]:
                    if k == 0:
                        if total == 0:
                            yield ()
                        continue
                    bounds = (-1,) + cut + (total + k - 1,)
                    yield tuple(bounds[i + 1] - bounds[i] - 1 for i in range(k))


def _partitions(total: int, parts: int, cap: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, cap), -1, -1):
        if first * parts < total:
            break
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest
