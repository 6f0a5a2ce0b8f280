"""Opetopic sets as graded cell complexes.

A cell of dimension k has a shape (the canonical code of a k-opetope) and a
boundary assigning a cell to every face class of that shape below dimension
k.  Morphisms send cells to cells preserving shape and boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from opetopic.category import FaceAddress, Morphism, UnionFind, face_table
from opetopic.opetopes import Opetope, enumerate_opetopes, parse_code

CellId = Hashable


class InvalidOSet(ValueError):
    pass


def id_key(x) -> str:
    """Total order on cell ids of mixed types."""
    return json.dumps(x, default=str)


def _shape(code: str) -> Opetope:
    return parse_code(code)


@dataclass(frozen=True)
class Cell:
    id: CellId
    dim: int
    shape: str
    boundary: Mapping[FaceAddress, CellId] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "boundary", dict(sorted(self.boundary.items())))

    def __hash__(self):
        return hash((self.id, self.dim, self.shape))

    @property
    def opetope(self) -> Opetope:
        return _shape(self.shape)

    def frame(self) -> tuple[CellId, ...]:
        """Labels of the codimension-one faces: sources in order, then target."""
        k = self.dim
        if k == 0:
            return ()
        n = len(face_table(self.opetope).classes[k - 1])
        return tuple(self.boundary[(k - 1, c)] for c in range(n))


class OpetopicSet:
    """A finite opetopic set.  Cells are added bottom up."""

    def __init__(self, cells: Iterable[Cell] = ()):
        self.cells: dict[CellId, Cell] = {}
        for c in cells:
            self.cells[c.id] = c

    # -- construction

    def add(self, cell: Cell, check: bool = True) -> Cell:
        if cell.id in self.cells:
            raise InvalidOSet(f"duplicate cell id {cell.id!r}")
        if check:
            errors = self._cell_errors(cell)
            if errors:
                raise InvalidOSet("; ".join(errors))
        self.cells[cell.id] = cell
        return cell

    def add_cell(self, id: CellId, shape: Opetope | str, frame: Sequence[CellId] = (), check: bool = True) -> Cell:
        """Add a cell given only its frame (sources in node order, then target).

        Lower faces are read off the frame through the face table; the result
        is checked for consistency with the identifications of the shape.
        """
        o = _shape(shape) if isinstance(shape, str) else shape.canonical
        if isinstance(shape, Opetope) and shape.dim >= 2 and not shape.is_canonical:
            raise InvalidOSet("give the shape in canonical presentation or as a code")
        table = face_table(o)
        k = o.dim
        if len(frame) != (len(table.classes[k - 1]) if k else 0):
            raise InvalidOSet("frame length does not match the shape")
        boundary = {}
        for m in range(k - 1, -1, -1):
            for cls in table.classes[m]:
                top = frame[cls.path[0]]
                if len(cls.path) == 1:
                    boundary[cls.address] = top
                    continue
                face = self.cells.get(top)
                if face is None:
                    raise InvalidOSet(f"dangling id {top!r}")
                sub = face_table(face.opetope).address(cls.path[1:])
                boundary[cls.address] = face.boundary.get(sub)
        return self.add(Cell(id, k, o.code, boundary), check)

    # -- queries

    def __len__(self):
        return len(self.cells)

    def __contains__(self, x):
        return x in self.cells

    def __getitem__(self, x) -> Cell:
        return self.cells[x]

    def dims(self) -> list[int]:
        return sorted({c.dim for c in self.cells.values()})

    def at(self, k: int) -> list[Cell]:
        return sorted((c for c in self.cells.values() if c.dim == k), key=lambda c: id_key(c.id))

    def ordered(self) -> list[Cell]:
        return sorted(self.cells.values(), key=lambda c: (c.dim, id_key(c.id)))

    def counts(self) -> tuple[int, ...]:
        top = max(self.dims(), default=-1)
        return tuple(len(self.at(k)) for k in range(top + 1))

    def shapes(self) -> list[str]:
        return sorted({c.shape for c in self.cells.values()})

    # -- validation

    def _cell_errors(self, cell: Cell) -> list[str]:
        errors = []
        try:
            o = _shape(cell.shape)
        except ValueError as e:
            return [f"cell {cell.id!r}: bad shape ({e})"]
        if o.dim != cell.dim:
            return [f"cell {cell.id!r}: shape dimension mismatch"]
        table = face_table(o)
        expected = set(table.addresses(below=cell.dim))
        if set(cell.boundary) != expected:
            return [f"cell {cell.id!r}: boundary is not total on the shape's faces"]
        for addr, y in cell.boundary.items():
            face = self.cells.get(y)
            if face is None:
                errors.append(f"cell {cell.id!r}: dangling id {y!r}")
                continue
            cls = table[addr]
            if face.dim != cls.dim or face.shape != cls.shape.code:
                errors.append(f"cell {cell.id!r}: shape mismatch at {addr}")
                continue
            for sub, z in face.boundary.items():
                if cell.boundary[table.compose(addr, sub)] != z:
                    errors.append(f"cell {cell.id!r}: non-functorial boundary at {addr}/{sub}")
                    break
        return errors

    def validate(self) -> list[str]:
        """All invariant violations, empty when the set is valid."""
        errors = []
        for c in self.ordered():
            errors.extend(self._cell_errors(c))
        return errors

    def check(self) -> OpetopicSet:
        errors = self.validate()
        if errors:
            raise InvalidOSet("; ".join(errors))
        return self

    def is_subset_closed(self, ids: Iterable[CellId]) -> bool:
        ids = set(ids)
        return all(y in ids for x in ids for y in self.cells[x].boundary.values())

    def restrict(self, ids: Iterable[CellId]) -> OpetopicSet:
        ids = set(ids)
        if not self.is_subset_closed(ids):
            raise InvalidOSet("subset is not closed under faces")
        return OpetopicSet(self.cells[x] for x in sorted(ids, key=id_key))

    def skeleton(self, k: int) -> OpetopicSet:
        return OpetopicSet(c for c in self.cells.values() if c.dim <= k)

    def relabel(self, ren: Mapping[CellId, CellId]) -> OpetopicSet:
        return OpetopicSet(
            Cell(ren[c.id], c.dim, c.shape, {a: ren[y] for a, y in c.boundary.items()})
            for c in self.ordered()
        )

    # -- serialization

    def to_json(self) -> dict[str, Any]:
        cells: dict[str, list] = {}
        for c in self.ordered():
            cells.setdefault(str(c.dim), []).append(
                {
                    "id": c.id,
                    "shape": c.shape,
                    "boundary": {f"{m}/{i}": y for (m, i), y in c.boundary.items()},
                }
            )
        return {"cells": cells}

    @classmethod
    def from_json(cls, data: Mapping[str, Any], check: bool = True) -> OpetopicSet:
        out = cls()
        for k in sorted(data["cells"], key=int):
            for rec in data["cells"][k]:
                boundary = {}
                for key, y in rec["boundary"].items():
                    m, i = key.split("/")
                    boundary[(int(m), int(i))] = _freeze(y)
                out.cells[_freeze(rec["id"])] = Cell(_freeze(rec["id"]), int(k), rec["shape"], boundary)
        if check:
            out.check()
        return out


def _freeze(x):
    return tuple(_freeze(v) for v in x) if isinstance(x, list) else x


# ------------------------------------------------------------ morphisms


@dataclass
class OSetMorphism:
    dom: OpetopicSet
    cod: OpetopicSet
    map: dict[CellId, CellId]

    def __call__(self, x: CellId) -> CellId:
        return self.map[x]

    def errors(self) -> list[str]:
        errs = []
        if set(self.map) != set(self.dom.cells):
            return ["map is not total on the domain"]
        for x, c in self.dom.cells.items():
            y = self.map[x]
            d = self.cod.cells.get(y)
            if d is None:
                errs.append(f"{x!r} maps to a missing cell {y!r}")
            elif d.dim != c.dim or d.shape != c.shape:
                errs.append(f"{x!r} -> {y!r} changes shape")
            elif any(d.boundary[a] != self.map[z] for a, z in c.boundary.items()):
                errs.append(f"{x!r} -> {y!r} does not preserve the frame")
        return errs

    def is_valid(self) -> bool:
        return not self.errors()

    def then(self, other: OSetMorphism) -> OSetMorphism:
        return OSetMorphism(self.dom, other.cod, {x: other.map[y] for x, y in self.map.items()})

    def restricted(self, shape: str) -> dict[CellId, CellId]:
        return {x: y for x, y in self.map.items() if self.dom[x].shape == shape}

    def is_isomorphism(self) -> bool:
        if not self.is_valid():
            return False
        inverse = {y: x for x, y in self.map.items()}
        if len(inverse) != len(self.map) or set(inverse) != set(self.cod.cells):
            return False
        return OSetMorphism(self.cod, self.dom, inverse).is_valid()

    def to_json(self) -> dict[str, Any]:
        return {"map": [[x, self.map[x]] for x in sorted(self.map, key=id_key)]}


def identity_morphism(X: OpetopicSet) -> OSetMorphism:
    return OSetMorphism(X, X, {x: x for x in X.cells})


# ------------------------------------------------------------ representables


def realize(a: Opetope) -> OpetopicSet:
    """The representable on ``a``: one m-cell per m-dimensional face class."""
    table = face_table(a)
    X = OpetopicSet()
    for m in range(a.dim + 1):
        for cls in table.classes[m]:
            sub = face_table(cls.shape)
            boundary = {b: table.compose(cls.address, b) for b in sub.addresses(below=m)}
            X.cells[cls.address] = Cell(cls.address, m, cls.shape.code, boundary)
    return X


def realize_morphism(h: Morphism) -> OSetMorphism:
    table = face_table(h.cod)
    src = realize(h.dom)
    return OSetMorphism(src, realize(h.cod), {x: table.compose(h.address, x) for x in src.cells})


def top_cell(a: Opetope) -> CellId:
    return (a.dim, 0)


def cells_of_shape(a: Opetope, X: OpetopicSet) -> list[Cell]:
    return [c for c in X.ordered() if c.shape == a.code]


def induced_morphism(a: Opetope, X: OpetopicSet, x: CellId) -> OSetMorphism:
    """The morphism from the representable on ``a`` sending its top cell to ``x``."""
    cell = X[x]
    if cell.shape != a.code:
        raise ValueError("cell has a different shape")
    mapping = dict(cell.boundary)
    mapping[top_cell(a)] = x
    return OSetMorphism(realize(a), X, mapping)


def hom_oset(X: OpetopicSet, Y: OpetopicSet, max_cells: int = 60, limit: Optional[int] = None) -> list[OSetMorphism]:
    """Every morphism ``X -> Y``, listed in dimension-ascending order of images."""
    if len(X) > max_cells or len(Y) > max_cells:
        raise ValueError(f"bound exceeded: more than {max_cells} cells")
    cells = X.ordered()
    found = list(iter_homs(X, Y, limit=limit))
    found.sort(key=lambda h: [id_key(h.map[c.id]) for c in cells])
    return found


def iter_homs(
    X: OpetopicSet,
    Y: OpetopicSet,
    limit: Optional[int] = None,
    order=None,
    fixed: Optional[Mapping[CellId, CellId]] = None,
) -> Iterator[OSetMorphism]:
    """Morphisms ``X -> Y`` by backtracking over the maximal cells of ``X``.

    The image of a cell fixes the images of all its faces, so only cells that
    are not faces of anything are chosen; higher ones go first to fail early.
    ``fixed`` prescribes the images of some cells.
    """
    faces = {y for c in X.cells.values() for y in c.boundary.values()}
    free = [c for c in X.ordered() if c.id not in faces]
    free.sort(key=lambda c: -c.dim)
    by_shape: dict[str, list[Cell]] = {}
    for d in Y.ordered():
        by_shape.setdefault(d.shape, []).append(d)
    mapping: dict[CellId, CellId] = dict(fixed or {})
    found = 0

    def assign(c: Cell, d: Cell) -> Optional[list[CellId]]:
        added = []
        for x, y in [(c.id, d.id)] + [(z, d.boundary[a]) for a, z in c.boundary.items()]:
            if x in mapping:
                if mapping[x] != y:
                    for z in added:
                        del mapping[z]
                    return None
            else:
                mapping[x] = y
                added.append(x)
        return added

    def go(i: int):
        nonlocal found
        if limit is not None and found >= limit:
            return
        if i == len(free):
            found += 1
            yield OSetMorphism(X, Y, dict(mapping))
            return
        c = free[i]
        pool = by_shape.get(c.shape, [])
        if order is not None:
            pool = order(pool)
        for d in pool:
            added = assign(c, d)
            if added is None:
                continue
            yield from go(i + 1)
            for z in added:
                del mapping[z]

    yield from go(0)


# ------------------------------------------------------------ diagrams and colimits


@dataclass
class Arrow:
    src: int
    dst: int
    map: OSetMorphism


@dataclass
class Diagram:
    """A finite diagram: objects, generating arrows, and relations between paths.

    A relation is a pair of arrow-index paths (composed left to right) with
    the same endpoints that must induce the same morphism.
    """

    objects: list[OpetopicSet]
    arrows: list[Arrow] = field(default_factory=list)
    relations: list[tuple[list[int], list[int]]] = field(default_factory=list)

    def errors(self) -> list[str]:
        errs = []
        for i, X in enumerate(self.objects):
            errs.extend(f"object {i}: {e}" for e in X.validate())
        for n, u in enumerate(self.arrows):
            if u.map.dom is not self.objects[u.src] or u.map.cod is not self.objects[u.dst]:
                errs.append(f"arrow {n}: endpoints do not match its objects")
                continue
            errs.extend(f"arrow {n}: {e}" for e in u.map.errors())
        for r, (p, q) in enumerate(self.relations):
            fp, fq = self._compose(p), self._compose(q)
            if fp is None or fq is None or fp != fq:
                errs.append(f"relation {r}: not functorial")
        return errs

    def _compose(self, path: Sequence[int]) -> Optional[dict]:
        if not path:
            return None
        out = dict(self.arrows[path[0]].map.map)
        for a, b in zip(path, path[1:]):
            if self.arrows[a].dst != self.arrows[b].src:
                return None
            nxt = self.arrows[b].map.map
            out = {x: nxt[y] for x, y in out.items()}
        return out

    def check(self) -> Diagram:
        errs = self.errors()
        if errs:
            raise InvalidOSet("non-functorial diagram: " + "; ".join(errs))
        return self

    def to_json(self) -> dict[str, Any]:
        return {
            "objects": [X.to_json() for X in self.objects],
            "arrows": [
                {"src": u.src, "dst": u.dst, "map": u.map.to_json()["map"]} for u in self.arrows
            ],
            "relations": [[list(p), list(q)] for p, q in self.relations],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Diagram:
        objects = [OpetopicSet.from_json(o) for o in data["objects"]]
        arrows = []
        for rec in data.get("arrows", []):
            src, dst = int(rec["src"]), int(rec["dst"])
            mapping = {_freeze(x): _freeze(y) for x, y in rec["map"]}
            arrows.append(Arrow(src, dst, OSetMorphism(objects[src], objects[dst], mapping)))
        relations = [(list(p), list(q)) for p, q in data.get("relations", [])]
        return cls(objects, arrows, relations)


@dataclass
class Colimit:
    apex: OpetopicSet
    coprojections: list[OSetMorphism]

    def to_json(self) -> dict[str, Any]:
        return {
            "colimit": self.apex.to_json(),
            "coprojections": [p.to_json()["map"] for p in self.coprojections],
        }


def colimit(D: Diagram, check: bool = True, skip_merges: int = 0) -> Colimit:
    """Colimit computed dimensionwise on cells.

    Cells of the disjoint union are ``(object index, cell id)``; every arrow
    identifies a cell with its image, and each class is represented by its
    least element.  ``skip_merges`` splits the largest element off that many
    classes (a deliberately broken variant for testing the checkers).
    """
    if check:
        D.check()
    elements = [(i, c.id) for i, X in enumerate(D.objects) for c in X.ordered()]
    keyed = {e: (e[0], id_key(e[1])) for e in elements}
    uf = UnionFind(keyed[e] for e in elements)
    back = {v: e for e, v in keyed.items()}
    merges = [
        (keyed[(u.src, x)], keyed[(u.dst, y)]) for u in D.arrows for x, y in sorted(u.map.map.items(), key=lambda p: id_key(p[0]))
    ]
    for a, b in merges:
        uf.union(a, b)
    rep = {e: back[uf.find(keyed[e])] for e in elements}
    if skip_merges:
        for group in [g for g in uf.groups() if len(g) > 1][:skip_merges]:
            loner = back[group[-1]]
            rep[loner] = loner
    Z = OpetopicSet()
    for e in sorted(set(rep.values()), key=lambda e: keyed[e]):
        i, x = e
        c = D.objects[i][x]
        Z.cells[e] = Cell(e, c.dim, c.shape, {a: rep[(i, y)] for a, y in c.boundary.items()})
    coprojections = [
        OSetMorphism(X, Z, {c.id: rep[(i, c.id)] for c in X.ordered()})
        for i, X in enumerate(D.objects)
    ]
    return Colimit(Z, coprojections)


def coproduct(*objects: OpetopicSet) -> Colimit:
    return colimit(Diagram(list(objects)))


def set_colimit(D: Diagram) -> Colimit:
    """Colimit built independently: connected components of the identification graph."""
    import networkx as nx

    g = nx.Graph()
    for i, X in enumerate(D.objects):
        g.add_nodes_from((i, c.id) for c in X.ordered())
    for u in D.arrows:
        g.add_edges_from(((u.src, x), (u.dst, y)) for x, y in u.map.map.items())
    rep = {}
    for comp in nx.connected_components(g):
        name = ("class", min(id_key(e) for e in comp))
        for e in comp:
            rep[e] = name
    Z = OpetopicSet()
    for i, X in enumerate(D.objects):
        for c in X.ordered():
            name = rep[(i, c.id)]
            if name not in Z.cells:
                Z.cells[name] = Cell(name, c.dim, c.shape, {a: rep[(i, y)] for a, y in c.boundary.items()})
    legs = [OSetMorphism(X, Z, {c.id: rep[(i, c.id)] for c in X.ordered()}) for i, X in enumerate(D.objects)]
    return Colimit(Z, legs)


def _commutes(D: Diagram, legs: Sequence[OSetMorphism]) -> bool:
    for u in D.arrows:
        src, dst = legs[u.src].map, legs[u.dst].map
        if any(dst[y] != src[x] for x, y in u.map.map.items()):
            return False
    return True


def is_colimit(
    Z: OpetopicSet,
    cocone: Sequence[OSetMorphism],
    D: Diagram,
    targets: Optional[Sequence[OpetopicSet]] = None,
    max_cells: int = 60,
    max_cocones: int = 200,
) -> bool:
    """Brute-force universal property against a family of test targets.

    The cocone must consist of valid morphisms into ``Z`` commuting with every
    arrow of ``D``.  Then for each test target (by default ``Z``, an
    independently computed quotient, and ``Z + Z`` when small) and each of the
    first ``max_cocones`` cocones into it, exactly one morphism out of ``Z``
    must mediate.
    """
    if len(cocone) != len(D.objects) or Z.validate():
        return False
    if any(h.cod is not Z or h.dom is not X or not h.is_valid() for h, X in zip(cocone, D.objects)):
        return False
    if not _commutes(D, cocone):
        return False
    if len(Z) > max_cells:
        raise ValueError(f"bound exceeded: more than {max_cells} cells")
    free = set_colimit(D)
    if targets is None:
        targets = [Z, free.apex]
        if 2 * len(Z) <= max_cells:
            targets.append(coproduct(Z, Z).apex)
    for W in targets:
        # cocones into W correspond to maps out of the free quotient
        for h in iter_homs(free.apex, W, limit=max_cocones):
            legs = [leg.then(h) for leg in free.coprojections]
            fixed: dict[CellId, CellId] = {}
            for leg, k in zip(cocone, legs):
                for x, z in leg.map.items():
                    if fixed.setdefault(z, k.map[x]) != k.map[x]:
                        return False  # no mediating map exists
            if sum(1 for _ in iter_homs(Z, W, limit=2, fixed=fixed)) != 1:
                return False
    return True


# ------------------------------------------------------------ openings, niches, frames


@dataclass(frozen=True)
class PartialLabelling:
    """A shape with some of its faces labelled by cells.

    An opening labels every face of dimension at most k - 2, a niche adds the
    source faces of dimension k - 1, a frame adds the target as well.
    """

    shape: str
    labels: tuple[tuple[FaceAddress, CellId], ...]

    @property
    def opetope(self) -> Opetope:
        return parse_code(self.shape)

    @property
    def dim(self) -> int:
        return self.opetope.dim

    def as_dict(self) -> dict[FaceAddress, CellId]:
        return dict(self.labels)

    def kind(self) -> str:
        o = self.opetope
        k = o.dim
        table = face_table(o)
        have = set(self.as_dict())
        low = {a for a in table.addresses(below=k - 1)}
        src = {(k - 1, c) for c in range(o.arity)} if k else set()
        tgt = {(k - 1, o.arity)} if k else set()
        if have == low:
            return "opening"
        if have == low | src:
            return "niche"
        if have == low | src | tgt:
            return "frame"
        return "partial"


def _extend(
    X: OpetopicSet,
    o: Opetope,
    fixed: dict[FaceAddress, CellId],
    todo: Sequence[FaceAddress],
    rng=None,
) -> Iterator[dict[FaceAddress, CellId]]:
    """Consistent extensions of ``fixed`` to the addresses in ``todo``.

    With ``rng`` the candidates are tried in a shuffled order.
    """
    table = face_table(o)
    by_shape: dict[str, list[Cell]] = {}
    for c in X.ordered():
        by_shape.setdefault(c.shape, []).append(c)
    if rng is not None:
        for pool in by_shape.values():
            rng.shuffle(pool)
    todo = sorted(todo)
    labels = dict(fixed)

    def ok(addr: FaceAddress, cell: Cell) -> bool:
        for sub, z in cell.boundary.items():
            a = table.compose(addr, sub)
            if a in labels and labels[a] != z:
                return False
        return True

    def go(i: int):
        if i == len(todo):
            yield dict(labels)
            return
        addr = todo[i]
        for cell in by_shape.get(table[addr].shape.code, []):
            if ok(addr, cell):
                labels[addr] = cell.id
                yield from go(i + 1)
                del labels[addr]

    yield from go(0)


def _labelling(o: Opetope, labels: Mapping[FaceAddress, CellId]) -> PartialLabelling:
    return PartialLabelling(o.code, tuple(sorted(labels.items())))


def enumerate_openings(X: OpetopicSet, k: int, max_nodes: int = 3, max_arity: int = 3) -> list[PartialLabelling]:
    if k < 1:
        raise ValueError("openings need k >= 1")
    out = []
    for o in enumerate_opetopes(k, max_nodes, max_arity):
        todo = face_table(o).addresses(below=k - 1)
        out.extend(_labelling(o, lab) for lab in _extend(X, o, {}, todo))
    return out


def to_niches(opening: PartialLabelling, X: OpetopicSet) -> list[PartialLabelling]:
    o = opening.opetope
    k = o.dim
    todo = [(k - 1, c) for c in range(o.arity)]
    return [_labelling(o, lab) for lab in _extend(X, o, opening.as_dict(), todo)]


def to_frames(niche: PartialLabelling, X: OpetopicSet) -> list[PartialLabelling]:
    o = niche.opetope
    k = o.dim
    return [_labelling(o, lab) for lab in _extend(X, o, niche.as_dict(), [(k - 1, o.arity)])]


def fill(X: OpetopicSet, frame: PartialLabelling, id: CellId) -> Cell:
    """Add a new cell with the given frame."""
    if frame.kind() != "frame":
        raise ValueError("need a complete frame")
    o = frame.opetope
    k = o.dim
    lab = frame.as_dict()
    return X.add_cell(id, o, [lab[(k - 1, c)] for c in range(o.arity + 1)])


def random_frame(X: OpetopicSet, o: Opetope, rng) -> Optional[PartialLabelling]:
    """A frame of shape ``o`` in ``X`` chosen at random, or None if there is none."""
    o = o.canonical
    todo = face_table(o).addresses(below=o.dim)
    for lab in _extend(X, o, {}, todo, rng):
        return _labelling(o, lab)
    return None
