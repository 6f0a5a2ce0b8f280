"""The category of opetopes: face maps, face tables and the rewriting normal form.

Morphisms are words of generators: face maps ``s_i: x_i -> a`` and
``t: x -> a`` plus the (unique) isomorphisms between presentations of one
opetope.  Faces of faces are identified where composition occurs in the
pasting; :func:`face_table` computes that quotient for each canonical opetope.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Mapping, Optional, Sequence

from opetopic.opetopes import Isomorphism, Opetope, parse_code

SOURCE, TARGET, ISO = "source", "target", "iso"


class IllTypedWord(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    kind: str
    dom: Opetope
    cod: Opetope
    index: Optional[int] = None  # 1-based, sources only

    def __post_init__(self):
        if self.kind == SOURCE:
            if not (self.cod.dim >= 1 and 1 <= (self.index or 0) <= self.cod.arity):
                raise IllTypedWord(f"no source {self.index} in {self.cod.code}")
            if self.dom != self.cod.sources[self.index - 1]:
                raise IllTypedWord("source generator with the wrong domain")
        elif self.kind == TARGET:
            if self.cod.dim < 1 or self.dom != self.cod.target:
                raise IllTypedWord("target generator with the wrong domain")
        elif self.kind == ISO:
            if self.dom.code != self.cod.code:
                raise IllTypedWord("iso generator between non-isomorphic opetopes")
        else:
            raise IllTypedWord(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "_hash", hash((self.kind, self.index, self.dom, self.cod)))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.kind == SOURCE:
            return f"s{self.index}@{self.cod.code}"
        if self.kind == TARGET:
            return f"t@{self.cod.code}"
        return "1" if self.is_identity else f"iso({self.dom.code})"

    @property
    def is_face(self) -> bool:
        return self.kind != ISO

    @property
    def is_identity(self) -> bool:
        return self.kind == ISO and self.dom == self.cod

    @property
    def position(self) -> int:
        """Position among the generators of the codomain: sources first, then t."""
        if self.kind == SOURCE:
            return self.index - 1
        if self.kind == TARGET:
            return self.cod.arity
        raise ValueError("isomorphisms have no face position")

    @property
    def witness(self) -> Isomorphism:
        if self.kind != ISO:
            raise ValueError("only isomorphisms carry a witness")
        return Isomorphism(self.dom, self.cod)

    def to_json(self) -> dict[str, Any]:
        out = {"kind": self.kind, "index": self.index, "at": self.cod.to_json()}
        if self.kind == ISO:
            out["from"] = self.dom.to_json()
        return out


def source(a: Opetope, i: int) -> Generator:
    return Generator(SOURCE, a.sources[i - 1], a, i)


def target(a: Opetope) -> Generator:
    return Generator(TARGET, a.target, a)


@lru_cache(maxsize=1 << 16)
def iso(a: Opetope, b: Opetope) -> Generator:
    return Generator(ISO, a, b)


def identity(a: Opetope) -> Generator:
    return Generator(ISO, a, a)


def face_generator(a: Opetope, position: int) -> Generator:
    return target(a) if position == a.arity else source(a, position + 1)


def generators_of(a: Opetope) -> list[Generator]:
    """``s_1 .. s_m`` in node order, then ``t``; empty for the point."""
    if a.dim == 0:
        return []
    return [source(a, i) for i in range(1, a.arity + 1)] + [target(a)]


@lru_cache(maxsize=1 << 16)
def slide(gamma: Generator, g: Generator) -> tuple[Generator, Generator]:
    """Rewrite ``gamma ; g`` as ``restrict(g, gamma) ; gamma'``."""
    if not gamma.is_face or g.kind != ISO or gamma.cod != g.dom:
        raise IllTypedWord("slide needs a face generator followed by an isomorphism")
    beta = g.cod
    if gamma.kind == TARGET:
        return iso(gamma.dom, beta.target), target(beta)
    j = g.witness.perm[gamma.index - 1] + 1
    return iso(gamma.dom, beta.sources[j - 1]), source(beta, j)


def restrict(g: Generator, gamma: Generator) -> Generator:
    """The unique restriction of the isomorphism ``g`` to the face ``gamma``."""
    if g.kind != ISO or not gamma.is_face or gamma.cod != g.dom:
        raise ValueError("incompatible: the face generator does not land in the domain of g")
    return slide(gamma, g)[0]


# ------------------------------------------------------------ union-find


class UnionFind:
    """Union-find whose representative is always the least element."""

    def __init__(self, elements: Iterable = ()):
        self.parent = {}
        for e in elements:
            self.parent[e] = e

    def add(self, e):
        self.parent.setdefault(e, e)

    def find(self, e):
        root = e
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[e] != root:
            self.parent[e], e = root, self.parent[e]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self) -> list[list]:
        out: dict = {}
        for e in sorted(self.parent):
            out.setdefault(self.find(e), []).append(e)
        return [out[r] for r in sorted(out)]


# ------------------------------------------------------------ face tables

FaceAddress = tuple[int, int]


@dataclass(frozen=True)
class FaceClass:
    dim: int
    index: int
    shape: Opetope
    path: tuple[int, ...]  # generator positions read downwards from the top cell
    boundary: tuple[int, ...]  # class index at dim - 1 for each generator of shape

    @property
    def address(self) -> FaceAddress:
        return (self.dim, self.index)


class FaceTable:
    """Faces of a canonical opetope, one class per face up to identification."""

    def __init__(self, opetope: Opetope, classes: dict[int, tuple[FaceClass, ...]]):
        self.opetope = opetope
        self.classes = classes

    @property
    def dim(self) -> int:
        return self.opetope.dim

    def counts(self) -> tuple[int, ...]:
        """Class counts from the top dimension down to 0."""
        return tuple(len(self.classes[m]) for m in range(self.dim, -1, -1))

    def __getitem__(self, address: FaceAddress) -> FaceClass:
        m, c = address
        return self.classes[m][c]

    def addresses(self, below: Optional[int] = None) -> list[FaceAddress]:
        top = self.dim if below is None else below - 1
        return [(m, c) for m in range(top + 1) for c in range(len(self.classes[m]))]

    def address(self, path: Sequence[int]) -> FaceAddress:
        cls = self.classes[self.dim][0]
        for p in path:
            cls = self.classes[cls.dim - 1][cls.boundary[p]]
        return cls.address

    def compose(self, outer: FaceAddress, inner: FaceAddress) -> FaceAddress:
        """Address of face ``inner`` (of the shape at ``outer``) inside this opetope."""
        cls = self[outer]
        sub = face_table(cls.shape)[inner]
        for p in sub.path:
            cls = self.classes[cls.dim - 1][cls.boundary[p]]
        return cls.address

    def to_json(self) -> dict[str, Any]:
        out = {}
        for m in range(self.dim, -1, -1):
            out[f"dim {m}"] = [
                {
                    "class": c.index,
                    "shape": c.shape.code,
                    "boundary": {
                        _gen_name(c.shape, p): b for p, b in enumerate(c.boundary)
                    },
                }
                for c in self.classes[m]
            ]
        return out


def _gen_name(shape: Opetope, position: int) -> str:
    return "t" if position == shape.arity else f"s{position + 1}"


_TABLES: dict[str, FaceTable] = {}


def face_table(a: Opetope) -> FaceTable:
    """Face table of the canonical presentation of ``a`` (memoized by code)."""
    table = _TABLES.get(a.code)
    if table is None:
        table = _build_table(a.canonical)
        _TABLES[a.code] = table
    return table


def _build_table(a: Opetope) -> FaceTable:
    k = a.dim
    if k == 0:
        return FaceTable(a, {0: (FaceClass(0, 0, a, (), ()),)})
    gens = list(a.sources) + [a.target]
    subs = [face_table(g) for g in gens]
    classes: dict[int, tuple[FaceClass, ...]] = {
        k: (FaceClass(k, 0, a, (), tuple(range(len(gens)))),)
    }
    uf = UnionFind(
        (p, m, c)
        for p, sub in enumerate(subs)
        for m in range(k - 1)
        for c in range(len(sub.classes[m]))
    )
    if k >= 2:
        tpos = a.arity
        target_gen = gens[tpos].arity  # position of t among the target's generators

        def side(port):
            node, slot = port
            if node == 0:
                return (tpos, k - 2, target_gen if slot == 0 else slot - 1)
            if slot == 0:
                return (node - 1, k - 2, gens[node - 1].arity)
            return (node - 1, k - 2, slot - 1)

        work = [(side(y), side(x)) for y, x in a.wiring.map]
        while work:
            e1, e2 = work.pop()
            if not uf.union(e1, e2):
                continue
            (p1, m, c1), (p2, _, c2) = e1, e2
            f1, f2 = subs[p1].classes[m][c1], subs[p2].classes[m][c2]
            if f1.shape != f2.shape:
                raise AssertionError("identified faces have different shapes")
            for g in range(len(f1.boundary)):
                work.append(((p1, m - 1, f1.boundary[g]), (p2, m - 1, f2.boundary[g])))

    index: dict = {}
    for m in range(k - 2, -1, -1):
        groups = [g for g in uf.groups() if g[0][1] == m]
        groups.sort(key=lambda g: (g[0][0], g[0][2]))
        for ci, g in enumerate(groups):
            for e in g:
                index[e] = ci
    classes[k - 1] = tuple(
        FaceClass(k - 1, p, g, (p,), tuple(index.get((p, k - 2, b), b) for b in range(len(g.sources) + 1 if g.dim else 0)))
        for p, g in enumerate(gens)
    )
    for m in range(k - 2, -1, -1):
        reps: dict[int, tuple[int, int]] = {}
        for (p, mm, c), ci in sorted(index.items()):
            if mm == m and ci not in reps:
                reps[ci] = (p, c)
        out = []
        for ci in range(len(reps)):
            p, c = reps[ci]
            f = subs[p].classes[m][c]
            bd = tuple(index[(p, m - 1, b)] for b in f.boundary)
            out.append(FaceClass(m, ci, f.shape, (p,) + f.path, bd))
        classes[m] = tuple(out)
    return FaceTable(a, classes)


# ------------------------------------------------------------ words


@dataclass(frozen=True)
class MorphismWord:
    steps: tuple[Generator, ...]

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise IllTypedWord("ill-typed word: empty")
        for a, b in zip(steps, steps[1:]):
            if a.cod != b.dom:
                raise IllTypedWord(f"ill-typed word: {a!r} does not compose with {b!r}")
        object.__setattr__(self, "_hash", hash(steps))

    def __hash__(self):
        return self._hash

    @property
    def dom(self) -> Opetope:
        return self.steps[0].dom

    @property
    def cod(self) -> Opetope:
        return self.steps[-1].cod

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def then(self, other: MorphismWord) -> MorphismWord:
        return MorphismWord(self.steps + other.steps)

    def to_json(self) -> list[dict[str, Any]]:
        return [g.to_json() for g in self.steps]

    @classmethod
    def from_json(cls, records: Sequence[Mapping[str, Any]]) -> MorphismWord:
        steps: list[Generator] = []
        for rec in records:
            at = _opetope_from(rec["at"])
            kind = rec["kind"]
            if kind == ISO:
                start = steps[-1].cod if steps else _opetope_from(rec["from"])
                steps.append(iso(start, at))
            elif kind == TARGET:
                steps.append(target(at))
            elif kind == SOURCE:
                steps.append(source(at, int(rec["index"])))
            else:
                raise IllTypedWord(f"unknown generator kind {kind!r}")
        return cls(tuple(steps))


def _opetope_from(data) -> Opetope:
    return parse_code(data) if isinstance(data, str) else Opetope.from_json(data)


def word(*steps: Generator) -> MorphismWord:
    return MorphismWord(tuple(steps))


def rewrite_once(steps: Sequence[Generator]) -> Optional[tuple[str, list[Generator]]]:
    """Apply the leftmost redex of the oriented rules, if any."""
    steps = list(steps)
    for i in range(len(steps) - 1):
        a, b = steps[i], steps[i + 1]
        if a.is_face and b.kind == ISO:
            steps[i : i + 2] = list(slide(a, b))
            return "slide", steps
        if a.kind == ISO and b.kind == ISO:
            steps[i : i + 2] = [iso(a.dom, b.cod)]
            rule = "compose-lower" if a.dom.dim < b.cod.dim else "compose"
            return rule, steps
        if a.is_identity and b.is_face:
            del steps[i]
            return "unit", steps
    return None


@lru_cache(maxsize=1 << 18)
def normalize_counted(w: MorphismWord) -> tuple[MorphismWord, int]:
    steps = list(w.steps)
    count = 0
    while True:
        r = rewrite_once(steps)
        if r is None:
            return MorphismWord(tuple(steps)), count
        steps = r[1]
        count += 1


def normalize(w: MorphismWord) -> MorphismWord:
    """Normal form: an optional non-identity isomorphism, then face generators."""
    return normalize_counted(w)[0]


def face_path(w: MorphismWord) -> tuple[int, ...]:
    """Generator positions, read from the canonical codomain downwards."""
    cod = w.cod
    canon = cod.canonical
    steps = w.steps if canon is cod else w.steps + (iso(cod, canon),)
    nf = normalize(MorphismWord(steps))
    faces = [g for g in nf.steps if g.is_face]
    return tuple(g.position for g in reversed(faces))


@lru_cache(maxsize=1 << 18)
def face_address(w: MorphismWord) -> FaceAddress:
    return face_table(w.cod).address(face_path(w))


def words_equal(w1: MorphismWord, w2: MorphismWord) -> bool:
    if w1.dom != w2.dom or w1.cod != w2.cod:
        raise ValueError("not parallel")
    if normalize(w1) == normalize(w2):
        return True
    return face_address(w1) == face_address(w2)


# ------------------------------------------------------------ hom-sets


@dataclass(frozen=True)
class Morphism:
    """A morphism ``dom -> cod``: the face of ``cod`` at ``address``."""

    dom: Opetope
    cod: Opetope
    address: FaceAddress

    def word(self) -> MorphismWord:
        canon = self.cod.canonical
        table = face_table(canon)
        cls = table[self.address]
        faces = []
        current = canon
        for p in cls.path:
            g = face_generator(current, p)
            faces.append(g)
            current = g.dom
        steps = [iso(self.dom, current)] + list(reversed(faces))
        if canon is not self.cod:
            steps.append(iso(canon, self.cod))
        return normalize(MorphismWord(tuple(steps)))

    def then(self, other: Morphism) -> Morphism:
        if self.cod.code != other.dom.code:
            raise ValueError("morphisms are not composable")
        inner = self.address
        return Morphism(self.dom, other.cod, face_table(other.cod).compose(other.address, inner))


def hom(x: Opetope, a: Opetope) -> list[Morphism]:
    if x.dim > a.dim:
        return []
    if x.dim == a.dim:
        return [Morphism(x, a, (a.dim, 0))] if x.code == a.code else []
    table = face_table(a)
    return [Morphism(x, a, c.address) for c in table.classes[x.dim] if c.shape.code == x.code]


def morphism_of(w: MorphismWord) -> Morphism:
    return Morphism(w.dom, w.cod, face_address(w))


def parallel_words(words: Iterable[MorphismWord]) -> dict[tuple, list[MorphismWord]]:
    out: dict[tuple, list[MorphismWord]] = {}
    for w in words:
        out.setdefault((w.dom, w.cod), []).append(w)
    return out
