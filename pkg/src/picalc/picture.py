"""Pictures over a presentation, stored as rotation systems.

Combinatorial model
-------------------
Each arc with endpoints has two *darts* ``(arc_id, end)``.  Every vertex
lists the darts attached to it in positive rotation order; the boundary
circle lists its darts in the order met by the positive walk along
``∂P``.  A *corner* is a gap in a rotation: gap ``g`` lies just before
slot ``g``, so the corner word of gap ``g`` is read starting at slot ``g``.

Corners are written as triples::

    ("v", vertex_id, gap)     corner of a vertex
    ("b", 0, gap)             corner of the boundary circle
    ("l", arc_id, side)       side of a free loop (0: the side its normal points to)

An arc stores the sign read where it meets end 0.  At end 1 the sign is
forced by planarity: it is opposite when both ends lie on vertices or both
on the boundary, and equal when one end is on the boundary.

Faces come from face tracing.  Pictures may be disconnected, so the
embedding also records, for every component other than the one holding
the boundary, which of its faces is outermost and which face of another
component it sits in.  Regions are faces glued along those records.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

from .presentation import Presentation
from .words import Word

__all__ = [
    "Dart",
    "Corner",
    "Vertex",
    "Boundary",
    "Arc",
    "Nest",
    "Picture",
    "Finding",
    "Report",
    "Dipole",
    "DipoleClass",
    "PictureError",
    "InvalidCorner",
    "InvalidVertex",
    "NotConnected",
    "NotSpherical",
    "InconsistentEmbedding",
    "validate",
    "corner_word",
    "corners_of",
    "basic_corners",
    "boundary_label",
    "is_spherical",
    "find_dipoles",
    "find_folding_pairs",
    "classify_two_vertex_subpicture",
    "signed_vertex_count",
    "mirror",
    "canonical_code",
    "is_isomorphic",
    "component_shape_code",
    "assemble",
    "UnionFind",
]

Dart = tuple[int, int]
Corner = tuple[str, int, int]
Node = tuple[str, int]
BOUNDARY: Node = ("b", 0)


class PictureError(ValueError):
    pass


class InvalidCorner(PictureError):
    pass


class InvalidVertex(PictureError):
    pass


class NotConnected(PictureError):
    pass


class NotSpherical(PictureError):
    pass


class InconsistentEmbedding(PictureError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: int
    relator: int
    sign: int
    rotation: tuple[Dart, ...]
    basepoint: int = 0


@dataclass(frozen=True)
class Boundary:
    rotation: tuple[Dart, ...] = ()
    basepoint: int = 0


@dataclass(frozen=True)
class Arc:
    id: int
    label: str
    orientation: int = 1
    free_loop: bool = False


class Nest(NamedTuple):
    outer: Corner
    parent: Corner


class UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        parent = self.parent
        root = x
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


class _MapIndex:
    """Face and component structure of the arcs and rotations alone."""

    def __init__(self, vertices: Sequence[Vertex], boundary: Boundary, arcs: Sequence[Arc]):
        self.vertices = {v.id: v for v in vertices}
        self.arcs = {a.id: a for a in arcs}
        if len(self.vertices) != len(vertices):
            raise PictureError("duplicate vertex id")
        if len(self.arcs) != len(arcs):
            raise PictureError("duplicate arc id")
        self.boundary = boundary
        self.rotations: dict[Node, tuple[Dart, ...]] = {("v", v.id): tuple(v.rotation) for v in vertices}
        self.rotations[BOUNDARY] = tuple(boundary.rotation)
        self.position: dict[Dart, tuple[Node, int]] = {}
        for node, rot in self.rotations.items():
            for p, d in enumerate(rot):
                d = tuple(d)
                if d in self.position:
                    raise PictureError(f"dart {d} attached twice")
                if d[0] not in self.arcs or d[1] not in (0, 1):
                    raise PictureError(f"dart {d} names no arc end")
                if self.arcs[d[0]].free_loop:
                    raise PictureError(f"free loop {d[0]} cannot have endpoints")
                self.position[d] = (node, p)
        for a in arcs:
            if not a.free_loop and ((a.id, 0) not in self.position or (a.id, 1) not in self.position):
                raise PictureError(f"arc {a.id} has an unattached end")
            if a.orientation not in (1, -1):
                raise PictureError(f"arc {a.id} orientation must be +1 or -1")
        self.loops = sorted(a.id for a in arcs if a.free_loop)
        self._trace_faces()
        self._components()

    # -- local structure ---------------------------------------------------

    def degree(self, node: Node) -> int:
        if node[0] == "l":
            return 2
        return len(self.rotations[node])

    def corners_of_node(self, node: Node) -> list[Corner]:
        return [(node[0], node[1], g) for g in range(max(self.degree(node), 1))]

    def read_sign(self, d: Dart) -> int:
        arc = self.arcs[d[0]]
        if d[1] == 0:
            return arc.orientation
        rho0 = -1 if self.position[(d[0], 0)][0] == BOUNDARY else 1
        rho1 = -1 if self.position[(d[0], 1)][0] == BOUNDARY else 1
        return -arc.orientation * rho0 * rho1

    def letter(self, d: Dart) -> tuple[str, int]:
        return (self.arcs[d[0]].label, self.read_sign(d))

    def next_corner(self, c: Corner) -> Corner:
        node = (c[0], c[1])
        rot = self.rotations[node]
        k = len(rot)
        d = rot[c[2] % k] if c[0] == "v" else rot[(c[2] - 1) % k]
        node2, p = self.position[(d[0], 1 - d[1])]
        if node2[0] == "v":
            return ("v", node2[1], (p + 1) % len(self.rotations[node2]))
        return ("b", 0, p)

    def _trace_faces(self) -> None:
        self.face_of: dict[Corner, int] = {}
        self.faces: list[list[Corner]] = []
        nodes = list(self.rotations) + [("l", a) for a in self.loops]
        for node in nodes:
            for c in self.corners_of_node(node):
                if c in self.face_of:
                    continue
                idx = len(self.faces)
                if node[0] == "l" or self.degree(node) == 0:
                    cycle = [c]
                else:
                    cycle = []
                    x = c
                    while x not in self.face_of:
                        self.face_of[x] = idx
                        cycle.append(x)
                        x = self.next_corner(x)
                    if x != c:
                        raise PictureError("rotation system is not a permutation")
                self.face_of[c] = idx
                self.faces.append(cycle)

    def _components(self) -> None:
        uf = UnionFind()
        for node in self.rotations:
            uf.find(node)
        for a in self.arcs.values():
            if not a.free_loop:
                uf.union(self.position[(a.id, 0)][0], self.position[(a.id, 1)][0])
        self.comp_of: dict[Node, Node] = {node: uf.find(node) for node in self.rotations}
        for a in self.loops:
            self.comp_of[("l", a)] = ("l", a)
        self.members: dict[Node, list[Node]] = defaultdict(list)
        for node, comp in self.comp_of.items():
            self.members[comp].append(node)
        self.root = self.comp_of[BOUNDARY]
        self.comp_faces: dict[Node, list[int]] = defaultdict(list)
        for idx, cyc in enumerate(self.faces):
            comp = self.comp_of[(cyc[0][0], cyc[0][1])]
            self.comp_faces[comp].append(idx)

    def comp_of_corner(self, c: Corner) -> Node:
        return self.comp_of[(c[0], c[1])]

    def has_corner(self, c: Corner) -> bool:
        return c in self.face_of

    def face_rep(self, idx: int) -> Corner:
        return min(self.faces[idx])

    def euler_defects(self) -> list[Node]:
        bad = []
        for comp, nodes in self.members.items():
            if comp[0] == "l":
                continue
            V = len(nodes)
            E = sum(len(self.rotations[n]) for n in nodes) // 2
            F = len(self.comp_faces[comp])
            if V - E + F != 2:
                bad.append(comp)
        return bad


def _nest_from_regions(ix: _MapIndex, find) -> tuple[Nest, ...]:
    """Derive the nesting records from a region partition of the corners."""
    region_members: dict[object, list[tuple[Node, int]]] = defaultdict(list)
    region_of_face: dict[int, object] = {}
    for idx, cyc in enumerate(ix.faces):
        r = find(cyc[0])
        region_of_face[idx] = r
        comp = ix.comp_of_corner(cyc[0])
        region_members[r].append((comp, idx))
    outer_face: dict[Node, int | None] = {ix.root: None}
    nests: list[Nest] = []
    queue = [ix.root]
    for comp in queue:
        outer_region = None if outer_face[comp] is None else region_of_face[outer_face[comp]]
        for idx in ix.comp_faces[comp]:
            r = region_of_face[idx]
            if r == outer_region:
                if idx != outer_face[comp]:
                    raise InconsistentEmbedding(f"component {comp} meets one region through two faces")
                continue
            for comp2, idx2 in region_members[r]:
                if comp2 == comp:
                    if idx2 != idx:
                        raise InconsistentEmbedding(f"component {comp} meets one region through two faces")
                    continue
                if comp2 in outer_face:
                    raise InconsistentEmbedding(f"component {comp2} is nested twice")
                outer_face[comp2] = idx2
                nests.append(Nest(ix.face_rep(idx2), ix.face_rep(idx)))
                queue.append(comp2)
    missing = set(ix.members) - set(outer_face)
    if missing:
        raise InconsistentEmbedding(f"components {sorted(missing)} are not reachable from the boundary")
    return tuple(sorted(nests))


def assemble(
    vertices: Iterable[Vertex],
    boundary: Boundary,
    arcs: Iterable[Arc],
    links: Iterable[tuple[object, object]] = (),
    presentation_ref: str | None = None,
) -> "Picture":
    """Build a picture whose regions are faces joined by ``links``.

    Link endpoints may be corners of the new picture or arbitrary keys
    that only serve to chain corners together.
    """
    vertices = tuple(sorted(vertices, key=lambda v: v.id))
    arcs = tuple(sorted(arcs, key=lambda a: a.id))
    ix = _MapIndex(vertices, boundary, arcs)
    uf = UnionFind()
    for cyc in ix.faces:
        for c in cyc:
            uf.union(cyc[0], c)
    for a, b in links:
        uf.union(a, b)
    nesting = _nest_from_regions(ix, uf.find)
    return Picture(vertices, boundary, arcs, nesting, presentation_ref)


@dataclass(frozen=True)
class Picture:
    vertices: tuple[Vertex, ...] = ()
    boundary: Boundary = field(default_factory=Boundary)
    arcs: tuple[Arc, ...] = ()
    nesting: tuple[Nest, ...] = ()
    presentation_ref: str | None = None

    @cached_property
    def index(self) -> _MapIndex:
        return _MapIndex(self.vertices, self.boundary, self.arcs)

    def vertex(self, vid: int) -> Vertex:
        try:
            return self.index.vertices[vid]
        except KeyError:
            raise InvalidVertex(f"no vertex {vid}") from None

    def arc(self, aid: int) -> Arc:
        return self.index.arcs[aid]

    @cached_property
    def _region_find(self):
        ix = self.index
        uf = UnionFind()
        for cyc in ix.faces:
            for c in cyc:
                uf.union(cyc[0], c)
        for nest in self.nesting:
            if not (ix.has_corner(nest.outer) and ix.has_corner(nest.parent)):
                raise InconsistentEmbedding(f"nesting record {nest} names a missing corner")
            uf.union(nest.outer, nest.parent)
        return {c: uf.find(c) for c in ix.face_of}

    def region_of(self, c: Corner) -> Corner:
        try:
            return self._region_find[tuple(c)]
        except KeyError:
            raise InvalidCorner(f"no corner {c}") from None

    def face_of(self, c: Corner) -> int:
        try:
            return self.index.face_of[tuple(c)]
        except KeyError:
            raise InvalidCorner(f"no corner {c}") from None

    def region_links(self, broken_faces: Iterable[int] = ()) -> list[tuple[Corner, Corner]]:
        """Links reproducing the current regions, minus the internal
        coherence of ``broken_faces``."""
        ix = self.index
        broken = set(broken_faces)
        links = []
        for idx, cyc in enumerate(ix.faces):
            if idx in broken:
                continue
            links.extend((cyc[0], c) for c in cyc[1:])
        links.extend((n.outer, n.parent) for n in self.nesting)
        return links

    def children(self, comp: Node) -> list[Node]:
        ix = self.index
        return [ix.comp_of_corner(n.outer) for n in self.nesting if ix.comp_of_corner(n.parent) == comp]

    def nest_of(self, comp: Node) -> Nest | None:
        ix = self.index
        for n in self.nesting:
            if ix.comp_of_corner(n.outer) == comp:
                return n
        return None

    def is_empty(self) -> bool:
        return not self.vertices and not self.arcs

    def next_vertex_id(self) -> int:
        return max((v.id for v in self.vertices), default=-1) + 1

    def next_arc_id(self) -> int:
        return max((a.id for a in self.arcs), default=-1) + 1

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        ix = self.index
        arcs = []
        for a in self.arcs:
            rec: dict = {"id": a.id, "label": a.label}
            if a.free_loop:
                rec["free_loop"] = True
            else:
                ends = []
                for e in (0, 1):
                    node, p = ix.position[(a.id, e)]
                    ends.append({"node": "boundary" if node == BOUNDARY else node[1], "slot": p})
                rec["endpoints"] = ends
            rec["orientation"] = a.orientation
            arcs.append(rec)
        return {
            "presentation_ref": self.presentation_ref,
            "vertices": [
                {
                    "id": v.id,
                    "relator": v.relator,
                    "sign": v.sign,
                    "rotation": [list(d) for d in v.rotation],
                    "basepoint": v.basepoint,
                }
                for v in self.vertices
            ],
            "boundary": {
                "rotation": [list(d) for d in self.boundary.rotation],
                "basepoint": self.boundary.basepoint,
            },
            "arcs": arcs,
            "nesting": [{"outer": _corner_json(n.outer), "parent": _corner_json(n.parent)} for n in self.nesting],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Picture":
        try:
            vertices = tuple(
                Vertex(
                    int(v["id"]),
                    int(v["relator"]),
                    int(v["sign"]),
                    tuple((int(a), int(e)) for a, e in v["rotation"]),
                    int(v.get("basepoint", 0)),
                )
                for v in doc.get("vertices", [])
            )
            b = doc.get("boundary", {}) or {}
            boundary = Boundary(tuple((int(a), int(e)) for a, e in b.get("rotation", [])), int(b.get("basepoint", 0)))
            arcs = tuple(
                Arc(int(a["id"]), str(a["label"]), int(a.get("orientation", 1)), bool(a.get("free_loop", False)))
                for a in doc.get("arcs", [])
            )
            nesting = tuple(
                Nest(_corner_from_json(n["outer"]), _corner_from_json(n["parent"])) for n in doc.get("nesting", [])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise PictureError(f"malformed picture document: {exc}") from None
        pic = cls(vertices, boundary, arcs, nesting, doc.get("presentation_ref"))
        ix = pic.index
        for a in doc.get("arcs", []):
            if "endpoints" in a:
                for e, ep in enumerate(a["endpoints"]):
                    node = BOUNDARY if ep["node"] == "boundary" else ("v", int(ep["node"]))
                    if ix.position.get((int(a["id"]), e)) != (node, int(ep["slot"])):
                        raise PictureError(f"arc {a['id']} endpoint {e} disagrees with the rotations")
        # normalise the nesting records to canonical face representatives
        return assemble(vertices, boundary, arcs, pic.region_links(), pic.presentation_ref)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "Picture":
        return cls.from_json(json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "Picture":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def _corner_json(c: Corner) -> dict:
    kind, ident, g = c
    if kind == "v":
        return {"node": ident, "gap": g}
    if kind == "b":
        return {"node": "boundary", "gap": g}
    return {"loop": ident, "side": g}


def _corner_from_json(d: dict) -> Corner:
    if "loop" in d:
        return ("l", int(d["loop"]), int(d["side"]))
    if d["node"] == "boundary":
        return ("b", 0, int(d["gap"]))
    return ("v", int(d["node"]), int(d["gap"]))


# -- read-only structure -----------------------------------------------------


class Finding(NamedTuple):
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class Report:
    findings: tuple[Finding, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.findings

    def __bool__(self) -> bool:
        return self.valid


def _vertex_word(ix: _MapIndex, vid: int, gap: int) -> Word:
    rot = ix.rotations[("v", vid)]
    k = len(rot)
    return Word.raw(ix.letter(rot[(gap + j) % k]) for j in range(k))


def corner_word(pic: Picture, c: Corner) -> Word:
    """The word read around a vertex starting at corner ``c``."""
    c = tuple(c)
    if c[0] != "v" or c[1] not in pic.index.vertices:
        raise InvalidCorner(f"{c} is not a vertex corner")
    k = len(pic.index.rotations[("v", c[1])])
    if not 0 <= c[2] < max(k, 1):
        raise InvalidCorner(f"gap {c[2]} out of range at vertex {c[1]}")
    return _vertex_word(pic.index, c[1], c[2])


def corners_of(pic: Picture, vid: int) -> list[Corner]:
    pic.vertex(vid)
    return pic.index.corners_of_node(("v", vid))


def _target_word(P: Presentation, v: Vertex) -> Word:
    r = P.relators[v.relator]
    return r if v.sign > 0 else ~r


def basic_corners(pic: Picture, vid: int, P: Presentation) -> list[Corner]:
    v = pic.vertex(vid)
    target = _target_word(P, v)
    return [c for c in corners_of(pic, vid) if corner_word(pic, c) == target]


def boundary_label(pic: Picture) -> Word:
    ix = pic.index
    rot = pic.boundary.rotation
    k = len(rot)
    g = pic.boundary.basepoint
    return Word.raw(ix.letter(rot[(g + j) % k]) for j in range(k))


def is_spherical(pic: Picture) -> bool:
    return not pic.boundary.rotation


def signed_vertex_count(pic: Picture, P: Presentation | None = None) -> dict[int, int]:
    counts: dict[int, int] = {}
    if P is not None:
        counts = {i: 0 for i in range(len(P.relators))}
    for v in pic.vertices:
        counts[v.relator] = counts.get(v.relator, 0) + v.sign
    return counts


def validate(pic: Picture, P: Presentation) -> Report:
    """Check structure, planarity, nesting, labels and basepoints."""
    found: list[Finding] = []
    try:
        ix = pic.index
    except PictureError as exc:
        return Report((Finding("Structure", str(exc)),))
    for comp in ix.euler_defects():
        found.append(Finding("Planarity", f"component {comp} fails V - E + F = 2"))
    if pic.boundary.rotation and not 0 <= pic.boundary.basepoint < len(pic.boundary.rotation):
        found.append(Finding("Basepoint", "global basepoint gap out of range"))
    try:
        pic.region_of(("b", 0, 0))
        derived = assemble(pic.vertices, pic.boundary, pic.arcs, pic.region_links()).nesting
        if derived != tuple(sorted(pic.nesting)):
            stored = {ix.comp_of_corner(n.outer): (ix.face_of[n.outer], ix.face_of[n.parent]) for n in pic.nesting}
            again = {ix.comp_of_corner(n.outer): (ix.face_of[n.outer], ix.face_of[n.parent]) for n in derived}
            if stored != again or len(pic.nesting) != len(derived):
                found.append(Finding("Nesting", "nesting records do not form a forest rooted at the boundary"))
    except PictureError as exc:
        found.append(Finding("Nesting", str(exc)))
    alphabet = set(P.alphabet)
    for a in pic.arcs:
        if a.label not in alphabet:
            found.append(Finding("Label", f"arc {a.id} label {a.label!r} is not a generator"))
    for v in pic.vertices:
        if not 0 <= v.relator < len(P.relators):
            found.append(Finding("Relator", f"vertex {v.id} names relator {v.relator}"))
            continue
        if v.sign not in (1, -1):
            found.append(Finding("Sign", f"vertex {v.id} has sign {v.sign}"))
            continue
        target = _target_word(P, v)
        k = len(v.rotation)
        if k != len(target):
            found.append(Finding("CornerWord", f"vertex {v.id} has {k} slots, relator has length {len(target)}"))
            continue
        rotations = set(target.rotations())
        for g in range(k):
            w = _vertex_word(ix, v.id, g)
            if w not in rotations:
                found.append(Finding("CornerWord", f"vertex {v.id} corner {g} reads {w}, expected a rotation of {target}"))
                break
        if not 0 <= v.basepoint < max(k, 1):
            found.append(Finding("Basepoint", f"vertex {v.id} basepoint gap out of range"))
        elif _vertex_word(ix, v.id, v.basepoint) != target:
            found.append(Finding("Basepoint", f"vertex {v.id} basepoint is not in a basic corner"))
    return Report(tuple(found))


# -- dipoles -------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Dipole:
    arc: int
    c1: Corner
    c2: Corner


def find_dipoles(pic: Picture, P: Presentation) -> list[Dipole]:
    ix = pic.index
    out: set[Dipole] = set()
    for a in pic.arcs:
        if a.free_loop:
            continue
        (n0, p0), (n1, p1) = ix.position[(a.id, 0)], ix.position[(a.id, 1)]
        if n0[0] != "v" or n1[0] != "v" or n0 == n1:
            continue
        u, v = ix.vertices[n0[1]], ix.vertices[n1[1]]
        if u.relator != v.relator or u.sign != -v.sign:
            continue
        ku, kv = len(u.rotation), len(v.rotation)
        for c1, c2 in (
            (("v", u.id, p0), ("v", v.id, (p1 + 1) % kv)),
            (("v", u.id, (p0 + 1) % ku), ("v", v.id, p1)),
        ):
            if pic.region_of(c1) != pic.region_of(c2):
                continue
            if corner_word(pic, c1) == ~corner_word(pic, c2):
                out.add(Dipole(a.id, c1, c2))
    return sorted(out)


def _two_vertex_component(pic: Picture, u: int, v: int) -> Node:
    ix = pic.index
    cu, cv = ix.comp_of[("v", u)], ix.comp_of[("v", v)]
    if cu != cv:
        raise NotConnected(f"vertices {u} and {v} lie in different components")
    if set(ix.members[cu]) != {("v", u), ("v", v)}:
        raise NotSpherical(f"the component of vertices {u}, {v} contains other nodes")
    return cu


def _bundle_offset(pic: Picture, u: int, v: int) -> int:
    """The ``f`` with vertex v's basepoint face equal to the face of u-gap
    ``basepoint(u) + f*len(root)`` (measured in arc crossings)."""
    ix = pic.index
    bu = pic.vertex(u).basepoint
    target = pic.face_of(("v", v, pic.vertex(v).basepoint))
    k = len(ix.rotations[("v", u)])
    for n in range(k):
        if ix.face_of[("v", u, (bu + n) % k)] == target:
            return n
    raise AssertionError("basepoint face not found on the bundle")


class DipoleClass(NamedTuple):
    kind: str  # FoldingPair | CompleteDipole | PrimitiveDipole | NotADipole
    exponent: int | None = None


def classify_two_vertex_subpicture(pic: Picture, v1: int, v2: int, P: Presentation) -> DipoleClass:
    if v1 == v2:
        raise InvalidVertex("need two distinct vertices")
    _two_vertex_component(pic, v1, v2)
    a, b = pic.vertex(v1), pic.vertex(v2)
    if a.relator != b.relator or a.sign != -b.sign:
        return DipoleClass("NotADipole")
    ix = pic.index
    arcs = {d[0] for d in a.rotation}
    dip_arcs = {d.arc for d in find_dipoles(pic, P) if d.c1[1] in (v1, v2) and d.c2[1] in (v1, v2)}
    if arcs != dip_arcs or any(ix.position[(x, e)][0][1] not in (v1, v2) for x in arcs for e in (0, 1)):
        return DipoleClass("NotADipole")
    if pic.region_of(("v", v1, a.basepoint)) == pic.region_of(("v", v2, b.basepoint)):
        return DipoleClass("FoldingPair", 0)
    root, period = P.root_periods[a.relator]
    n = _bundle_offset(pic, v1, v2)
    f = n // len(root)
    if period > 1 and gcd(f, period) == 1:
        return DipoleClass("PrimitiveDipole", f)
    return DipoleClass("CompleteDipole", f)


def is_folding_pair(pic: Picture, u: int, v: int, P: Presentation | None = None) -> bool:
    """Whether ``u, v`` form a childless component that is a folding pair."""
    ix = pic.index
    if u == v or u not in ix.vertices or v not in ix.vertices:
        return False
    comp = ix.comp_of[("v", u)]
    if ix.comp_of[("v", v)] != comp or set(ix.members[comp]) != {("v", u), ("v", v)}:
        return False
    if pic.children(comp):
        return False
    a, b = ix.vertices[u], ix.vertices[v]
    if a.relator != b.relator or a.sign != -b.sign:
        return False
    for d in a.rotation:
        if ix.position[(d[0], 1 - d[1])][0] != ("v", v):
            return False
    return pic.region_of(("v", u, a.basepoint)) == pic.region_of(("v", v, b.basepoint))


def find_folding_pairs(pic: Picture, P: Presentation | None = None) -> list[tuple[int, int, Corner]]:
    """Folding pairs as ``(u, v, region)`` with ``u < v``."""
    ix = pic.index
    out = []
    for comp, nodes in ix.members.items():
        if len(nodes) != 2 or any(n[0] != "v" for n in nodes):
            continue
        u, v = sorted(n[1] for n in nodes)
        if is_folding_pair(pic, u, v, P):
            nest = pic.nest_of(comp)
            out.append((u, v, pic.region_of(nest.parent)))
    return sorted(out)


# -- mirror images and isomorphism ---------------------------------------------


def _mirror_corner(ix: _MapIndex, c: Corner) -> Corner:
    if c[0] == "l":
        return c
    k = ix.degree((c[0], c[1]))
    return (c[0], c[1], (k - c[2]) % k if k else 0)


def mirror(pic: Picture) -> Picture:
    """Reflect the ambient disk: rotations reverse, signs and normals flip."""
    ix = pic.index
    vertices = tuple(
        Vertex(v.id, v.relator, -v.sign, tuple(reversed(v.rotation)), (len(v.rotation) - v.basepoint) % max(len(v.rotation), 1))
        for v in pic.vertices
    )
    k = len(pic.boundary.rotation)
    boundary = Boundary(tuple(reversed(pic.boundary.rotation)), (k - pic.boundary.basepoint) % k if k else 0)
    arcs = tuple(a if a.free_loop else Arc(a.id, a.label, -a.orientation) for a in pic.arcs)
    nesting = tuple(sorted(Nest(_mirror_corner(ix, n.outer), _mirror_corner(ix, n.parent)) for n in pic.nesting))
    return assemble(vertices, boundary, arcs, [(n.outer, n.parent) for n in nesting], pic.presentation_ref)


def _traverse(ix: _MapIndex, start: Node, offset: int):
    order = [start]
    off = {start: offset}
    num = {start: 0}
    desc = []
    for node in order:
        rot = ix.rotations[node]
        k = len(rot)
        o = off[node]
        if node[0] == "v":
            v = ix.vertices[node[1]]
            info = ("v", v.relator, v.sign, k, (v.basepoint - o) % k if k else 0)
        else:
            info = ("b", 0, 0, k, (ix.boundary.basepoint - o) % k if k else 0)
        slots = []
        for j in range(k):
            d = rot[(o + j) % k]
            node2, p2 = ix.position[(d[0], 1 - d[1])]
            if node2 not in num:
                num[node2] = len(order)
                order.append(node2)
                off[node2] = p2
            k2 = len(ix.rotations[node2])
            slots.append((ix.arcs[d[0]].label, ix.read_sign(d), num[node2], (p2 - off[node2]) % k2))
        desc.append((info, tuple(slots)))
    faces: dict[int, int] = {}
    for node in order:
        k = len(ix.rotations[node])
        for j in range(max(k, 1)):
            f = ix.face_of[(node[0], node[1], (off[node] + j) % k if k else 0)]
            faces.setdefault(f, len(faces))
    return tuple(desc), faces


def _children_by_face(pic: Picture) -> dict[int, list[Node]]:
    ix = pic.index
    out: dict[int, list[Node]] = defaultdict(list)
    for n in pic.nesting:
        out[ix.face_of[n.parent]].append(ix.comp_of_corner(n.outer))
    return out


def canonical_code(pic: Picture):
    """A value equal for two pictures iff they are isomorphic."""
    ix = pic.index
    kids = _children_by_face(pic)
    memo: dict[Node, tuple] = {}

    def child_codes(face: int) -> tuple:
        return tuple(sorted(best(c) for c in kids.get(face, ())))

    def code_from(start: Node, offset: int, outer: int | None) -> tuple:
        desc, faces = _traverse(ix, start, offset)
        ordered = sorted(faces, key=faces.get)
        return (
            "comp",
            desc,
            -1 if outer is None else faces[outer],
            tuple(child_codes(f) for f in ordered),
        )

    def best(comp: Node) -> tuple:
        if comp in memo:
            return memo[comp]
        nest = pic.nest_of(comp)
        outer = ix.face_of[nest.outer]
        if comp[0] == "l":
            side = nest.outer[2]
            inner = ix.face_of[("l", comp[1], 1 - side)]
            code = ("loop", ix.arcs[comp[1]].label, side, child_codes(inner))
        else:
            code = min(
                code_from(node, o, outer)
                for node in ix.members[comp]
                for o in range(len(ix.rotations[node]))
            )
        memo[comp] = code
        return code

    return code_from(BOUNDARY, pic.boundary.basepoint if pic.boundary.rotation else 0, None)


def is_isomorphic(p: Picture, q: Picture) -> bool:
    return canonical_code(p) == canonical_code(q)


def component_shape_code(pic: Picture, comp: Node) -> tuple:
    """Isomorphism code of one component, ignoring its embedding."""
    ix = pic.index
    return min(
        _traverse(ix, node, o)[0]
        for node in ix.members[comp]
        for o in range(len(ix.rotations[node]))
    )


def vertex_corner_iter(pic: Picture) -> Iterator[Corner]:
    for v in pic.vertices:
        yield from pic.index.corners_of_node(("v", v.id))
