"""Deformations of pictures: BRIDGE, FLOAT, FOLD, DELETE(X) and their inverses.

Moves never alter a rotation, so every dart keeps its slot and its read
sign.  Boundary labels and corner words are therefore untouched by
construction; what changes is which darts are paired into arcs and which
faces are joined into regions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from math import gcd
from typing import Iterable, Iterator, Union

from .picture import (
    BOUNDARY,
    Arc,
    Boundary,
    Corner,
    Dart,
    InvalidCorner,
    InvalidVertex,
    NotSpherical,
    Picture,
    PictureError,
    Vertex,
    _corner_from_json,
    _corner_json,
    _traverse,
    assemble,
    component_shape_code,
    find_folding_pairs,
    is_folding_pair,
    is_spherical,
    mirror,
)
from .presentation import Presentation, RcViolated, check_rc

__all__ = [
    "Move",
    "Bridge",
    "Float",
    "FloatInv",
    "Fold",
    "FoldInv",
    "DeleteX",
    "InsertX",
    "XEntry",
    "XSet",
    "MoveError",
    "BadSegmentPair",
    "NotAFoldingPair",
    "NotAnXCopy",
    "NotAFloatingCircle",
    "apply",
    "apply_all",
    "inverse",
    "build_xset",
    "folding_pair_picture",
    "x_picture",
    "reduce_spherical",
    "reductions",
    "bridge_candidates",
    "moves_to_json",
    "moves_from_json",
]


class MoveError(PictureError):
    pass


class BadSegmentPair(MoveError):
    pass


class NotAFoldingPair(MoveError):
    pass


class NotAnXCopy(MoveError):
    pass


class NotAFloatingCircle(MoveError):
    pass


@dataclass(frozen=True)
class Bridge:
    """Reconnect two arcs across a region.

    The arcs are named by the end a face boundary leaves from: the face
    walks ``arc1`` from end ``from1`` and ``arc2`` from end ``from2``.
    """

    arc1: int
    from1: int
    arc2: int
    from2: int


@dataclass(frozen=True)
class Float:
    loop: int


@dataclass(frozen=True)
class FloatInv:
    region: Corner
    label: str
    orientation: int = 1  # +1: the normal points out of the new circle


@dataclass(frozen=True)
class Fold:
    u: int
    v: int


@dataclass(frozen=True)
class FoldInv:
    region: Corner
    relator: int
    sign_u: int = 1
    outer_gap: int = 0  # gap of the new u-vertex, from its basepoint, facing the region


@dataclass(frozen=True)
class DeleteX:
    u: int
    v: int
    index: int
    mirrored: bool = False


@dataclass(frozen=True)
class InsertX:
    region: Corner
    index: int
    mirrored: bool = False
    outer_gap: int = 0


Move = Union[Bridge, Float, FloatInv, Fold, FoldInv, DeleteX, InsertX]
_MOVE_TYPES = {cls.__name__: cls for cls in (Bridge, Float, FloatInv, Fold, FoldInv, DeleteX, InsertX)}


def move_to_json(m: Move) -> dict:
    rec: dict = {"move": type(m).__name__}
    for f in fields(m):
        value = getattr(m, f.name)
        rec[f.name] = _corner_json(value) if f.name == "region" else value
    return rec


def move_from_json(rec: dict) -> Move:
    try:
        cls = _MOVE_TYPES[rec["move"]]
        kwargs = {}
        for f in fields(cls):
            if f.name in rec:
                value = rec[f.name]
                kwargs[f.name] = _corner_from_json(value) if f.name == "region" else value
        return cls(**kwargs)
    except (KeyError, TypeError, ValueError) as exc:
        raise MoveError(f"malformed move record {rec!r}: {exc}") from None


def moves_to_json(ms: Iterable[Move]) -> str:
    return json.dumps([move_to_json(m) for m in ms], indent=2)


def moves_from_json(text: str) -> list[Move]:
    data = json.loads(text)
    if not isinstance(data, list):
        raise MoveError("a move trace must be a JSON array")
    return [move_from_json(r) for r in data]


# -- X-pictures ----------------------------------------------------------------


def _pair_parts(
    P: Presentation, relator: int, sign_u: int, vid: int, aid: int, v_basepoint: int = 0
) -> tuple[list[Vertex], list[Arc]]:
    """Two vertices for ``r`` joined by parallel arcs: u slot i meets v slot k-1-i."""
    if not 0 <= relator < len(P.relators):
        raise InvalidVertex(f"no relator {relator}")
    if sign_u not in (1, -1):
        raise MoveError("sign must be +1 or -1")
    word = P.relators[relator] if sign_u > 0 else ~P.relators[relator]
    k = len(word)
    if k == 0:
        raise MoveError("cannot build vertices for an empty relator")
    arcs = [Arc(aid + i, word[i].gen, word[i].sign) for i in range(k)]
    u = Vertex(vid, relator, sign_u, tuple((aid + i, 0) for i in range(k)), 0)
    v = Vertex(vid + 1, relator, -sign_u, tuple((aid + k - 1 - j, 1) for j in range(k)), v_basepoint % k)
    return [u, v], arcs


def folding_pair_picture(P: Presentation, relator: int, sign_u: int = 1) -> Picture:
    vs, arcs = _pair_parts(P, relator, sign_u, 0, 0)
    return assemble(vs, Boundary(), arcs, [(("v", 0, 0), ("b", 0, 0))])


def x_picture(P: Presentation, relator: int, f: int) -> Picture:
    """The primitive dipole for ``r = y^l`` whose basepoints are ``y^f`` apart."""
    root, period = P.root_periods[relator]
    if not (1 <= f < period and gcd(f, period) == 1):
        raise MoveError(f"exponent {f} is not prime to the period {period}")
    k = len(P.relators[relator])
    vs, arcs = _pair_parts(P, relator, 1, 0, 0, (k - f * len(root)) % k)
    return assemble(vs, Boundary(), arcs, [(("v", 0, 0), ("b", 0, 0))])


@dataclass(frozen=True)
class XEntry:
    relator: int
    exponent: int
    picture: Picture

    def oriented(self, mirrored: bool) -> Picture:
        return mirror(self.picture) if mirrored else self.picture


@dataclass(frozen=True)
class XSet:
    entries: tuple[XEntry, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> XEntry:
        return self.entries[i]

    def codes(self) -> dict[tuple, tuple[int, bool]]:
        out: dict[tuple, tuple[int, bool]] = {}
        for i, e in enumerate(self.entries):
            for mirrored in (False, True):
                pic = e.oriented(mirrored)
                comp = pic.index.comp_of[("v", 0)]
                out.setdefault(component_shape_code(pic, comp), (i, mirrored))
        return out


def build_xset(P: Presentation) -> XSet:
    report = check_rc(P)
    if not report.holds:
        raise RcViolated("; ".join(map(str, report.violations)))
    entries = []
    for i, rp in enumerate(P.root_periods):
        for f in range(1, rp.period):
            if gcd(f, rp.period) == 1:
                entries.append(XEntry(i, f, x_picture(P, i, f)))
    return XSet(tuple(entries))


# -- applying moves --------------------------------------------------------------


def _require_corner(pic: Picture, c: Corner) -> Corner:
    c = tuple(c)
    if c not in pic.index.face_of:
        raise InvalidCorner(f"no corner {c}")
    return c


def _remove_component(pic: Picture, comp) -> Picture:
    ix = pic.index
    nodes = set(ix.members[comp])
    vids = {n[1] for n in nodes if n[0] == "v"}
    arc_ids = {d[0] for n in nodes if n[0] == "v" for d in ix.rotations[n]}
    if comp[0] == "l":
        arc_ids.add(comp[1])
    corners = [c for f in ix.comp_faces[comp] for c in ix.faces[f]]
    links = pic.region_links()
    links += [(corners[0], c) for c in corners[1:]]
    return assemble(
        [v for v in pic.vertices if v.id not in vids],
        pic.boundary,
        [a for a in pic.arcs if a.id not in arc_ids],
        links,
        pic.presentation_ref,
    )


def _insert(pic: Picture, vertices: list[Vertex], arcs: list[Arc], outer: Corner, region: Corner) -> Picture:
    return assemble(
        list(pic.vertices) + vertices,
        pic.boundary,
        list(pic.arcs) + arcs,
        pic.region_links() + [(outer, region)],
        pic.presentation_ref,
    )


def _two_vertex_comp(pic: Picture, u: int, v: int):
    ix = pic.index
    if u == v or u not in ix.vertices or v not in ix.vertices:
        return None
    comp = ix.comp_of[("v", u)]
    if ix.comp_of[("v", v)] != comp or set(ix.members[comp]) != {("v", u), ("v", v)}:
        return None
    if pic.children(comp):
        return None
    return comp


def _relabel(src: Picture, vid0: int, aid0: int) -> tuple[list[Vertex], list[Arc], dict[int, int]]:
    vmap = {v.id: vid0 + i for i, v in enumerate(sorted(src.vertices, key=lambda v: v.id))}
    amap = {a.id: aid0 + i for i, a in enumerate(sorted(src.arcs, key=lambda a: a.id))}
    vertices = [
        Vertex(vmap[v.id], v.relator, v.sign, tuple((amap[a], e) for a, e in v.rotation), v.basepoint)
        for v in src.vertices
    ]
    arcs = [Arc(amap[a.id], a.label, a.orientation, a.free_loop) for a in src.arcs]
    return vertices, arcs, vmap


def _traversal_corner(ix, d: Dart) -> Corner:
    node, p = ix.position[d]
    if node == BOUNDARY:
        return ("b", 0, (p + 1) % len(ix.rotations[node]))
    return ("v", node[1], p)


def _apply_bridge(pic: Picture, m: Bridge) -> Picture:
    ix = pic.index
    if m.arc1 == m.arc2:
        raise BadSegmentPair("a bridge needs two distinct arcs")
    for a, e in ((m.arc1, m.from1), (m.arc2, m.from2)):
        if a not in ix.arcs:
            raise BadSegmentPair(f"no arc {a}")
        if ix.arcs[a].free_loop:
            raise BadSegmentPair(f"arc {a} is a free loop")
        if e not in (0, 1):
            raise BadSegmentPair("segment end must be 0 or 1")
    a1, a2 = ix.arcs[m.arc1], ix.arcs[m.arc2]
    if a1.label != a2.label:
        raise BadSegmentPair("arcs carry different labels")
    x1, y1 = (m.arc1, m.from1), (m.arc1, 1 - m.from1)
    x2, y2 = (m.arc2, m.from2), (m.arc2, 1 - m.from2)
    f1 = ix.face_of[_traversal_corner(ix, x1)]
    f2 = ix.face_of[_traversal_corner(ix, x2)]
    same_face = f1 == f2
    if not same_face:
        if ix.comp_of_corner(ix.faces[f1][0]) == ix.comp_of_corner(ix.faces[f2][0]):
            raise BadSegmentPair("segments lie on different faces of one component")
        if pic.region_of(ix.faces[f1][0]) != pic.region_of(ix.faces[f2][0]):
            raise BadSegmentPair("segments lie in different regions")

    def rho(d: Dart) -> int:
        return -1 if ix.position[d][0] == BOUNDARY else 1

    # new arcs y1 -> x2 (id arc1) and y2 -> x1 (id arc2)
    rename: dict[Dart, Dart] = {y1: (m.arc1, 0), x2: (m.arc1, 1), y2: (m.arc2, 0), x1: (m.arc2, 1)}
    for start, end in ((y1, x2), (y2, x1)):
        if ix.read_sign(end) != -ix.read_sign(start) * rho(start) * rho(end):
            raise BadSegmentPair("normal orientations are incompatible")
    arcs = [a for a in pic.arcs if a.id not in (m.arc1, m.arc2)]
    arcs.append(Arc(m.arc1, a1.label, ix.read_sign(y1)))
    arcs.append(Arc(m.arc2, a1.label, ix.read_sign(y2)))

    def fix(rot):
        return tuple(rename.get(tuple(d), tuple(d)) for d in rot)

    vertices = [Vertex(v.id, v.relator, v.sign, fix(v.rotation), v.basepoint) for v in pic.vertices]
    boundary = Boundary(fix(pic.boundary.rotation), pic.boundary.basepoint)
    links = pic.region_links(broken_faces=[f1] if same_face else [])
    try:
        out = assemble(vertices, boundary, arcs, links, pic.presentation_ref)
        if out.index.euler_defects():
            raise BadSegmentPair("reconnection is not planar")
    except BadSegmentPair:
        raise
    except PictureError as exc:
        raise BadSegmentPair(str(exc)) from None
    return out


def apply(pic: Picture, m: Move, P: Presentation, X: XSet | None = None) -> Picture:
    """Apply one move, checking its preconditions."""
    ix = pic.index
    if isinstance(m, Bridge):
        return _apply_bridge(pic, m)
    if isinstance(m, Float):
        arc = ix.arcs.get(m.loop)
        if arc is None or not arc.free_loop:
            raise NotAFloatingCircle(f"arc {m.loop} is not a free loop")
        if pic.children(("l", m.loop)):
            raise NotAFloatingCircle(f"loop {m.loop} encloses part of the picture")
        return _remove_component(pic, ("l", m.loop))
    if isinstance(m, FloatInv):
        region = _require_corner(pic, m.region)
        if m.label not in P.alphabet:
            raise MoveError(f"label {m.label!r} is not a generator")
        if m.orientation not in (1, -1):
            raise MoveError("orientation must be +1 or -1")
        aid = pic.next_arc_id()
        outer = ("l", aid, 0 if m.orientation > 0 else 1)
        return _insert(pic, [], [Arc(aid, m.label, 1, True)], outer, region)
    if isinstance(m, Fold):
        if not is_folding_pair(pic, m.u, m.v, P):
            raise NotAFoldingPair(f"vertices {m.u}, {m.v} are not a folding pair")
        return _remove_component(pic, ix.comp_of[("v", m.u)])
    if isinstance(m, FoldInv):
        region = _require_corner(pic, m.region)
        vid, aid = pic.next_vertex_id(), pic.next_arc_id()
        vs, arcs = _pair_parts(P, m.relator, m.sign_u, vid, aid)
        k = len(vs[0].rotation)
        return _insert(pic, vs, arcs, ("v", vid, m.outer_gap % k), region)
    if isinstance(m, DeleteX):
        X = X if X is not None else build_xset(P)
        if not 0 <= m.index < len(X):
            raise NotAnXCopy(f"no X-picture {m.index}")
        comp = _two_vertex_comp(pic, m.u, m.v)
        if comp is None:
            raise NotAnXCopy(f"vertices {m.u}, {m.v} do not form a bare two-vertex component")
        xp = X[m.index].oriented(m.mirrored)
        if component_shape_code(pic, comp) != component_shape_code(xp, xp.index.comp_of[("v", 0)]):
            raise NotAnXCopy(f"vertices {m.u}, {m.v} are not a copy of X-picture {m.index}")
        return _remove_component(pic, comp)
    if isinstance(m, InsertX):
        region = _require_corner(pic, m.region)
        X = X if X is not None else build_xset(P)
        if not 0 <= m.index < len(X):
            raise NotAnXCopy(f"no X-picture {m.index}")
        xp = X[m.index].oriented(m.mirrored)
        vid = pic.next_vertex_id()
        vs, arcs, _ = _relabel(xp, vid, pic.next_arc_id())
        k = len(vs[0].rotation)
        return _insert(pic, vs, arcs, ("v", vid, m.outer_gap % k), region)
    raise TypeError(f"not a move: {m!r}")


def apply_all(pic: Picture, ms: Iterable[Move], P: Presentation, X: XSet | None = None) -> Picture:
    for m in ms:
        pic = apply(pic, m, P, X)
    return pic


def _outer_gap(pic: Picture, comp, vid: int, offset: int) -> int:
    ix = pic.index
    outer_face = ix.face_of[pic.nest_of(comp).outer]
    k = len(ix.rotations[("v", vid)])
    for g in range(k):
        if ix.face_of[("v", vid, g)] == outer_face:
            return (g - offset) % k
    raise AssertionError("vertex does not meet the outer face")


def inverse(pic: Picture, m: Move, P: Presentation, X: XSet | None = None) -> Move:
    """The move undoing ``m`` on ``pic`` (up to isomorphism)."""
    ix = pic.index
    if isinstance(m, Float):
        nest = pic.nest_of(("l", m.loop))
        if nest is None:
            raise NotAFloatingCircle(f"arc {m.loop} is not a free loop")
        return FloatInv(nest.parent, ix.arcs[m.loop].label, 1 if nest.outer[2] == 0 else -1)
    if isinstance(m, FloatInv):
        return Float(pic.next_arc_id())
    if isinstance(m, Fold):
        if not is_folding_pair(pic, m.u, m.v, P):
            raise NotAFoldingPair(f"vertices {m.u}, {m.v} are not a folding pair")
        comp = ix.comp_of[("v", m.u)]
        u = ix.vertices[m.u]
        return FoldInv(pic.nest_of(comp).parent, u.relator, u.sign, _outer_gap(pic, comp, m.u, u.basepoint))
    if isinstance(m, FoldInv):
        n = pic.next_vertex_id()
        return Fold(n, n + 1)
    if isinstance(m, DeleteX):
        X = X if X is not None else build_xset(P)
        comp = _two_vertex_comp(pic, m.u, m.v)
        if comp is None:
            raise NotAnXCopy(f"vertices {m.u}, {m.v} do not form a bare two-vertex component")
        xp = X[m.index].oriented(m.mirrored)
        target = _traverse(xp.index, ("v", 0), 0)[0]
        for node in ix.members[comp]:
            for o in range(len(ix.rotations[node])):
                if _traverse(ix, node, o)[0] == target:
                    return InsertX(pic.nest_of(comp).parent, m.index, m.mirrored, _outer_gap(pic, comp, node[1], o))
        raise NotAnXCopy(f"vertices {m.u}, {m.v} are not a copy of X-picture {m.index}")
    if isinstance(m, InsertX):
        n = pic.next_vertex_id()
        return DeleteX(n, n + 1, m.index, m.mirrored)
    raise MoveError(f"{type(m).__name__} has no inverse here")


# -- reduction -----------------------------------------------------------------


def reductions(pic: Picture, P: Presentation, X: XSet) -> Iterator[Move]:
    """Float, Fold and DeleteX moves available in ``pic``, in reducer order."""
    ix = pic.index
    for a in ix.loops:
        if not pic.children(("l", a)):
            yield Float(a)
    for u, v, _ in find_folding_pairs(pic, P):
        yield Fold(u, v)
    if len(X):
        codes = X.codes()
        for comp, nodes in sorted(ix.members.items()):
            if len(nodes) != 2 or any(n[0] != "v" for n in nodes):
                continue
            u, v = sorted(n[1] for n in nodes)
            if _two_vertex_comp(pic, u, v) is None:
                continue
            hit = codes.get(component_shape_code(pic, comp))
            if hit is not None:
                yield DeleteX(u, v, hit[0], hit[1])


def bridge_candidates(pic: Picture) -> Iterator[Bridge]:
    """Bridge moves whose segments share a face or a region, in a fixed order."""
    ix = pic.index
    darts = sorted(d for d in ix.position if not ix.arcs[d[0]].free_loop)
    where = {d: ix.face_of[_traversal_corner(ix, d)] for d in darts}
    for i, d1 in enumerate(darts):
        for d2 in darts[i + 1:]:
            if d1[0] == d2[0] or ix.arcs[d1[0]].label != ix.arcs[d2[0]].label:
                continue
            f1, f2 = where[d1], where[d2]
            if f1 != f2:
                c1, c2 = ix.faces[f1][0], ix.faces[f2][0]
                if ix.comp_of_corner(c1) == ix.comp_of_corner(c2) or pic.region_of(c1) != pic.region_of(c2):
                    continue
            yield Bridge(d1[0], d1[1], d2[0], d2[1])


def _size(pic: Picture) -> tuple[int, int]:
    return (len(pic.vertices), len(pic.arcs))


def reduce_spherical(
    pic: Picture, X: XSet, P: Presentation, budget: int = 1000
) -> tuple[Picture, list[Move], bool]:
    """Greedy reduction without insertions.

    Each step applies the first available Float, Fold or DeleteX.  When
    none exists, a bridge is taken only if it makes one available.
    ``budget`` bounds the number of moves applied.
    """
    if not is_spherical(pic):
        raise NotSpherical("reduction needs a spherical picture")
    trace: list[Move] = []
    while len(trace) < budget and not pic.is_empty():
        m = next(reductions(pic, P, X), None)
        if m is not None:
            pic = apply(pic, m, P, X)
            trace.append(m)
            continue
        found = None
        for b in bridge_candidates(pic):
            try:
                nxt = apply(pic, b, P, X)
            except MoveError:
                continue
            if next(reductions(nxt, P, X), None) is not None:
                found = (b, nxt)
                break
        if found is None or len(trace) + 2 > budget:
            break
        trace.append(found[0])
        pic = found[1]
    return pic, trace, pic.is_empty()
