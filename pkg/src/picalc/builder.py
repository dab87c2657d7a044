"""Pictures from normal-closure certificates, bounded certificate search,
and gluing two disk pictures along their common boundary."""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from .abelian import word_in_relation_lattice
from .picture import (
    BOUNDARY,
    Arc,
    Boundary,
    Picture,
    PictureError,
    Vertex,
    assemble,
    boundary_label,
    mirror,
)
from .presentation import Presentation, RcViolated, check_rc
from .words import Letter, Word, format_word, parse_word

__all__ = [
    "Factor",
    "ConjugateProduct",
    "BadRelatorIndex",
    "BoundaryMismatch",
    "AlphabetMismatch",
    "Found",
    "NotFoundWithin",
    "RefutedByAbelianization",
    "MembershipVerdict",
    "evaluate",
    "picture_from_certificate",
    "witness_search",
    "words_up_to",
    "glue",
    "glue_presentation",
    "certificate_to_json",
    "certificate_from_json",
]


class BadRelatorIndex(IndexError):
    pass


class BoundaryMismatch(PictureError):
    pass


class AlphabetMismatch(PictureError):
    pass


class Factor(NamedTuple):
    conjugator: Word
    relator: int
    sign: int


ConjugateProduct = tuple[Factor, ...]


def _factor_word(f: Factor, P: Presentation) -> Word:
    if not 0 <= f.relator < len(P.relators):
        raise BadRelatorIndex(f"relator index {f.relator} out of range")
    if f.sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {f.sign}")
    r = P.relators[f.relator]
    return f.conjugator * (r if f.sign > 0 else ~r) * ~f.conjugator


def evaluate(cp: Iterable[Factor], P: Presentation) -> Word:
    """Freely reduced value of ``prod u_i r_i^e_i u_i^-1``."""
    out = Word()
    for f in cp:
        out = out * _factor_word(Factor(*f), P)
    return out


def certificate_to_json(cp: Iterable[Factor]) -> str:
    return json.dumps([[format_word(f.conjugator), f.relator, f.sign] for f in cp])


def certificate_from_json(text: str, P: Presentation) -> ConjugateProduct:
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("a certificate must be a JSON array")
    out = []
    for item in data:
        conj, idx, sign = item
        out.append(Factor(parse_word(conj, P.alphabet), int(idx), int(sign)))
    return tuple(out)


def _require_rc(P: Presentation) -> None:
    report = check_rc(P)
    if not report.holds:
        raise RcViolated("; ".join(map(str, report.violations)))


def picture_from_certificate(cp: Iterable[Factor], P: Presentation) -> Picture:
    """Lollipop layout: per factor, the letters of ``u``, a vertex for
    ``r^e``, then ``u^-1`` along the boundary.  Conjugator letters are
    joined by nested boundary-to-boundary arcs."""
    _require_rc(P)
    cp = [Factor(*f) for f in cp]
    vertices: list[Vertex] = []
    arcs: list[Arc] = []
    slots: list = []  # boundary rotation, filled in order
    aid = 0
    for vid, f in enumerate(cp):
        body = _factor_word(Factor(Word(), f.relator, f.sign), P)
        u = f.conjugator.letters
        L, k = len(u), len(body)
        start = len(slots)
        slots.extend([None] * (2 * L + k))
        for j, (gen, sign) in enumerate(u):
            arcs.append(Arc(aid, gen, sign))
            slots[start + j] = (aid, 0)
            slots[start + 2 * L + k - 1 - j] = (aid, 1)
            aid += 1
        rotation = []
        for j, (gen, sign) in enumerate(body.letters):
            arcs.append(Arc(aid, gen, sign))
            rotation.append((aid, 0))
            slots[start + L + j] = (aid, 1)
            aid += 1
        vertices.append(Vertex(vid, f.relator, f.sign, tuple(rotation), 0))
    return assemble(vertices, Boundary(tuple(slots), 0), arcs)


# -- bounded certificate search ----------------------------------------------


@dataclass(frozen=True)
class Found:
    certificate: ConjugateProduct


@dataclass(frozen=True)
class NotFoundWithin:
    max_factors: int
    max_conjugator_len: int


@dataclass(frozen=True)
class RefutedByAbelianization:
    reason: str


MembershipVerdict = Union[Found, NotFoundWithin, RefutedByAbelianization]


def words_up_to(alphabet: Sequence[str], n: int) -> Iterator[Word]:
    """Reduced words of length <= n in length-lex order (a < a^-1 < b ...)."""
    letters = [Letter(g, s) for g in alphabet for s in (1, -1)]
    for length in range(n + 1):
        for combo in itertools.product(letters, repeat=length):
            if all(combo[i] != Letter(combo[i + 1].gen, -combo[i + 1].sign) for i in range(length - 1)):
                yield Word.raw(combo)


def _all_factors(P: Presentation, max_conj: int) -> list[Factor]:
    return [
        Factor(u, i, s)
        for u in words_up_to(P.alphabet, max_conj)
        for i in range(len(P.relators))
        for s in (1, -1)
    ]


class _Search:
    """Shared state for the enumeration: factors in global order and the
    first factor producing each reduced conjugate."""

    def __init__(self, w: Word, P: Presentation, max_conj: int):
        self.w = w
        self.factors = _all_factors(P, max_conj)
        self.values = [_factor_word(f, P) for f in self.factors]
        self.lookup: dict[Word, int] = {}
        for i, v in enumerate(self.values):
            self.lookup.setdefault(v, i)

    def best_with_first(self, n: int, first: int) -> tuple[int, ...] | None:
        """Least index tuple of length n starting with ``first``."""
        if n == 1:
            return (first,) if self.values[first] == self.w else None
        m = len(self.factors)
        head = self.values[first]
        for middle in itertools.product(range(m), repeat=n - 2):
            prefix = head
            for i in middle:
                prefix = prefix * self.values[i]
            last = self.lookup.get(~prefix * self.w)
            if last is not None:
                return (first, *middle, last)
        return None


_WORKER: _Search | None = None


def _init_worker(w: Word, P: Presentation, max_conj: int) -> None:
    global _WORKER
    _WORKER = _Search(w, P, max_conj)


def _worker_task(args: tuple[int, int]) -> tuple[int, ...] | None:
    n, first = args
    return _WORKER.best_with_first(n, first)


def witness_search(
    w: Word, P: Presentation, max_factors: int, max_conjugator_len: int, jobs: int = 1
) -> MembershipVerdict:
    """Search for ``w`` as a product of at most ``max_factors`` conjugates.

    The reported certificate is the least one in the order (number of
    factors, then factors left to right, each by conjugator length-lex,
    relator index, sign +1 before -1), independent of ``jobs``.
    """
    _require_rc(P)
    w = Word(w.letters)
    if not word_in_relation_lattice(w, P):
        return RefutedByAbelianization(
            f"exponent-sum vector of {format_word(w) or '1'} is not in the relator lattice"
        )
    if not w:
        return Found(())
    search = _Search(w, P, max_conjugator_len)
    m = len(search.factors)
    pool = ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(w, P, max_conjugator_len)) if jobs > 1 else None
    try:
        for n in range(1, max_factors + 1):
            if pool is None or n == 1:
                hits = (search.best_with_first(n, i) for i in range(m))
            else:
                hits = pool.map(_worker_task, [(n, i) for i in range(m)])
            for hit in hits:
                if hit is not None:
                    return Found(tuple(search.factors[i] for i in hit))
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return NotFoundWithin(max_factors, max_conjugator_len)


# -- gluing --------------------------------------------------------------------


def glue_presentation(P1: Presentation, P2: Presentation | None) -> Presentation:
    if P2 is None or P2 == P1:
        return P1
    if P1.alphabet != P2.alphabet:
        raise AlphabetMismatch("presentations must share one alphabet")
    return P1.union(P2)


def glue(
    p1: Picture, p2: Picture, P1: Presentation | None = None, P2: Presentation | None = None
) -> Picture:
    """Spherical picture from ``p1`` and the mirror image of ``p2``.

    Boundary slot ``b1+i`` of ``p1`` is joined to slot ``b2+i`` of ``p2``.
    When distinct presentations are given, the relators of ``p2`` are
    numbered after those of ``P1``.
    """
    if P1 is not None and P2 is not None and P1.alphabet != P2.alphabet:
        raise AlphabetMismatch("presentations must share one alphabet")
    w1, w2 = boundary_label(p1), boundary_label(p2)
    if w1.letters != w2.letters:
        raise BoundaryMismatch(f"boundary labels differ: {w1} vs {w2}")
    offset = len(P1.relators) if P1 is not None and P2 is not None and P2 != P1 else 0
    m = mirror(p2)
    i1, i2 = p1.index, m.index
    vshift = p1.next_vertex_id()
    k = len(p1.boundary.rotation)
    b1, b2 = p1.boundary.basepoint, p2.boundary.basepoint

    # half-edges are (side, dart) with side 0 for p1 and 1 for the mirror
    index = (i1, i2)
    partner: dict[int, int] = {}  # p1 boundary position -> mirror boundary position
    for i in range(k):
        partner[(b1 + i) % k] = (k - 1 - b2 - i) % k
    back = {q: p for p, q in partner.items()}

    used: set = set()  # boundary half-edges already on some arc chain

    def through(side: int, dart):
        """Follow an arc piece from ``dart``; return the far half-edge,
        crossing the equator as often as needed."""
        ix = index[side]
        d = (dart[0], 1 - dart[1])
        while True:
            node, p = ix.position[d]
            if node != BOUNDARY:
                return side, d
            used.add((side, d))
            if side == 0:
                side, q = 1, partner[p]
            else:
                side, q = 0, back[p]
            ix = index[side]
            d = ix.boundary.rotation[q]
            used.add((side, d))
            d = (d[0], 1 - d[1])

    def vid(side: int, v: int) -> int:
        return v if side == 0 else v + vshift

    seen: set = set()
    rename: dict = {}
    arcs: list[Arc] = []
    for side, pic in ((0, p1), (1, m)):
        ix = index[side]
        for v in pic.vertices:
            for d in v.rotation:
                if (side, d) in seen:
                    continue
                far = through(side, d)
                if far in seen:
                    raise PictureError("inconsistent arc chain while gluing")
                aid = len(arcs)
                arcs.append(Arc(aid, ix.arcs[d[0]].label, ix.read_sign(d)))
                rename[(side, d)] = (aid, 0)
                rename[far] = (aid, 1)
                seen.update({(side, d), far})
    links: list = []
    loop_done: set = set()
    for p in range(k):
        d = i1.boundary.rotation[p]
        if (0, d) in used or (0, d) in loop_done:
            continue
        # closed chain through boundary-to-boundary arcs only
        aid = len(arcs)
        arcs.append(Arc(aid, i1.arcs[d[0]].label, 1, True))
        sigma = i1.read_sign(d)
        ahead, behind = ("B1", 0, (p + 1) % k), ("B1", 0, p)
        if sigma > 0:
            links += [(("l", aid, 0), ahead), (("l", aid, 1), behind)]
        else:
            links += [(("l", aid, 0), behind), (("l", aid, 1), ahead)]
        side, x = 0, d
        while (side, x) not in loop_done:
            loop_done.add((side, x))
            ix = index[side]
            y = (x[0], 1 - x[1])
            loop_done.add((side, y))
            _, q = ix.position[y]
            if side == 0:
                side, x = 1, i2.boundary.rotation[partner[q]]
            else:
                side, x = 0, i1.boundary.rotation[back[q]]

    loop_ids: dict = {}
    for side, pic in ((0, p1), (1, m)):
        for a in pic.arcs:
            if a.free_loop:
                loop_ids[(side, a.id)] = len(arcs)
                arcs.append(Arc(len(arcs), a.label, 1, True))

    vertices = []
    for side, pic in ((0, p1), (1, m)):
        for v in pic.vertices:
            vertices.append(
                Vertex(
                    vid(side, v.id),
                    v.relator + (offset if side == 1 else 0),
                    v.sign,
                    tuple(rename[(side, d)] for d in v.rotation),
                    v.basepoint,
                )
            )

    def ns(side: int, c):
        if c[0] == "v":
            return ("v", vid(side, c[1]), c[2])
        if c[0] == "b":
            return ("B1" if side == 0 else "B2", 0, c[2])
        return ("l", loop_ids[(side, c[1])], c[2])

    for side, pic in ((0, p1), (1, m)):
        for a, b in pic.region_links():
            links.append((ns(side, a), ns(side, b)))
    for i in range(k):
        links.append((("B1", 0, (b1 + i) % k), ("B2", 0, (k - b2 - i) % k)))
    links.append((("b", 0, 0), ("B1", 0, b1 % k if k else 0)))
    ref = p1.presentation_ref if p1.presentation_ref == p2.presentation_ref else None
    return assemble(vertices, Boundary(), arcs, links, ref)
