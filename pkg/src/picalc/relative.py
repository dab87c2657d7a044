"""Relative words over ``H * F(X)``: cyclic reduction, x-rotations,
orientability, and the augmentation of free-product words.

A relative word ``x1^e1 h1 x2^e2 h2 ... xn^en hn`` is stored as the tuple
of syllables ``(xi, ei, hi)``.  The H-parts are elements of a concrete
group backend: :class:`~picalc.freeprod.FiniteGroup`,
:class:`~picalc.freeprod.FreeProduct`, or :class:`FreeGroupBackend`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Hashable, Iterable, NamedTuple, Protocol

from .freeprod import FiniteGroup, FPElement, FreeProduct
from .words import Word, parse_word

__all__ = [
    "Backend",
    "FreeGroupBackend",
    "FiniteBackend",
    "Syllable",
    "RelativeWord",
    "SyllableLengthTooSmall",
    "rel_cyclic_reduce",
    "is_rel_cyclically_reduced",
    "rel_inverse",
    "star_x",
    "check_orientable",
    "OrientabilityViolation",
    "augment",
    "parse_relative_word",
    "format_relative_word",
]


class SyllableLengthTooSmall(ValueError):
    pass


class Backend(Protocol):
    def identity(self) -> Hashable: ...
    def mul(self, *xs: Hashable) -> Hashable: ...
    def inv(self, x: Hashable) -> Hashable: ...
    def is_identity(self, x: Hashable) -> bool: ...
    def parse(self, text: str) -> Hashable: ...
    def format(self, x: Hashable) -> str: ...


class FreeGroupBackend:
    def __init__(self, alphabet: Iterable[str]):
        self.alphabet = tuple(alphabet)

    def identity(self) -> Word:
        return Word()

    def mul(self, *xs: Word) -> Word:
        out = Word()
        for x in xs:
            out = out * x
        return out

    def inv(self, x: Word) -> Word:
        return ~x

    def is_identity(self, x: Word) -> bool:
        return not x

    def parse(self, text: str) -> Word:
        return parse_word(text, self.alphabet)

    def format(self, x: Word) -> str:
        return str(x) if x else "1"


class FiniteBackend:
    """Adapter giving a :class:`FiniteGroup` the backend interface."""

    def __init__(self, group: FiniteGroup):
        self.group = group

    def identity(self) -> int:
        return self.group.identity

    def mul(self, *xs: int) -> int:
        out = self.group.identity
        for x in xs:
            out = self.group.mul(out, x)
        return out

    def inv(self, x: int) -> int:
        return self.group.inv(x)

    def is_identity(self, x: int) -> bool:
        return self.group.is_identity(x)

    def parse(self, text: str) -> int:
        text = text.strip()
        return self.group.identity if text in ("", "1") else self.group.parse_element(text)

    def format(self, x: int) -> str:
        return self.group.format(x)


class Syllable(NamedTuple):
    x: str
    sign: int
    h: Hashable


@dataclass(frozen=True)
class RelativeWord:
    """A relative word; ``residue`` is the H-element left once no X-symbol remains."""

    syllables: tuple[Syllable, ...]
    residue: Hashable = None

    def __len__(self) -> int:
        return len(self.syllables)

    def rotate(self, k: int) -> "RelativeWord":
        n = len(self.syllables)
        if n == 0:
            return self
        k %= n
        return RelativeWord(self.syllables[k:] + self.syllables[:k])


def _violation_at(w: tuple[Syllable, ...], i: int, H: Backend) -> bool:
    n = len(w)
    a, b = w[i], w[(i + 1) % n]
    return H.is_identity(a.h) and a.x == b.x and a.sign != b.sign


def is_rel_cyclically_reduced(w: RelativeWord, H: Backend) -> bool:
    n = len(w.syllables)
    return all(not _violation_at(w.syllables, i, H) for i in range(n)) if n else True


def rel_cyclic_reduce(w: RelativeWord, H: Backend) -> RelativeWord:
    """Cancel ``x^e 1 x^-e`` pairs cyclically, multiplying the H-parts around them."""
    syl = list(w.syllables)
    while len(syl) >= 2:
        n = len(syl)
        i = next((k for k in range(n) if _violation_at(tuple(syl), k, H)), None)
        if i is None:
            break
        j = (i + 1) % n
        if n == 2:
            # x^e 1 x^-e h  ->  h
            return RelativeWord((), syl[j].h)
        # x_p^e h_p  x^f 1  x^-f h_j  ->  x_p^e (h_p h_j)
        prev = (i - 1) % n
        merged = Syllable(syl[prev].x, syl[prev].sign, H.mul(syl[prev].h, syl[j].h))
        syl = [merged if k == prev else syl[k] for k in range(n) if k not in (i, j)]
    return RelativeWord(tuple(syl), None if syl else w.residue)


def rel_inverse(w: RelativeWord, H: Backend) -> RelativeWord:
    """Inverse, rotated to start with an X-symbol."""
    s = w.syllables
    n = len(s)
    if n == 0:
        return RelativeWord((), H.inv(w.residue) if w.residue is not None else None)
    # (x1^e1 h1 ... xn^en hn)^-1 = hn^-1 xn^-en h(n-1)^-1 ... x1^-e1
    out = []
    for k in range(n - 1, -1, -1):
        h = s[k - 1].h if k > 0 else s[n - 1].h
        out.append(Syllable(s[k].x, -s[k].sign, H.inv(h)))
    return RelativeWord(tuple(out))


def star_x(S: Iterable[RelativeWord], H: Backend) -> set[RelativeWord]:
    """X-initial cyclic permutations of the words and their inverses."""
    out: set[RelativeWord] = set()
    for w in S:
        for v in (w, rel_inverse(w, H)):
            out.update(v.rotate(k) for k in range(len(v)))
    return out


class OrientabilityViolation(NamedTuple):
    kind: str  # "RotationInSet" or "SelfInverseRotation"
    relator: int
    other: int | None = None


def check_orientable(R: list[RelativeWord], H: Backend) -> OrientabilityViolation | None:
    """First violation of orientability, or ``None`` if orientable."""
    for i, r in enumerate(R):
        rots = star_x([r], H)
        for j, s in enumerate(R):
            if j != i and s in rots and s != r:
                return OrientabilityViolation("RotationInSet", i, j)
    for i, r in enumerate(R):
        inv = rel_inverse(r, H)
        if any(inv.rotate(k) == r for k in range(max(len(inv), 1))) and len(r):
            return OrientabilityViolation("SelfInverseRotation", i)
    return None


def augment(u: FPElement, H: FreeProduct, names: Iterable[str] | None = None) -> RelativeWord:
    """Wrap each syllable ``u_k`` of ``u`` as ``x_i u_k x_i^-1 1``.

    The X-generator for factor ``i`` is ``names[i]`` (default ``x1, x2, ...``).
    """
    if H.normal_form(u) != u:
        raise ValueError(f"{u} is not in free-product normal form")
    if len(u.syllables) < 2:
        raise SyllableLengthTooSmall("free product length must be at least 2")
    names = list(names) if names is not None else [f"x{i + 1}" for i in range(len(H.factors))]
    out = []
    for i, x in u.syllables:
        out.append(Syllable(names[i], 1, FPElement(((i, x),))))
        out.append(Syllable(names[i], -1, H.identity()))
    return RelativeWord(tuple(out))


_BLOCK = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*)(?:\s*\^\s*([+-]?1))?\s*(?:\{([^}]*)\})?")


def parse_relative_word(text: str, H: Backend) -> RelativeWord:
    """Parse ``x^±1 { h }`` blocks; a missing block means the identity."""
    syl = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _BLOCK.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"column {pos + 1}: expected 'x^±1 {{h}}' block")
        sign = int(m.group(2)) if m.group(2) else 1
        h = H.parse(m.group(3)) if m.group(3) is not None else H.identity()
        syl.append(Syllable(m.group(1), sign, h))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return RelativeWord(tuple(syl))


def format_relative_word(w: RelativeWord, H: Backend) -> str:
    if not w.syllables:
        if w.residue is None or H.is_identity(w.residue):
            return ""
        return "{" + H.format(w.residue) + "}"
    parts = []
    for s in w.syllables:
        x = s.x if s.sign == 1 else f"{s.x}^-1"
        h = "" if H.is_identity(s.h) else H.format(s.h)
        parts.append(f"{x} {{{h}}}")
    return " ".join(parts)
