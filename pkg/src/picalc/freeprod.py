"""Free products of finite (table-given) and infinite cyclic groups.

Elements are sequences of syllables ``(factor index, factor element)``.
Finite factors index their elements by position in the table; infinite
cyclic factors use nonzero ints.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Hashable, NamedTuple, Sequence, Union

__all__ = [
    "FiniteGroup",
    "InfiniteCyclic",
    "FactorGroup",
    "FPElement",
    "FreeProduct",
    "NonGroupTable",
    "BadFactorIndex",
    "NotNormalForm",
    "Infinite",
    "FiniteOrder",
    "fp_normal_form",
    "fp_multiply",
    "fp_inverse",
    "fp_conjugate",
    "fp_torsion_witness",
    "cyclically_reduce",
]


class NonGroupTable(ValueError):
    pass


class BadFactorIndex(ValueError):
    pass


class NotNormalForm(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by element names and a multiplication table."""

    names: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "table", tuple(tuple(r) for r in self.table))
        n = len(self.names)
        if n == 0:
            raise NonGroupTable("a group has at least one element")
        if len(set(self.names)) != n:
            raise NonGroupTable("element names must be distinct")
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise NonGroupTable(f"table must be {n}x{n}")
        if any(not 0 <= x < n for r in self.table for x in r):
            raise NonGroupTable("table entries out of range")
        ids = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if not ids:
            raise NonGroupTable("no identity element")
        e = ids[0]
        T = self.table
        for x, y, z in product(range(n), repeat=3):
            if T[T[x][y]][z] != T[x][T[y][z]]:
                raise NonGroupTable(f"not associative at ({self.names[x]}, {self.names[y]}, {self.names[z]})")
        inv = []
        for x in range(n):
            ys = [y for y in range(n) if T[x][y] == e]
            if not ys:
                raise NonGroupTable(f"{self.names[x]} has no inverse")
            inv.append(ys[0])
        object.__setattr__(self, "_identity", e)
        object.__setattr__(self, "_inverse", tuple(inv))

    @classmethod
    def cyclic(cls, n: int, names: Sequence[str] | None = None) -> "FiniteGroup":
        if names is None:
            names = ["1"] + [f"g{k}" for k in range(1, n)]
        return cls(tuple(names), tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))

    @classmethod
    def parse(cls, text: str) -> "FiniteGroup":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise NonGroupTable("empty factor table")
        names = lines[0]
        index = {nm: i for i, nm in enumerate(names)}
        rows = []
        for k, row in enumerate(lines[1:], start=1):
            try:
                rows.append(tuple(index[t] for t in row))
            except KeyError as exc:
                raise NonGroupTable(f"row {k}: unknown element {exc.args[0]!r}") from None
        return cls(tuple(names), tuple(rows))

    @classmethod
    def load(cls, path: str | Path) -> "FiniteGroup":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    @property
    def identity(self) -> int:
        return self._identity

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self._inverse[x]

    def is_identity(self, x: int) -> bool:
        return x == self._identity

    def is_element(self, x) -> bool:
        return isinstance(x, int) and 0 <= x < len(self.names)

    def elements(self) -> range:
        return range(len(self.names))

    def order(self, x: int) -> int:
        k, y = 1, x
        while y != self._identity:
            y = self.table[y][x]
            k += 1
        return k

    def conjugator(self, x: int, y: int) -> int | None:
        """Some ``t`` with ``t x t^-1 == y``."""
        for t in self.elements():
            if self.mul(self.mul(t, x), self.inv(t)) == y:
                return t
        return None

    def format(self, x: int) -> str:
        return self.names[x]

    def parse_element(self, text: str) -> int:
        text = text.strip()
        if text in self.names:
            return self.names.index(text)
        raise ValueError(f"unknown element {text!r}")


@dataclass(frozen=True)
class InfiniteCyclic:
    name: str = "t"

    identity = 0

    def mul(self, x: int, y: int) -> int:
        return x + y

    def inv(self, x: int) -> int:
        return -x

    def is_identity(self, x: int) -> bool:
        return x == 0

    def is_element(self, x) -> bool:
        return isinstance(x, int)

    def order(self, x: int) -> int | None:
        return 1 if x == 0 else None

    def conjugator(self, x: int, y: int) -> int | None:
        return 0 if x == y else None

    def format(self, x: int) -> str:
        if x == 0:
            return "1"
        return self.name if x == 1 else f"{self.name}^{x}"


FactorGroup = Union[FiniteGroup, InfiniteCyclic]


class FPElement(NamedTuple):
    syllables: tuple[tuple[int, Hashable], ...] = ()

    def __len__(self) -> int:  # syllable length
        return len(self.syllables)


def _check_index(factors: Sequence[FactorGroup], i) -> FactorGroup:
    if not isinstance(i, int) or not 0 <= i < len(factors):
        raise BadFactorIndex(f"factor index {i!r} out of range")
    return factors[i]


def fp_normal_form(e: FPElement | Sequence, factors: Sequence[FactorGroup]) -> FPElement:
    """Merge adjacent syllables from one factor and drop identities."""
    syl = e.syllables if isinstance(e, FPElement) else tuple(e)
    stack: list[tuple[int, Hashable]] = []
    for i, x in syl:
        G = _check_index(factors, i)
        if not G.is_element(x):
            raise NonGroupTable(f"{x!r} is not an element of factor {i}")
        if stack and stack[-1][0] == i:
            x = G.mul(stack.pop()[1], x)
        if not G.is_identity(x):
            stack.append((i, x))
    return FPElement(tuple(stack))


def is_normal_form(e: FPElement, factors: Sequence[FactorGroup]) -> bool:
    try:
        return fp_normal_form(e, factors) == e
    except (BadFactorIndex, NonGroupTable):
        return False


def _require_nf(e: FPElement, factors: Sequence[FactorGroup]) -> None:
    if not is_normal_form(e, factors):
        raise NotNormalForm(f"{e} is not in normal form")


def fp_multiply(*elements: FPElement, factors: Sequence[FactorGroup]) -> FPElement:
    syl: tuple = ()
    for e in elements:
        syl += tuple(e.syllables)
    return fp_normal_form(syl, factors)


def fp_inverse(e: FPElement, factors: Sequence[FactorGroup]) -> FPElement:
    return FPElement(tuple((i, factors[i].inv(x)) for i, x in reversed(e.syllables)))


def cyclically_reduce(e: FPElement, factors: Sequence[FactorGroup]) -> tuple[FPElement, FPElement]:
    """Return ``(core, c)`` with ``e == c core c^-1`` and core cyclically reduced."""
    core = fp_normal_form(e, factors)
    c = FPElement()
    while len(core) >= 2 and core.syllables[0][0] == core.syllables[-1][0]:
        last = FPElement((core.syllables[-1],))
        # e = last^-1 (last core last^-1) last
        core = fp_multiply(last, core, fp_inverse(last, factors), factors=factors)
        c = fp_multiply(c, fp_inverse(last, factors), factors=factors)
    return core, c


def fp_conjugate(e1: FPElement, e2: FPElement, factors: Sequence[FactorGroup]) -> FPElement | None:
    """Return ``g`` with ``g e1 g^-1 == e2``, or ``None`` when not conjugate."""
    _require_nf(e1, factors)
    _require_nf(e2, factors)
    k1, c1 = cyclically_reduce(e1, factors)
    k2, c2 = cyclically_reduce(e2, factors)
    inv = lambda x: fp_inverse(x, factors)  # noqa: E731
    if len(k1) != len(k2):
        return None
    if len(k1) == 0:
        t = FPElement()
    elif len(k1) == 1:
        (i, x), (j, y) = k1.syllables[0], k2.syllables[0]
        if i != j:
            return None
        s = factors[i].conjugator(x, y)
        if s is None:
            return None
        t = fp_normal_form([(i, s)], factors)
    else:
        n = len(k1)
        doubled = k1.syllables + k1.syllables
        for k in range(n):
            if doubled[k:k + n] == k2.syllables:
                # k2 = A^-1 k1 A with A the first k syllables of k1
                t = inv(FPElement(k1.syllables[:k]))
                break
        else:
            return None
    return fp_multiply(c2, t, inv(c1), factors=factors)


class Infinite(NamedTuple):
    pass


class FiniteOrder(NamedTuple):
    order: int
    conjugator: FPElement
    element: FPElement


def fp_torsion_witness(e: FPElement, factors: Sequence[FactorGroup]) -> Infinite | FiniteOrder:
    """Order of ``e``; finite orders come with ``e == conjugator element conjugator^-1``."""
    _require_nf(e, factors)
    core, c = cyclically_reduce(e, factors)
    if len(core) == 0:
        return FiniteOrder(1, c, core)
    if len(core) >= 2:
        return Infinite()
    i, x = core.syllables[0]
    order = factors[i].order(x)
    if order is None:
        return Infinite()
    return FiniteOrder(order, c, core)


class FreeProduct:
    """Convenience wrapper holding the factors, with text I/O.

    Element names must be unique across factors; an infinite cyclic factor
    named ``b`` accepts ``b``, ``b^k``.
    """

    def __init__(self, factors: Sequence[FactorGroup]):
        self.factors = tuple(factors)
        self._names: dict[str, tuple[int, Hashable]] = {}
        for i, G in enumerate(self.factors):
            if isinstance(G, FiniteGroup):
                for x in G.elements():
                    if not G.is_identity(x):
                        self._add_name(G.names[x], (i, x))
            else:
                self._add_name(G.name, (i, 1))

    def _add_name(self, name: str, syl) -> None:
        if name in self._names:
            raise ValueError(f"element name {name!r} is used by two factors")
        self._names[name] = syl

    identity_element = FPElement()

    def identity(self) -> FPElement:
        return FPElement()

    def element(self, syllables) -> FPElement:
        return fp_normal_form(syllables, self.factors)

    def mul(self, *es: FPElement) -> FPElement:
        return fp_multiply(*es, factors=self.factors)

    def inv(self, e: FPElement) -> FPElement:
        return fp_inverse(e, self.factors)

    def is_identity(self, e: FPElement) -> bool:
        return not e.syllables

    def power(self, e: FPElement, k: int) -> FPElement:
        base = e if k >= 0 else self.inv(e)
        out = FPElement()
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def parse(self, text: str) -> FPElement:
        syl = []
        for tok in text.split():
            m = re.fullmatch(r"(.+?)(?:\^([+-]?\d+))?", tok)
            name, exp = m.group(1), int(m.group(2) or 1)
            if name == "1":
                continue
            if name not in self._names:
                raise ValueError(f"unknown element {name!r}")
            i, x = self._names[name]
            G = self.factors[i]
            if isinstance(G, InfiniteCyclic):
                syl.append((i, exp))
            else:
                y = G.identity
                base = x if exp > 0 else G.inv(x)
                for _ in range(abs(exp)):
                    y = G.mul(y, base)
                syl.append((i, y))
        return fp_normal_form(syl, self.factors)

    def format(self, e: FPElement) -> str:
        if not e.syllables:
            return "1"
        return " ".join(self.factors[i].format(x) for i, x in e.syllables)

    def normal_form(self, e) -> FPElement:
        return fp_normal_form(e, self.factors)

    def conjugate(self, e1: FPElement, e2: FPElement) -> FPElement | None:
        return fp_conjugate(e1, e2, self.factors)

    def torsion(self, e: FPElement) -> Infinite | FiniteOrder:
        return fp_torsion_witness(e, self.factors)
