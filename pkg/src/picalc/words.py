"""Free-group words over named generators.

A :class:`Word` is an immutable sequence of signed letters.  The default
constructor freely reduces its input; :meth:`Word.raw` keeps the letters
exactly as given, which is what boundary labels of pictures need.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, NamedTuple, Sequence

__all__ = [
    "Letter",
    "Word",
    "RootPeriod",
    "WordError",
    "EmptyWord",
    "NotCyclicallyReduced",
    "WordSyntaxError",
    "parse_word",
    "format_word",
    "reduce",
    "cyclic_reduce",
    "is_cyclically_reduced",
    "root_and_period",
    "are_conjugate",
    "find_conjugator",
    "star_closure",
    "exponent_sums",
]

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class WordError(ValueError):
    pass


class EmptyWord(WordError):
    pass


class NotCyclicallyReduced(WordError):
    pass


class WordSyntaxError(WordError):
    def __init__(self, message: str, column: int | None = None):
        self.column = column
        if column is not None:
            message = f"column {column}: {message}"
        super().__init__(message)


class Letter(NamedTuple):
    gen: str
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)

    def __str__(self) -> str:
        return self.gen if self.sign > 0 else f"{self.gen}^-1"


def _free_reduce(letters: Iterable[tuple[str, int]]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for gen, sign in letters:
        if stack and stack[-1].gen == gen and stack[-1].sign == -sign:
            stack.pop()
        else:
            stack.append(Letter(gen, sign))
    return tuple(stack)


class Word:
    """An element of a free group, or a raw letter sequence.

    >>> Word.parse("a b b^-1 a")
    Word('a^2')
    >>> len(Word.raw(Word.parse("a b").letters + Word.parse("b^-1").letters))
    3
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[tuple[str, int]] = ()):
        self.letters: tuple[Letter, ...] = _free_reduce(letters)
        self._hash: int | None = None

    @classmethod
    def raw(cls, letters: Iterable[tuple[str, int]]) -> "Word":
        w = cls.__new__(cls)
        w.letters = tuple(Letter(g, s) for g, s in letters)
        w._hash = None
        return w

    @classmethod
    def parse(cls, text: str, alphabet: Sequence[str] | None = None) -> "Word":
        return parse_word(text, alphabet)

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "Word":
        sign = 1 if power > 0 else -1
        return cls.raw([(name, sign)] * abs(power))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word.raw(self.letters[item])
        return self.letters[item]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters

    def __lt__(self, other: "Word") -> bool:
        return self.letters < other.letters

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __invert__(self) -> "Word":
        return Word.raw((g, -s) for g, s in reversed(self.letters))

    def inverse(self) -> "Word":
        return ~self

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else ~self
        return Word(base.letters * abs(n))

    def concat(self, other: "Word") -> "Word":
        """Concatenation without free reduction."""
        return Word.raw(self.letters + other.letters)

    def reduced(self) -> "Word":
        return Word(self.letters)

    def is_reduced(self) -> bool:
        return all(
            not (x.gen == y.gen and x.sign == -y.sign)
            for x, y in zip(self.letters, self.letters[1:])
        )

    def rotate(self, k: int) -> "Word":
        n = len(self.letters)
        if n == 0:
            return self
        k %= n
        return Word.raw(self.letters[k:] + self.letters[:k])

    def rotations(self) -> list["Word"]:
        return [self.rotate(k) for k in range(max(len(self.letters), 1))]

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


class RootPeriod(NamedTuple):
    root: Word
    period: int


_TOKEN = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*)(?:\s*\^\s*([+-]?\d+))?")


def parse_word(text: str, alphabet: Sequence[str] | None = None) -> Word:
    """Parse ``name ('^' signed-int)?`` tokens; empty text is the identity.

    A single uppercase letter ``A`` stands for ``a^-1`` when every
    generator name is a single lowercase letter.  Without an alphabet the
    shorthand is allowed if every token in *text* is a single letter.
    """
    tokens: list[tuple[str, int, int]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        exp = int(m.group(2)) if m.group(2) is not None else 1
        tokens.append((m.group(1), exp, m.start(1) + 1))
        pos = m.end()
    if alphabet is not None:
        shorthand = all(len(a) == 1 and a.islower() for a in alphabet)
        known = set(alphabet)
    else:
        shorthand = all(len(name) == 1 for name, _, _ in tokens)
        known = None
    letters: list[tuple[str, int]] = []
    for name, exp, col in tokens:
        if shorthand and len(name) == 1 and name.isupper():
            name, exp = name.lower(), -exp
        if known is not None and name not in known:
            raise WordSyntaxError(f"unknown generator {name!r}", col)
        sign = 1 if exp > 0 else -1
        letters.extend([(name, sign)] * abs(exp))
    return Word(letters)


def format_word(w: Word | Iterable[tuple[str, int]]) -> str:
    """Canonical text: runs of a letter collapse to ``name^k``."""
    letters = w.letters if isinstance(w, Word) else tuple(w)
    out: list[str] = []
    i = 0
    while i < len(letters):
        gen, sign = letters[i]
        j = i
        while j < len(letters) and letters[j] == (gen, sign):
            j += 1
        exp = (j - i) * sign
        out.append(gen if exp == 1 else f"{gen}^{exp}")
        i = j
    return " ".join(out)


def reduce(w: Word) -> Word:
    return Word(w.letters)


def is_cyclically_reduced(w: Word) -> bool:
    if not w.is_reduced():
        return False
    if len(w) < 2:
        return True
    first, last = w.letters[0], w.letters[-1]
    return not (first.gen == last.gen and first.sign == -last.sign)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``conjugator * core * conjugator^-1 == w``."""
    letters = _free_reduce(w.letters)
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i].gen == letters[j - 1].gen and letters[i].sign == -letters[j - 1].sign:
        i += 1
        j -= 1
    return Word.raw(letters[i:j]), Word.raw(letters[:i])


def root_and_period(w: Word) -> RootPeriod:
    if not w:
        raise EmptyWord("root and period are undefined for the empty word")
    if not is_cyclically_reduced(w):
        raise NotCyclicallyReduced(f"{w} is not cyclically reduced")
    n = len(w)
    letters = w.letters
    for d in range(1, n + 1):
        if n % d == 0 and letters[:d] * (n // d) == letters:
            return RootPeriod(Word.raw(letters[:d]), n // d)
    raise AssertionError("unreachable")


def find_conjugator(u: Word, v: Word) -> Word | None:
    """Return ``g`` with ``g u g^-1 == v`` in the free group, or ``None``."""
    cu, gu = cyclic_reduce(u)
    cv, gv = cyclic_reduce(v)
    if len(cu) != len(cv):
        return None
    if not cu:
        return gv * ~gu
    n = len(cu)
    doubled = cu.letters + cu.letters
    target = cv.letters
    for k in range(n):
        if doubled[k:k + n] == target:
            # cv = A^-1 cu A with A the first k letters of cu
            a = Word.raw(cu.letters[:k])
            return gv * ~a * ~gu
    return None


def are_conjugate(u: Word, v: Word) -> bool:
    return find_conjugator(u, v) is not None


def star_closure(relators: Iterable[Word]) -> set[Word]:
    """All cyclic permutations of the relators and of their inverses."""
    out: set[Word] = set()
    for r in relators:
        if not r or not is_cyclically_reduced(r):
            raise NotCyclicallyReduced(f"{r} must be nonempty and cyclically reduced")
        out.update(r.rotations())
        out.update((~r).rotations())
    return out


def exponent_sums(w: Word, alphabet: Sequence[str]) -> list[int]:
    index = {a: i for i, a in enumerate(alphabet)}
    sums = [0] * len(alphabet)
    for g, s in w.letters:
        sums[index[g]] += s
    return sums
