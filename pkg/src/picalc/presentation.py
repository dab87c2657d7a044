"""Group presentations and their hygiene checks.

Pieces follow the usual symmetrized-relator definition: a nonempty word is
a piece when it is a common prefix of two distinct elements of ``R*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple

from .words import (
    NotCyclicallyReduced,
    RootPeriod,
    Word,
    WordSyntaxError,
    find_conjugator,
    is_cyclically_reduced,
    parse_word,
    root_and_period,
    star_closure,
)

__all__ = [
    "Presentation",
    "PresentationParseError",
    "RcViolated",
    "Violation",
    "RcReport",
    "Piece",
    "SmallCancellationReport",
    "check_rc",
    "proper_power_census",
    "stars_disjoint",
    "pieces",
    "check_small_cancellation",
    "min_piece_count",
]

_NAME_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


class PresentationParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class RcViolated(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    alphabet: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "relators", tuple(Word(r.letters) for r in self.relators))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("generator names must be unique")
        for name in self.alphabet:
            if not name or not name[0].isalpha() or not set(name) <= _NAME_CHARS:
                raise ValueError(f"bad generator name {name!r}")
        known = set(self.alphabet)
        for r in self.relators:
            extra = r.generators() - known
            if extra:
                raise ValueError(f"relator {r} uses unknown generators {sorted(extra)}")

    @classmethod
    def from_strings(cls, alphabet: Iterable[str], relators: Iterable[str]) -> "Presentation":
        alphabet = tuple(alphabet)
        return cls(alphabet, tuple(parse_word(r, alphabet) for r in relators))

    @cached_property
    def root_periods(self) -> tuple[RootPeriod | None, ...]:
        """Root/period per relator; ``None`` where undefined."""
        out = []
        for r in self.relators:
            if r and is_cyclically_reduced(r):
                out.append(root_and_period(r))
            else:
                out.append(None)
        return tuple(out)

    def period(self, i: int) -> int:
        rp = self.root_periods[i]
        if rp is None:
            raise NotCyclicallyReduced(f"relator {i} has no period")
        return rp.period

    def union(self, other: "Presentation") -> "Presentation":
        if self.alphabet != other.alphabet:
            raise ValueError("presentations must share one alphabet")
        return Presentation(self.alphabet, self.relators + other.relators)

    def to_text(self) -> str:
        lines = ["[generators]", " ".join(self.alphabet), "[relators]"]
        lines += [str(r) for r in self.relators]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, path: str | None = None) -> "Presentation":
        section = None
        gens: list[str] = []
        rel_lines: list[tuple[int, str]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line in ("[generators]", "[relators]"):
                if line == "[relators]" and section != "generators":
                    raise PresentationParseError("[relators] must follow [generators]", lineno, path)
                section = line[1:-1]
                continue
            if section == "generators":
                gens.extend(line.split())
            elif section == "relators":
                rel_lines.append((lineno, line))
            else:
                raise PresentationParseError("content before [generators] section", lineno, path)
        if section is None:
            raise PresentationParseError("missing [generators] section", None, path)
        relators = []
        for lineno, line in rel_lines:
            try:
                relators.append(parse_word(line, gens))
            except WordSyntaxError as exc:
                raise PresentationParseError(str(exc), lineno, path) from None
        try:
            return cls(tuple(gens), tuple(relators))
        except ValueError as exc:
            raise PresentationParseError(str(exc), None, path) from None

    @classmethod
    def load(cls, path: str | Path) -> "Presentation":
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), str(path))


class Violation(NamedTuple):
    kind: str
    indices: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(map(str, self.indices))})"


@dataclass(frozen=True)
class RcReport:
    violations: tuple[Violation, ...] = ()

    @property
    def holds(self) -> bool:
        return not self.violations


def check_rc(P: Presentation) -> RcReport:
    """Report every failure of the relator condition."""
    rels = P.relators
    found: list[Violation] = []
    for i, r in enumerate(rels):
        if not r:
            found.append(Violation("EmptyRelator", (i,)))
        elif not is_cyclically_reduced(r):
            found.append(Violation("NotCyclicallyReduced", (i,)))
    for i, r in enumerate(rels):
        for j in range(i + 1, len(rels)):
            s = rels[j]
            if find_conjugator(r, s) is not None or find_conjugator(r, ~s) is not None:
                found.append(Violation("ConjugatePair", (i, j)))
    for i, r in enumerate(rels):
        if r and find_conjugator(r, ~r) is not None:
            found.append(Violation("ConjugateToInverse", (i,)))
    return RcReport(tuple(found))


def _require_rc(P: Presentation) -> None:
    report = check_rc(P)
    if not report.holds:
        raise RcViolated("; ".join(map(str, report.violations)))


def proper_power_census(P: Presentation) -> list[tuple[int, RootPeriod]]:
    out = []
    for i, r in enumerate(P.relators):
        if not r or not is_cyclically_reduced(r):
            raise NotCyclicallyReduced(f"relator {i} ({r}) is not cyclically reduced")
        rp = root_and_period(r)
        if rp.period > 1:
            out.append((i, rp))
    return out


def stars_disjoint(R1: Iterable[Word], R2: Iterable[Word]) -> Word | None:
    """Return a common element of ``R1*`` and ``R2*``, or ``None`` when disjoint."""
    s1 = star_closure(R1)
    s2 = star_closure(R2)
    common = s1 & s2
    return min(common) if common else None


@dataclass(frozen=True)
class Piece:
    word: Word
    occurrences: tuple[Word, ...]


def _common_prefix_len(u: Word, v: Word) -> int:
    n = 0
    for x, y in zip(u.letters, v.letters):
        if x != y:
            break
        n += 1
    return n


def pieces(P: Presentation) -> dict[Word, Piece]:
    """All pieces of ``P`` keyed by word."""
    _require_rc(P)
    sym = sorted(star_closure(P.relators))
    found: dict[Word, set[Word]] = {}
    for i, u in enumerate(sym):
        for v in sym[i + 1:]:
            n = _common_prefix_len(u, v)
            for k in range(1, n + 1):
                found.setdefault(u[:k], set()).update((u, v))
    return {w: Piece(w, tuple(sorted(occ))) for w, occ in found.items()}


def min_piece_count(r: Word, piece_words: set[Word] | dict) -> float:
    """Fewest pieces whose concatenation is some cyclic permutation of ``r``."""
    best = math.inf
    n = len(r)
    for rot in r.rotations():
        letters = rot.letters
        cost = [math.inf] * (n + 1)
        cost[0] = 0
        for j in range(1, n + 1):
            for i in range(j):
                if cost[i] + 1 < cost[j] and Word.raw(letters[i:j]) in piece_words:
                    cost[j] = cost[i] + 1
        best = min(best, cost[n])
    return best


@dataclass(frozen=True)
class SmallCancellationReport:
    p: int
    counts: tuple[float, ...]
    holds: bool = field(default=True)

    @property
    def failing(self) -> list[int]:
        return [i for i, c in enumerate(self.counts) if c < self.p]


def check_small_cancellation(P: Presentation, p: int) -> SmallCancellationReport:
    """Decide C(p); ``counts[i]`` is ``inf`` when relator *i* is no product of pieces."""
    if p < 1:
        raise ValueError("p must be positive")
    piece_words = pieces(P)
    counts = tuple(min_piece_count(r, piece_words) for r in P.relators)
    return SmallCancellationReport(p, counts, all(c >= p for c in counts))
