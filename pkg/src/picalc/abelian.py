"""Smith normal form over the integers and abelianization invariants.

Entries are Python ints, so pivoting never overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .presentation import Presentation
from .words import Word, exponent_sums

__all__ = [
    "IntMatrix",
    "SNFResult",
    "AbelianInvariants",
    "DimensionMismatch",
    "smith_normal_form",
    "abelianization",
    "lattice_membership",
    "matmul",
    "identity",
    "parse_matrix",
    "load_matrix",
]

IntMatrix = tuple[tuple[int, ...], ...]


class DimensionMismatch(ValueError):
    pass


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    if A and len(A[0]) != len(B):
        raise DimensionMismatch(f"{len(A)}x{len(A[0])} times {len(B)}x?")
    cols = len(B[0]) if B else 0
    return tuple(
        tuple(sum(row[k] * B[k][j] for k in range(len(B))) for j in range(cols))
        for row in A
    )


@dataclass(frozen=True)
class SNFResult:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(A: Sequence[Sequence[int]], cols: int | None = None) -> SNFResult:
    """Return ``U, D, V`` with ``U A V == D``, U and V unimodular.

    The diagonal of ``D`` is nonnegative and each entry divides the next.
    ``cols`` fixes the width of an empty matrix.
    """
    m = len(A)
    n = len(A[0]) if m else (cols or 0)
    D = [list(map(int, row)) for row in A]
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    freeze = lambda M: tuple(tuple(r) for r in M)  # noqa: E731
    return SNFResult(freeze(U), freeze(D), freeze(V))


@dataclass(frozen=True)
class AbelianInvariants:
    rank: int
    torsion: tuple[int, ...]

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z_{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def abelianization(P: Presentation) -> AbelianInvariants:
    rows = [exponent_sums(r, P.alphabet) for r in P.relators]
    n = len(P.alphabet)
    snf = smith_normal_form(rows, cols=n)
    diag = snf.diagonal
    nonzero = [d for d in diag if d]
    return AbelianInvariants(n - len(nonzero), tuple(d for d in nonzero if d > 1))


def lattice_membership(v: Sequence[int], rows: Sequence[Sequence[int]]) -> bool:
    """True iff *v* is an integer combination of *rows*."""
    n = len(v)
    for r in rows:
        if len(r) != n:
            raise DimensionMismatch(f"row of length {len(r)} against vector of length {n}")
    if not rows:
        return not any(v)
    snf = smith_normal_form(rows, cols=n)
    # x A = v  <=>  (x U^-1) D = v V
    w = matmul([list(v)], snf.V)[0]
    diag = snf.diagonal
    for j in range(n):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            if w[j] != 0:
                return False
        elif w[j] % d:
            return False
    return True


def word_in_relation_lattice(w: Word, P: Presentation) -> bool:
    rows = [exponent_sums(r, P.alphabet) for r in P.relators]
    return lattice_membership(exponent_sums(w, P.alphabet), rows)


def parse_matrix(text: str) -> IntMatrix:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append(tuple(int(tok) for tok in line.split()))
        except ValueError:
            raise ValueError(f"line {lineno}: expected whitespace-separated integers") from None
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise DimensionMismatch("rows have different lengths")
    return tuple(rows)


def load_matrix(path: str | Path) -> IntMatrix:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))
