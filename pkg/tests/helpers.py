"""Random generators shared by the property and acceptance tests."""

from __future__ import annotations

import random

from picalc.builder import Factor, picture_from_certificate
from picalc.moves import (
    FloatInv,
    FoldInv,
    InsertX,
    MoveError,
    XSet,
    apply,
    bridge_candidates,
    reductions,
)
from picalc.picture import Picture
from picalc.presentation import Presentation, check_rc
from picalc.words import Letter, Word


def random_word(rng: random.Random, alphabet, lo: int, hi: int) -> Word:
    n = rng.randint(lo, hi)
    return Word(Letter(rng.choice(alphabet), rng.choice((1, -1))) for _ in range(n))


def random_rc_presentation(rng: random.Random, alphabet=("a", "b"), max_rel=2, max_len=4) -> Presentation:
    while True:
        rels = []
        for _ in range(rng.randint(1, max_rel)):
            w = random_word(rng, alphabet, 1, max_len)
            if w:
                rels.append(w)
        if not rels:
            continue
        P = Presentation(tuple(alphabet), tuple(rels))
        if check_rc(P).holds:
            return P


def random_certificate(rng: random.Random, P: Presentation, max_factors=3, max_conj=2) -> tuple[Factor, ...]:
    return tuple(
        Factor(random_word(rng, P.alphabet, 0, max_conj), rng.randrange(len(P.relators)), rng.choice((1, -1)))
        for _ in range(rng.randint(0, max_factors))
    )


def random_move(rng: random.Random, pic: Picture, P: Presentation, X: XSet):
    """A random move legal in ``pic``, or ``None``."""
    corners = sorted(pic.index.face_of)
    kinds = ["reduce", "bridge", "floatinv", "foldinv", "insertx"]
    rng.shuffle(kinds)
    for kind in kinds:
        if kind == "reduce":
            options = list(reductions(pic, P, X))
            if options:
                return rng.choice(options)
        elif kind == "bridge":
            options = list(bridge_candidates(pic))
            rng.shuffle(options)
            for m in options[:8]:
                try:
                    apply(pic, m, P, X)
                except MoveError:
                    continue
                return m
        elif kind == "floatinv":
            return FloatInv(rng.choice(corners), rng.choice(P.alphabet), rng.choice((1, -1)))
        elif kind == "foldinv":
            r = rng.randrange(len(P.relators))
            return FoldInv(rng.choice(corners), r, rng.choice((1, -1)), rng.randrange(len(P.relators[r])))
        elif kind == "insertx" and len(X):
            i = rng.randrange(len(X))
            k = len(P.relators[X[i].relator])
            return InsertX(rng.choice(corners), i, rng.choice((False, True)), rng.randrange(k))
    return None


def random_picture(rng: random.Random, P: Presentation) -> Picture:
    return picture_from_certificate(random_certificate(rng, P), P)
