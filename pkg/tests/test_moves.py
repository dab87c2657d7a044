import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_move, random_picture, random_rc_presentation
from picalc.builder import Factor, picture_from_certificate
from picalc.moves import (
    BadSegmentPair,
    Bridge,
    DeleteX,
    Float,
    FloatInv,
    Fold,
    FoldInv,
    InsertX,
    MoveError,
    NotAFloatingCircle,
    NotAFoldingPair,
    NotAnXCopy,
    apply,
    apply_all,
    build_xset,
    folding_pair_picture,
    inverse,
    move_from_json,
    move_to_json,
    moves_from_json,
    moves_to_json,
    reduce_spherical,
    x_picture,
)
from picalc.picture import (
    NotSpherical,
    assemble,
    Boundary,
    boundary_label,
    classify_two_vertex_subpicture,
    is_isomorphic,
    signed_vertex_count,
    validate,
)
from picalc.presentation import Presentation, RcViolated
from picalc.words import Word


def P(gens, *rels):
    return Presentation.from_strings(gens.split(), rels)


AA = P("a", "a a")
A4 = P("a", "a^4")
EMPTY = assemble([], Boundary(), [])


def lollipops(pres, *signs):
    return picture_from_certificate([Factor(Word(), 0, s) for s in signs], pres)


def arc_ends(pic):
    ix = pic.index
    return sorted(
        tuple(sorted(ix.position[(a.id, e)][0][0] for e in (0, 1))) for a in pic.arcs if not a.free_loop
    )


class TestBridge:
    def test_dipole_arcs(self):
        pic = lollipops(AA, 1, -1)
        q = apply(pic, Bridge(1, 1, 2, 0), AA)
        assert boundary_label(q).letters == boundary_label(pic).letters
        assert validate(q, AA).valid
        # one arc now joins the two vertices, one runs boundary to boundary
        assert arc_ends(q) == [("b", "b"), ("b", "v"), ("b", "v"), ("v", "v")]

    def test_orientation_mismatch(self):
        with pytest.raises(BadSegmentPair):
            apply(lollipops(AA, 1, -1), Bridge(0, 0, 1, 1), AA)

    def test_label_mismatch(self):
        pres = P("a b", "a b")
        with pytest.raises(BadSegmentPair):
            apply(lollipops(pres, 1, -1), Bridge(0, 0, 1, 0), pres)

    def test_bridge_twice_is_identity_up_to_isomorphism(self):
        pic = lollipops(AA, 1, -1)
        q = apply(pic, Bridge(1, 1, 2, 0), AA)
        back = None
        from picalc.moves import bridge_candidates

        for b in bridge_candidates(q):
            try:
                r = apply(q, b, AA)
            except MoveError:
                continue
            if is_isomorphic(r, pic):
                back = r
        assert back is not None

    def test_counts_untouched(self):
        pic = lollipops(AA, 1, -1)
        q = apply(pic, Bridge(1, 1, 2, 0), AA)
        assert signed_vertex_count(q, AA) == signed_vertex_count(pic, AA)
        assert len(q.arcs) == len(pic.arcs)


class TestFloat:
    def test_float_inverse_round_trip(self):
        pic = lollipops(AA, 1)
        for region in sorted(pic.index.face_of)[:4]:
            q = apply(pic, FloatInv(region, "a", -1), AA)
            loop = max(a.id for a in q.arcs)
            assert validate(q, AA).valid
            assert is_isomorphic(apply(q, Float(loop), AA), pic)

    def test_not_a_loop(self):
        with pytest.raises(NotAFloatingCircle):
            apply(lollipops(AA, 1), Float(0), AA)

    def test_enclosing_loop(self):
        pic = apply(EMPTY, FloatInv(("b", 0, 0), "a"), AA)
        pic = apply(pic, FoldInv(("l", 0, 1), 0), AA)
        with pytest.raises(NotAFloatingCircle):
            apply(pic, Float(0), AA)
        # once the pair inside is folded the circle floats again
        pic = apply(pic, Fold(0, 1), AA)
        assert apply(pic, Float(0), AA).is_empty()

    def test_unknown_label(self):
        with pytest.raises(MoveError):
            apply(EMPTY, FloatInv(("b", 0, 0), "z"), AA)


class TestFold:
    def test_canonical_pair_folds_to_empty(self):
        assert apply(folding_pair_picture(AA, 0), Fold(0, 1), AA).is_empty()

    def test_fold_inverse(self):
        pic = lollipops(AA, 1)
        q = apply(pic, FoldInv(("b", 0, 0), 0, -1, 1), AA)
        assert validate(q, AA).valid and len(q.vertices) == 3
        assert signed_vertex_count(q, AA) == signed_vertex_count(pic, AA)
        assert is_isomorphic(apply(q, inverse(pic, FoldInv(("b", 0, 0), 0, -1, 1), AA), AA), pic)

    def test_not_a_folding_pair(self):
        with pytest.raises(NotAFoldingPair):
            apply(lollipops(AA, 1, -1), Fold(0, 1), AA)
        with pytest.raises(NotAFoldingPair):
            apply(x_picture(A4, 0, 1), Fold(0, 1), A4)


class TestXSet:
    def test_no_proper_powers(self):
        assert len(build_xset(P("a b", "a b"))) == 0

    def test_aa(self):
        X = build_xset(AA)
        assert [(e.relator, e.exponent) for e in X.entries] == [(0, 1)]
        assert classify_two_vertex_subpicture(X[0].picture, 0, 1, AA) == ("PrimitiveDipole", 1)
        assert validate(X[0].picture, AA).valid

    def test_a4(self):
        X = build_xset(A4)
        assert [e.exponent for e in X.entries] == [f for f in range(1, 4) if f in (1, 3)]
        for e in X.entries:
            assert classify_two_vertex_subpicture(e.picture, 0, 1, A4) == ("PrimitiveDipole", e.exponent)

    def test_requires_rc(self):
        with pytest.raises(RcViolated):
            build_xset(P("a b", "a b", "b a"))

    def test_delete_insert(self):
        X = build_xset(A4)
        for i in range(len(X)):
            for mirrored in (False, True):
                pic = apply(EMPTY, InsertX(("b", 0, 0), i, mirrored), A4, X)
                assert validate(pic, A4).valid
                q = apply(pic, DeleteX(0, 1, i, mirrored), A4, X)
                assert q.is_empty()

    def test_delete_wrong_copy(self):
        X = build_xset(A4)
        with pytest.raises(NotAnXCopy):
            apply(folding_pair_picture(A4, 0), DeleteX(0, 1, 0), A4, X)


class TestInverse:
    @given(st.integers(0, 10**6))
    @settings(max_examples=80, deadline=None)
    def test_round_trip(self, seed):
        rng = random.Random(seed)
        pres = random_rc_presentation(rng)
        X = build_xset(pres)
        pic = random_picture(rng, pres)
        corners = sorted(pic.index.face_of)
        region = rng.choice(corners)
        r = rng.randrange(len(pres.relators))
        moves = [
            FloatInv(region, rng.choice(pres.alphabet), rng.choice((1, -1))),
            FoldInv(region, r, rng.choice((1, -1)), rng.randrange(len(pres.relators[r]))),
        ]
        if len(X):
            i = rng.randrange(len(X))
            moves.append(InsertX(region, i, rng.choice((False, True)), rng.randrange(len(pres.relators[X[i].relator]))))
        for m in moves:
            q = apply(pic, m, pres, X)
            back = apply(q, inverse(pic, m, pres, X), pres, X)
            assert is_isomorphic(back, pic)
            # and the other way round: undo the removal
            m2 = inverse(pic, m, pres, X)
            again = apply(back, inverse(q, m2, pres, X), pres, X)
            assert is_isomorphic(again, q)


class TestRandomSequences:
    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_invariants(self, seed):
        rng = random.Random(seed)
        pres = random_rc_presentation(rng)
        X = build_xset(pres)
        pic = random_picture(rng, pres)
        label = boundary_label(pic).letters
        for _ in range(rng.randint(1, 12)):
            m = random_move(rng, pic, pres, X)
            if m is None:
                break
            before = signed_vertex_count(pic, pres)
            pic = apply(pic, m, pres, X)
            assert validate(pic, pres).valid, m
            assert boundary_label(pic).letters == label
            assert signed_vertex_count(pic, pres) == before


class TestReduce:
    def test_folding_pair(self):
        out, trace, emptied = reduce_spherical(folding_pair_picture(AA, 0), build_xset(AA), AA)
        assert emptied and trace == [Fold(0, 1)]

    def test_two_pairs(self):
        pic = apply(folding_pair_picture(AA, 0), FoldInv(("b", 0, 0), 0), AA)
        out, trace, emptied = reduce_spherical(pic, build_xset(AA), AA)
        assert emptied and [type(m) for m in trace] == [Fold, Fold]

    def test_primitive_dipole(self):
        X = build_xset(A4)
        out, trace, emptied = reduce_spherical(x_picture(A4, 0, 3), X, A4)
        assert emptied and isinstance(trace[0], DeleteX)

    def test_not_spherical(self):
        with pytest.raises(NotSpherical):
            reduce_spherical(lollipops(AA, 1), build_xset(AA), AA)

    def test_budget(self):
        pic = apply(folding_pair_picture(AA, 0), FoldInv(("b", 0, 0), 0), AA)
        out, trace, emptied = reduce_spherical(pic, build_xset(AA), AA, budget=1)
        assert not emptied and len(trace) == 1

    def test_trace_replays(self):
        rng = random.Random(11)
        for _ in range(15):
            pres = random_rc_presentation(rng)
            X = build_xset(pres)
            pic = EMPTY
            for _ in range(4):
                m = random_move(rng, pic, pres, X)
                if m is not None and not isinstance(m, Bridge):
                    pic = apply(pic, m, pres, X)
            out, trace, emptied = reduce_spherical(pic, X, pres)
            assert apply_all(pic, trace, pres, X) == out
            assert emptied == out.is_empty()
            assert not any(isinstance(m, (FoldInv, InsertX, FloatInv)) for m in trace)


class TestSerialization:
    def test_round_trip(self):
        ms = [
            Bridge(1, 0, 2, 1),
            Float(3),
            FloatInv(("b", 0, 0), "a", -1),
            Fold(0, 1),
            FoldInv(("v", 2, 1), 0, -1, 2),
            DeleteX(0, 1, 0, True),
            InsertX(("l", 4, 1), 1, False, 3),
        ]
        for m in ms:
            assert move_from_json(move_to_json(m)) == m
        assert moves_from_json(moves_to_json(ms)) == ms

    def test_tag(self):
        assert move_to_json(Fold(0, 1))["move"] == "Fold"

    def test_unknown_tag(self):
        with pytest.raises((ValueError, KeyError)):
            move_from_json({"move": "Teleport"})
