import itertools
import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from picalc.abelian import (
    DimensionMismatch,
    abelianization,
    lattice_membership,
    load_matrix,
    matmul,
    parse_matrix,
    smith_normal_form,
    word_in_relation_lattice,
)
from picalc.presentation import Presentation
from picalc.words import parse_word


def P(gens, *rels):
    return Presentation.from_strings(gens.split(), rels)


def determinantal_divisors(A):
    """gcd of all k x k minors, for each k, straight from the definition."""
    M = sympy.Matrix(A)
    rows, cols = M.shape
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = math.gcd(g, int(M.extract(list(rs), list(cs)).det()))
        out.append(g)
    return out


def expected_diagonal(A):
    divs = determinantal_divisors(A)
    diag, prev = [], 1
    for d in divs:
        if d == 0:
            diag.append(0)
        else:
            diag.append(d // prev)
            prev = d
    return diag


def check_snf(A):
    res = smith_normal_form(A)
    assert matmul(matmul(res.U, A), res.V) == res.D
    assert sympy.Matrix(res.U).det() in (1, -1)
    assert sympy.Matrix(res.V).det() in (1, -1)
    for i, row in enumerate(res.D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    diag = res.diagonal
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)
    return res


class TestSmithNormalForm:
    @pytest.mark.parametrize(
        "A, diag",
        [([[0]], (0,)), ([[2, 0], [0, 3]], (1, 6)), ([[2, 4], [6, 8]], (2, 4))],
    )
    def test_examples(self, A, diag):
        assert check_snf(A).diagonal == diag
        assert list(diag) == expected_diagonal(A)

    def test_empty(self):
        res = smith_normal_form([], cols=3)
        assert res.diagonal == () and res.V == tuple(tuple(int(i == j) for j in range(3)) for i in range(3))

    def test_rectangular(self):
        A = [[4, 6, 8]]
        assert check_snf(A).diagonal == (2,)
        assert check_snf([[4], [6], [9]]).diagonal == (1,)

    def test_large_entries(self):
        A = [[10**30, 3], [7, 10**29 + 1]]
        res = check_snf(A)
        assert res.diagonal[0] * res.diagonal[1] == abs(int(sympy.Matrix(A).det()))

    @given(
        st.integers(1, 4).flatmap(
            lambda r: st.integers(1, 4).flatmap(
                lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
            )
        )
    )
    @settings(max_examples=150)
    def test_matches_minor_oracle(self, A):
        assert list(check_snf(A).diagonal) == expected_diagonal(A)

    @given(st.lists(st.lists(st.integers(-9, 9), min_size=5, max_size=5), min_size=5, max_size=6))
    @settings(max_examples=40)
    def test_matches_sympy_invariant_factors(self, A):
        nonzero = [d for d in check_snf(A).diagonal if d]
        ref = [abs(int(d)) for d in invariant_factors(sympy.Matrix(A), domain=sympy.ZZ) if d]
        assert nonzero == ref


class TestAbelianization:
    def test_examples(self):
        ab = abelianization(P("a", "a a"))
        assert (ab.rank, ab.torsion) == (0, (2,))
        ab = abelianization(P("a b", "a a"))
        assert (ab.rank, ab.torsion) == (1, (2,))
        ab = abelianization(P("a b"))
        assert (ab.rank, ab.torsion) == (2, ())

    def test_commutator_is_torsion_free(self):
        ab = abelianization(P("a b", "a b A B"))
        assert (ab.rank, ab.torsion) == (2, ())

    def test_str(self):
        assert str(abelianization(P("a b", "a a"))) == "Z + Z_2"
        assert str(abelianization(P("a", "a"))) == "0"

    def test_chain(self):
        ab = abelianization(P("a b", "a^4", "b^6"))
        assert (ab.rank, ab.torsion) == (0, (2, 12))


class TestLattice:
    def test_examples(self):
        assert not lattice_membership([1], [[2]])
        assert lattice_membership([4], [[2]])
        assert not lattice_membership([1, 1], [[2, 0], [0, 3]])

    def test_empty_rows(self):
        assert lattice_membership([0, 0], [])
        assert not lattice_membership([0, 1], [])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            lattice_membership([1, 2], [[1]])

    @given(
        st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=2), min_size=1, max_size=3),
        st.lists(st.integers(-3, 3), min_size=3, max_size=3),
    )
    @settings(max_examples=80)
    def test_combinations_are_members(self, rows, coeffs):
        v = [sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(2)]
        assert lattice_membership(v, rows)

    @given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=1, max_size=2),
           st.lists(st.integers(-6, 6), min_size=2, max_size=2))
    @settings(max_examples=80)
    def test_matches_bounded_search(self, rows, v):
        # brute force over small coefficients; only trusted in the positive direction
        found = any(
            [sum(c * r[j] for c, r in zip(cs, rows)) for j in range(2)] == v
            for cs in itertools.product(range(-12, 13), repeat=len(rows))
        )
        if found:
            assert lattice_membership(v, rows)
        if not lattice_membership(v, rows):
            assert not found

    def test_word_in_relation_lattice(self):
        pres = P("a b", "a a")
        assert word_in_relation_lattice(parse_word("a b a B"), pres)
        assert not word_in_relation_lattice(parse_word("a"), pres)


class TestMatrixFormat:
    def test_parse(self):
        assert parse_matrix("# m\n1 2\n-3 4\n\n") == ((1, 2), (-3, 4))

    def test_ragged(self):
        with pytest.raises(DimensionMismatch):
            parse_matrix("1 2\n3\n")

    def test_garbage(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_matrix("1\nx\n")

    def test_load(self, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text("2 0\n0 3\n")
        assert smith_normal_form(load_matrix(f)).diagonal == (1, 6)
