import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from picalc.freeprod import (
    BadFactorIndex,
    FiniteGroup,
    FiniteOrder,
    FPElement,
    FreeProduct,
    Infinite,
    InfiniteCyclic,
    NonGroupTable,
    NotNormalForm,
    fp_conjugate,
    fp_multiply,
    fp_normal_form,
    fp_torsion_witness,
)

Z2 = FiniteGroup.cyclic(2, ["1", "a"])
Z3 = FiniteGroup.cyclic(3, ["e", "c", "c2"])
Z2Z = FreeProduct([Z2, InfiniteCyclic("b")])
Z2Z3 = FreeProduct([Z2, Z3])


def oracle_mul(x, y, factors):
    """Stack-based syllable product, independent of the library's merging."""
    out = []
    for i, g in list(x) + list(y):
        G = factors[i]
        if out and out[-1][0] == i:
            _, h = out.pop()
            g = G.mul(h, g)
        if not G.is_identity(g):
            out.append((i, g))
    return tuple(out)


def alternating(factors, max_len):
    """Every normal form of syllable length <= max_len over finite factors."""
    nonid = [[(i, x) for x in G.elements() if not G.is_identity(x)] for i, G in enumerate(factors)]
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for e in frontier:
            for i, syl in enumerate(nonid):
                if e and e[-1][0] == i:
                    continue
                nxt.extend(e + (s,) for s in syl)
        out.extend(nxt)
        frontier = nxt
    return out


def oracle_order(e, factors, kmax=24):
    p = ()
    for k in range(1, kmax + 1):
        p = oracle_mul(p, e, factors)
        if not p:
            return k
    return None


ELEMENTS_Z2Z3 = alternating([Z2, Z3], 6)


class TestFactorTables:
    def test_parse(self):
        G = FiniteGroup.parse("# Z3\ne c c2\ne c c2\nc c2 e\nc2 e c\n")
        assert G.identity == 0 and G.order(1) == 3 and G.inv(1) == 2

    def test_rejects_non_group(self):
        with pytest.raises(NonGroupTable):
            FiniteGroup.parse("e x\ne x\nx x\n")

    def test_rejects_non_associative(self):
        # a Latin square with identity that is not associative (order-5 loop)
        rows = ["0 1 2 3 4", "1 0 3 4 2", "2 4 0 1 3", "3 2 4 0 1", "4 3 1 2 0"]
        with pytest.raises(NonGroupTable, match="associative"):
            FiniteGroup.parse("0 1 2 3 4\n" + "\n".join(rows))

    def test_unknown_element(self):
        with pytest.raises(NonGroupTable):
            FiniteGroup.parse("e x\ne x\nx q\n")

    def test_load(self, tmp_path):
        f = tmp_path / "z2.txt"
        f.write_text("1 a\n1 a\na 1\n")
        assert FiniteGroup.load(f) == Z2

    def test_duplicate_names_across_factors(self):
        with pytest.raises(ValueError):
            FreeProduct([Z2, FiniteGroup.cyclic(2, ["1", "a"])])


class TestNormalForm:
    def test_examples(self):
        F = Z2Z.factors
        assert fp_normal_form([(0, 1), (0, 1)], F) == FPElement()
        assert fp_normal_form([(0, 1), (1, 1), (1, -1), (0, 1)], F) == FPElement()
        e = ((1, 1), (0, 1), (1, 2))
        assert fp_normal_form(e, F).syllables == e

    def test_bad_index(self):
        with pytest.raises(BadFactorIndex):
            fp_normal_form([(3, 1)], Z2Z.factors)

    def test_parse_format(self):
        e = Z2Z.parse("b a b^-1")
        assert e.syllables == ((1, 1), (0, 1), (1, -1))
        assert Z2Z.format(e) == "b a b^-1"
        assert Z2Z.format(Z2Z.parse("a a")) == "1"

    @given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 2)), max_size=10))
    def test_idempotent_and_matches_oracle(self, syl):
        F = Z2Z3.factors
        syl = [(i, x % (2 if i == 0 else 3)) for i, x in syl]
        nf = fp_normal_form(syl, F)
        assert fp_normal_form(nf, F) == nf
        assert nf.syllables == oracle_mul((), syl, F)

    @given(*[st.sampled_from([e for e in ELEMENTS_Z2Z3 if len(e) <= 6])] * 3)
    @settings(max_examples=200)
    def test_associative(self, x, y, z):
        F = Z2Z3.factors
        x, y, z = FPElement(x), FPElement(y), FPElement(z)
        m = lambda p, q: fp_multiply(p, q, factors=F)  # noqa: E731
        assert m(m(x, y), z) == m(x, m(y, z))


class TestConjugacy:
    def test_examples(self):
        e = Z2Z.parse("b a b^-1")
        g = Z2Z.conjugate(e, Z2Z.parse("a"))
        assert g == Z2Z.parse("b^-1")
        assert Z2Z.conjugate(Z2Z.parse("a"), Z2Z.parse("b")) is None
        ab, ba = Z2Z.parse("a b"), Z2Z.parse("b a")
        g = Z2Z.conjugate(ab, ba)
        assert g is not None and Z2Z.mul(g, ab, Z2Z.inv(g)) == ba

    def test_ab_ba_brute_force(self):
        ab, ba = Z2Z3.parse("a c"), Z2Z3.parse("c a")
        F = Z2Z3.factors
        conj = [g for g in alternating(F, 2) if oracle_mul(oracle_mul(g, ab.syllables, F), Z2Z3.inv(FPElement(g)).syllables, F) == ba.syllables]
        assert conj and Z2Z3.conjugate(ab, ba) is not None

    def test_requires_normal_form(self):
        with pytest.raises(NotNormalForm):
            fp_conjugate(FPElement(((0, 1), (0, 1))), FPElement(), Z2Z.factors)

    def test_infinite_cyclic_sign(self):
        assert Z2Z.conjugate(Z2Z.parse("b"), Z2Z.parse("b^-1")) is None
        assert Z2Z.conjugate(Z2Z.parse("b^2"), Z2Z.parse("a b^2 a")) is not None

    def test_against_brute_force(self):
        F = Z2Z3.factors
        conjugators = alternating(F, 3)
        sample = [e for e in ELEMENTS_Z2Z3 if len(e) <= 3]
        for u in sample:
            orbit = set()
            for g in conjugators:
                ginv = Z2Z3.inv(FPElement(g)).syllables
                orbit.add(oracle_mul(oracle_mul(g, u, F), ginv, F))
            for v in sample:
                got = fp_conjugate(FPElement(u), FPElement(v), F)
                assert (got is not None) == (v in orbit), (u, v)
                if got is not None:
                    assert Z2Z3.mul(got, FPElement(u), Z2Z3.inv(got)) == FPElement(v)


class TestTorsion:
    def test_examples(self):
        w = Z2Z.torsion(Z2Z.parse("b a b^-1"))
        assert w == FiniteOrder(2, Z2Z.parse("b"), Z2Z.parse("a"))
        assert Z2Z.torsion(Z2Z.parse("a b")) == Infinite()
        assert Z2Z.torsion(Z2Z.identity()) == FiniteOrder(1, FPElement(), FPElement())

    def test_infinite_cyclic_letter(self):
        assert Z2Z.torsion(Z2Z.parse("a b a")) == Infinite()

    def test_requires_normal_form(self):
        with pytest.raises(NotNormalForm):
            fp_torsion_witness(FPElement(((0, 0),)), Z2Z.factors)

    def test_witness_reassembles(self):
        for e in ELEMENTS_Z2Z3[:400]:
            w = Z2Z3.torsion(FPElement(e))
            if isinstance(w, FiniteOrder):
                c = w.conjugator
                assert Z2Z3.mul(c, w.element, Z2Z3.inv(c)) == FPElement(e)

    def test_matches_power_oracle(self):
        F = Z2Z3.factors
        for e in ELEMENTS_Z2Z3:
            got = fp_torsion_witness(FPElement(e), F)
            want = oracle_order(e, F)
            assert (got.order if isinstance(got, FiniteOrder) else None) == want, e


def test_power():
    e = Z2Z3.parse("c")
    assert Z2Z3.power(e, 3) == Z2Z3.identity()
    assert Z2Z3.power(e, -1) == Z2Z3.parse("c2")
    assert all(Z2Z3.power(Z2Z3.parse("a c"), k) != Z2Z3.identity() for k in range(1, 10))
