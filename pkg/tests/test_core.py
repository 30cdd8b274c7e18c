from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_supermodular_table, subsets
from supdense.core import (
    GraphFunction,
    GroundSet,
    OracleKind,
    TableFunction,
    check_monotone_supermodular,
    density,
    format_rational,
    from_mask,
    lovasz_coefficients,
    lovasz_extension,
    parse_rational,
    pick_maximal,
    pick_maximal_array,
    read_graph,
    read_table,
    to_mask,
)
from supdense.errors import CapExceeded, CoordinateOutOfRange, EmptySubset, FormatError

import numpy as np


def test_density_examples(k3, path3):
    assert density(k3, {0, 1, 2}) == 1
    assert density(k3, {0, 1}) == Fraction(1, 2)
    assert density(path3, {0, 1, 2}) == Fraction(2, 3)
    assert max(density(path3, s) for s in subsets(range(3)) if s) == Fraction(2, 3)


def test_density_empty(k3):
    with pytest.raises(EmptySubset):
        density(k3, set())


def test_ground_set_validation():
    with pytest.raises(ValueError):
        GroundSet(0)
    with pytest.raises(ValueError):
        GroundSet(2, ("a", "a"))
    g = GroundSet(3, ("x", "y", "z"))
    assert g.label(1) == "y" and g.index_of("z") == 2
    assert g.complement({0}) == {1, 2}
    with pytest.raises(ValueError):
        g.subset({3})


def test_graph_function_rejects_bad_edges():
    with pytest.raises(ValueError):
        GraphFunction.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        GraphFunction.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        GraphFunction.from_edges(3, [(0, 5)])


def test_oracle_kinds(k3):
    assert k3.kind is OracleKind.GRAPH_EDGE_COUNT
    w = GraphFunction.from_edges(2, [(0, 1, 3)])
    assert w.kind is OracleKind.WEIGHTED_GRAPH_EDGE_COUNT
    assert w({0, 1}) == 3
    t = TableFunction.from_values([0, 0, 0, 1])
    assert t.kind is OracleKind.EXPLICIT_TABLE and not t.is_graph


def test_table_validation():
    with pytest.raises(ValueError):
        TableFunction.from_values([1, 0, 0, 1])
    with pytest.raises(ValueError):
        TableFunction.from_values([0, -1, 0, 1])
    with pytest.raises(ValueError):
        TableFunction(GroundSet(2), (0, 1, 1))


def test_scaled_table_matches_calls(rng):
    f = random_supermodular_table(rng, 5)
    vals, den = f.scaled_table()
    for m in range(32):
        assert Fraction(int(vals[m]), den) == f(from_mask(m))


def test_mask_roundtrip():
    for m in range(64):
        assert to_mask(from_mask(m)) == m


def test_rational_formatting():
    assert format_rational(Fraction(1)) == "1/1"
    assert format_rational(Fraction(6, 8)) == "3/4"
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("5") == 5


def test_pick_maximal_agrees_with_vectorised():
    cands = [0b0110, 0b1001, 0b0011, 0b1100, 0b0001]
    assert pick_maximal(cands) == 0b0011
    assert pick_maximal_array(np.array(cands), 4) == 0b0011
    # {0,3} precedes {1,2}
    assert pick_maximal([0b0110, 0b1001]) == 0b1001
    assert pick_maximal_array(np.array([0b0110, 0b1001]), 4) == 0b1001


class TestPropertyCheck:
    def test_k3_edge_count(self, k3):
        r = check_monotone_supermodular(k3)
        assert r.monotone and r.supermodular and r.witness is None

    def test_submodular_table_rejected(self):
        r = check_monotone_supermodular(TableFunction.from_values([0, 1, 1, 1]))
        assert r.monotone and not r.supermodular
        assert r.witness == (frozenset({0}), frozenset({1}))

    def test_and_table(self):
        r = check_monotone_supermodular(TableFunction.from_values([0, 0, 0, 1]))
        assert r.monotone and r.supermodular

    def test_non_monotone(self):
        r = check_monotone_supermodular(TableFunction.from_values([0, 2, 0, 1]))
        assert not r.monotone
        assert r.witness_kind == "monotone"

    def test_cap(self):
        with pytest.raises(CapExceeded):
            check_monotone_supermodular(GraphFunction.from_edges(17, []))

    def test_local_check_matches_pairwise(self, rng):
        # the pairwise definition over all (A, B), enumerated directly
        for _ in range(30):
            n = 4
            vals = [Fraction(0)] + [Fraction(rng.randint(0, 6)) for _ in range(15)]
            f = TableFunction.from_values(vals)
            pairwise = all(
                f(a) + f(b) <= f(a | b) + f(a & b) for a in subsets(range(n)) for b in subsets(range(n))
            )
            assert check_monotone_supermodular(f).supermodular == pairwise


class TestLovasz:
    def test_indicator(self, k3):
        for s in subsets(range(3)):
            x = [1 if v in s else 0 for v in range(3)]
            assert lovasz_extension(k3, x) == k3(s)

    def test_half_half(self):
        f = TableFunction.from_values([0, 0, 0, 1])
        assert lovasz_extension(f, [Fraction(1, 2), Fraction(1, 2)]) == Fraction(1, 2)

    def test_all_ones(self, k3):
        assert lovasz_extension(k3, [1, 1, 1]) == 3

    def test_out_of_range(self, k3):
        with pytest.raises(CoordinateOutOfRange):
            lovasz_extension(k3, [0, Fraction(3, 2), 0])

    def test_tie_order(self):
        c = lovasz_coefficients([Fraction(1, 3), Fraction(2, 3), Fraction(1, 3)])
        assert c.order == (1, 0, 2)
        assert c.prefixes[2] == {0, 1}


fractions01 = st.fractions(min_value=0, max_value=1, max_denominator=12)


@settings(max_examples=200, deadline=None)
@given(st.lists(fractions01, min_size=1, max_size=6))
def test_lovasz_reconstruction(x):
    c = lovasz_coefficients(x)
    assert all(lam >= 0 for lam in c.lambdas)
    assert sum(c.lambdas) == 1
    assert c.reconstruct(len(x)) == tuple(Fraction(v) for v in x)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**31), st.data())
def test_lovasz_concave_for_supermodular(seed, data):
    import random

    f = random_supermodular_table(random.Random(seed), 4)
    x = data.draw(st.lists(fractions01, min_size=4, max_size=4))
    y = data.draw(st.lists(fractions01, min_size=4, max_size=4))
    t = data.draw(fractions01)
    mix = [t * a + (1 - t) * b for a, b in zip(x, y)]
    assert lovasz_extension(f, mix) >= t * lovasz_extension(f, x) + (1 - t) * lovasz_extension(f, y)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 15), fractions01)
def test_lovasz_scaled_indicator(mask, c):
    f = TableFunction.from_function(4, lambda s: Fraction(len(s) ** 2))
    s = from_mask(mask)
    x = [c if v in s else 0 for v in range(4)]
    assert lovasz_extension(f, x) == c * f(s)


class TestReaders:
    def test_graph(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("3 2\n0 1\n1 2 4\n")
        g = read_graph(p)
        assert g.n == 3 and g({0, 1, 2}) == 5

    @pytest.mark.parametrize(
        "text,line",
        [
            ("3 2\n0 1\n", 1),
            ("3 1\n0 0\n", 2),
            ("3 2\n0 1\n1 0\n", 3),
            ("3 1\n0 7\n", 2),
            ("3 1\n0 1 0\n", 2),
            ("x y\n", 1),
        ],
    )
    def test_graph_errors(self, tmp_path, text, line):
        p = tmp_path / "bad.txt"
        p.write_text(text)
        with pytest.raises(FormatError) as exc:
            read_graph(p)
        assert exc.value.line == line
        assert str(p) in str(exc.value)

    def test_table(self, tmp_path):
        p = tmp_path / "t.tbl"
        p.write_text("2\n0 0\n1 1/2\n2 0\n3 3\n")
        t = read_table(p)
        assert t({0}) == Fraction(1, 2) and t({0, 1}) == 3

    def test_table_missing_mask(self, tmp_path):
        p = tmp_path / "t.tbl"
        p.write_text("2\n0 0\n1 1\n2 0\n")
        with pytest.raises(FormatError):
            read_table(p)
