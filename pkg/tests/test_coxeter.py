import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cellcentre.coxeter import (CoxeterError, GroupTooLargeError, build_group, coxeter_matrix,
                                expected_order, parse_coxeter)
from oracles import (bfs_lengths, bruhat_tableau, compose, compose_signed, inversions,
                     perm_generators, realise, signed_perm_generators)

ORDERS = {"A1": 2, "A2": 6, "A3": 24, "A4": 120, "B2": 8, "B3": 48, "G2": 12,
          "I2(5)": 10, "H3": 120, "D4": 192, "F4": 1152}


@pytest.mark.parametrize("name,order", sorted(ORDERS.items()))
def test_orders_and_structure(name, order):
    g = build_group(name)
    assert g.n == order
    assert expected_order(g.matrix) == order
    assert all(g.validate().values())
    assert g.length[g.w_max] == g.nu
    assert np.all(np.diff(g.length) >= 0)           # (length, ShortLex) order


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_type_a_against_permutations(n):
    g = build_group(f"A{n - 1}")
    gens = perm_generators(n)
    ident = tuple(range(n))
    concrete = realise(g, gens, compose, ident)
    assert len(set(concrete)) == g.n
    lengths = bfs_lengths(gens, compose, ident)
    assert len(lengths) == g.n
    for w, p in enumerate(concrete):
        assert g.length[w] == lengths[p] == inversions(p)
    # multiplication table agrees with composition
    rng = np.random.default_rng(1)
    index = {p: i for i, p in enumerate(concrete)}
    for x, y in rng.integers(0, g.n, size=(200, 2)):
        assert g.mul(int(x), int(y)) == index[compose(concrete[x], concrete[y])]


@pytest.mark.parametrize("n", [2, 3])
def test_type_b_against_signed_permutations(n):
    g = build_group(f"B{n}")
    gens = signed_perm_generators(n)
    ident = tuple(range(1, n + 1))
    concrete = realise(g, gens, compose_signed, ident)
    lengths = bfs_lengths(gens, compose_signed, ident)
    assert len(set(concrete)) == g.n == len(lengths)
    for w, p in enumerate(concrete):
        assert g.length[w] == lengths[p]


def test_bruhat_against_rank_matrices():
    g = build_group("A3")
    concrete = realise(g, perm_generators(4), compose, (0, 1, 2, 3))
    b = g.bruhat_matrix()
    for w in range(g.n):
        for x in range(g.n):
            assert b[w, x] == bruhat_tableau(concrete[x], concrete[w])


def test_words_and_parsing():
    g = build_group("A2")
    assert g.format_word(g.w_max) == "s1 s2 s1"
    assert g.format_word(0) == "e"
    assert g.element("s2 s1 s2") == g.w_max
    assert g.element("e") == 0
    with pytest.raises(CoxeterError):
        g.element("s3")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=12))
def test_word_product_matches_table(word):
    g = build_group("B3")
    w = 0
    for s in reversed(word):
        w = int(g.lmul[s, w])
    assert g.element(word) == w
    assert g.element(g.format_word(w)) == w
    assert g.length[w] <= len(word) and (len(word) - g.length[w]) % 2 == 0


def test_matrix_validation():
    with pytest.raises(CoxeterError, match="invalid matrix"):
        parse_coxeter({"matrix": [[1, 3], [2, 1]]})
    with pytest.raises(CoxeterError, match="invalid matrix"):
        parse_coxeter({"matrix": [[2, 3], [3, 1]]})
    with pytest.raises(CoxeterError, match="invalid matrix"):
        parse_coxeter("Q7")
    assert parse_coxeter('{"matrix": [[1, 4], [4, 1]]}').entries == ((1, 4), (4, 1))
    assert parse_coxeter({"type": "B", "rank": 3}) == coxeter_matrix("B", 3)


def test_cap():
    with pytest.raises(GroupTooLargeError, match="exceeds cap"):
        build_group("B3", cap=40)
    with pytest.raises(GroupTooLargeError):
        build_group("E6")


def test_bourbaki_labels():
    assert coxeter_matrix("B", 3).m(1, 2) == 4
    assert coxeter_matrix("F", 4).m(1, 2) == 4
    assert coxeter_matrix("H", 3).m(0, 1) == 5
    assert coxeter_matrix("G", 2).m(0, 1) == 6
