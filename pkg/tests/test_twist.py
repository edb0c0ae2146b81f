import numpy as np
import pytest

from cellcentre.twist import (CellNotStableError, NotOrdinaryError, boc0, eps_on_cells,
                              make_automorphism, ordinary_automorphisms, parse_eps)
from shared import tables


def names(g):
    return [a.name for a in ordinary_automorphisms(g)]


def test_automorphism_groups():
    assert names(tables("A1")[0]) == ["id"]
    assert names(tables("A2")[0]) == ["id", "flip"]
    assert names(tables("A3")[0]) == ["id", "flip"]
    assert names(tables("B2")[0]) == ["id"]
    assert names(tables("G2")[0]) == ["id"]
    assert len(names(tables("D4")[0])) == 6


def test_non_ordinary_rejected_with_reason():
    g, _, _ = tables("B2")
    with pytest.raises(NotOrdinaryError, match="order 4 > 3"):
        make_automorphism(g, (1, 0))
    with pytest.raises(NotOrdinaryError):
        parse_eps(g, "flip")
    with pytest.raises(NotOrdinaryError):
        parse_eps(g, "(1 2)")
    g3, _, _ = tables("B3")
    with pytest.raises(NotOrdinaryError, match="Coxeter matrix"):
        parse_eps(g3, "(1 3)")


def test_flip_on_elements():
    g, _, _ = tables("A2")
    e = parse_eps(g, "flip")
    assert e(g.element("s1 s2")) == g.element("s2 s1")
    assert e(g.element("s1")) == g.element("s2")
    assert parse_eps(g, "(1 2)").name == "flip"
    assert parse_eps(g, "(1)(2)").is_identity


@pytest.mark.parametrize("name", ["A3", "A4", "D4"])
def test_automorphisms_are_length_preserving_homomorphisms(name):
    g, _, _ = tables(name)
    rng = np.random.default_rng(0)
    for e in ordinary_automorphisms(g):
        assert np.array_equal(g.length[e.perm], g.length)
        for x, y in rng.integers(0, g.n, size=(100, 2)):
            assert e(g.mul(int(x), int(y))) == g.mul(e(int(x)), e(int(y)))


def test_boc0_examples():
    g, _, part = tables("A2")
    mid = part.two_sided[g.element("s1")]
    words = lambda zs: sorted(g.format_word(z) for z in zs)
    assert words(boc0(parse_eps(g, "id"), part, mid)) == ["s1", "s2"]
    assert words(boc0(parse_eps(g, "flip"), part, mid)) == ["s1 s2", "s2 s1"]
    g, _, part = tables("B2")
    mid = part.two_sided[g.element("s1")]
    assert words(boc0(parse_eps(g, "id"), part, mid)) == ["s1", "s1 s2 s1", "s2", "s2 s1 s2"]


def test_identity_boc0_is_involutions():
    for name in ["A3", "B3", "H3"]:
        g, _, part = tables(name)
        e = parse_eps(g, "id")
        for c in range(part.n_two_sided):
            members = part.two_sided_cell(c)
            got = set(boc0(e, part, c).tolist())
            # z ~_L z^-1 holds for every involution; the converse need not
            assert {int(z) for z in members if g.inverse[z] == z} <= got


def test_unstable_cell_refused():
    g, _, part = tables("D4")
    e = parse_eps(g, "(3 4)")
    moved = [c for c, d in eps_on_cells(e, part)["two_sided"].items() if c != d]
    assert moved
    with pytest.raises(CellNotStableError, match="not eps-stable"):
        boc0(e, part, moved[0])
