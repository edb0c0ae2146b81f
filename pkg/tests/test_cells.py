import numpy as np
import pytest

from cellcentre.cells import DistinguishedInvolutionError, distinguished_involutions
from oracles import oracle_for
from shared import tables

# (left cells, two-sided cells) per group
COUNTS = {"A1": (2, 2), "A2": (4, 3), "A3": (10, 5), "A4": (26, 7), "B2": (4, 3),
          "B3": (14, 6), "G2": (4, 3), "H3": (22, 7), "D4": (36, 11)}


def cell_sets(part, labels):
    return {frozenset(np.flatnonzero(labels == c).tolist()) for c in range(int(labels.max()) + 1)}


@pytest.mark.parametrize("name", ["A2", "A3", "B2", "G2"])
def test_partition_matches_naive_closure(name):
    oh = oracle_for(name)
    _, _, part = tables(name)
    assert cell_sets(part, part.left) == oh.left_cells()
    assert cell_sets(part, part.two_sided) == oh.two_sided_cells()
    for z in range(oh.g.n):
        assert part.a[z] == oh.a_value(z)


@pytest.mark.parametrize("name", sorted(COUNTS))
def test_counts_and_invariants(name):
    g, _, part = tables(name)
    assert (part.n_left, part.n_two_sided) == COUNTS[name]
    assert all(part.check_invariants().values())
    assert part.a[0] == 0 and part.a[g.w_max] == g.nu


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_type_a_left_cells_count_involutions(n):
    g, _, part = tables(f"A{n - 1}")
    assert part.n_left == int(np.sum(g.inverse == np.arange(g.n)))


def test_a2_cells():
    g, _, part = tables("A2")
    words = sorted(sorted(g.format_word(w) for w in part.left_cell(c)) for c in range(part.n_left))
    assert words == [["e"], ["s1", "s2 s1"], ["s1 s2", "s2"], ["s1 s2 s1"]]
    assert part.cell_a(part.two_sided[g.element("s1")]) == 1


def test_module_route_agrees_with_products_on_small_groups():
    # cell_partition raises if the two a-function routes differ; the flag
    # records which one was used
    _, _, part = tables("B3")
    assert part.a_method == "products"
    _, _, part = tables("A4")
    assert part.a_method == "left-cell module"


def test_distinguished_violation_is_reported():
    _, _, part = tables("A2")
    bad = part.distinguished.copy()
    bad[:] = False
    broken = type(part)(part.group, part.left, part.right, part.two_sided, part.order,
                        part.a, part.delta, part.delta_coeff, bad)
    with pytest.raises(DistinguishedInvolutionError, match="distinguished-involution"):
        distinguished_involutions(broken)


def test_cell_order_extremes():
    g, _, part = tables("A3")
    bottom = part.two_sided[g.w_max]
    top = part.two_sided[0]
    # every cell lies above {w_max} and below {e}
    assert np.all(part.order[bottom, :]) and np.all(part.order[:, top])
