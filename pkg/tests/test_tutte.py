from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tuttelimit.exact_poly import BiPoly, Poly
from tuttelimit.graph_core import (
    EdgeOrdering,
    GraphError,
    Multigraph,
    component_count,
    cycle_graph,
    disjoint_union,
    named_graph,
    random_regular,
)
from tuttelimit.tutte import (
    EnumerationGuard,
    broken_cycle_free_counts,
    chromatic_brute_force,
    chromatic_polynomial,
    forest_counts,
    forest_polynomial,
    random_cluster,
    random_cluster_to_tutte,
    spanning_trees_kirchhoff,
    special_evaluations,
    subset_profile,
    tutte_polynomial,
    tutte_subset_oracle,
    whitney_polynomial,
)

x, y = BiPoly.x(), BiPoly.y()


def _random_multigraph(seed: int, nmax: int = 6, mmax: int = 9) -> Multigraph:
    rng = random.Random(seed)
    n = rng.randint(1, nmax)
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, mmax))]
    return Multigraph.from_pairs(n, pairs)


def test_k4_polynomial():
    T = tutte_polynomial(named_graph("complete_k", 4)).polynomial
    assert T == x**3 + 3 * x**2 + 2 * x + 4 * x * y + 2 * y + 3 * y**2 + y**3


@pytest.mark.parametrize("n", range(3, 9))
def test_cycle_polynomial(n):
    T = tutte_polynomial(cycle_graph(n)).polynomial
    expected = y + sum((x**i for i in range(1, n)), BiPoly())
    assert T == expected


def test_loops_bridges_and_edgeless():
    assert tutte_polynomial(Multigraph.from_pairs(1, [(0, 0)])).polynomial == y
    assert tutte_polynomial(named_graph("path", 4)).polynomial == x**3
    assert tutte_polynomial(named_graph("edgeless", 3)).polynomial == BiPoly.const(1)
    assert tutte_polynomial(Multigraph.from_pairs(2, [(0, 1), (0, 1)])).polynomial == x + y


@pytest.mark.parametrize("name", ["complete_k(4)", "petersen", "cycle(4)", "star:3"])
def test_oracle_agrees_on_named(name):
    G = named_graph(name)
    assert tutte_polynomial(G).polynomial == tutte_subset_oracle(G)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_oracle_agrees_on_random_multigraphs(seed):
    G = _random_multigraph(seed)
    T = tutte_polynomial(G).polynomial
    assert T == tutte_subset_oracle(G)
    assert T == tutte_polynomial(G, memo=False).polynomial


def test_subset_profile_and_guard():
    prof = subset_profile(cycle_graph(3))
    assert sum(prof.values()) == 8
    assert prof[(1, 3)] == 1 and prof[(3, 0)] == 1
    with pytest.raises(EnumerationGuard):
        subset_profile(named_graph("complete_k", 8))


def test_special_values():
    assert special_evaluations(named_graph("petersen"))[0] == 2000
    assert special_evaluations(named_graph("complete_k", 4)) == (16, 38, 24)
    assert special_evaluations(cycle_graph(4)) == (4, 15, 14)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_kirchhoff_equals_t11(seed):
    G = _random_multigraph(seed)
    T = tutte_polynomial(G).polynomial
    if component_count(G) == 1:
        assert spanning_trees_kirchhoff(G) == T(1, 1)
    else:
        assert spanning_trees_kirchhoff(G) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_forest_polynomial_routes_agree(seed):
    G = _random_multigraph(seed)
    assert forest_polynomial(G) == forest_polynomial(G, method="enumerate")


def test_forest_counts():
    assert forest_counts(cycle_graph(3)) == [1, 3, 3, 0]
    z = Poly.z()
    assert forest_polynomial(cycle_graph(3)) == z**3 + 3 * z**2 + 3 * z
    with pytest.raises(ValueError):
        forest_polynomial(cycle_graph(3), method="guess")


@pytest.mark.parametrize("name", ["complete_k(4)", "cycle(5)", "petersen", "path(4)"])
@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_chromatic(name, q):
    G = named_graph(name)
    assert chromatic_polynomial(G, q) == chromatic_brute_force(G, q)


def test_random_cluster_conversion():
    G = named_graph("complete_k", 4)
    T = tutte_polynomial(G).polynomial
    for a, b in [(2, 3), (Fraction(1, 2), 5), (-2, Fraction(3, 4))]:
        assert random_cluster_to_tutte(G, a, b) == T(a, b)
    # q = 1 recovers (1 + w)^m
    assert random_cluster(G, 1, Fraction(1, 3)) == Fraction(4, 3) ** 6
    with pytest.raises(ValueError):
        random_cluster_to_tutte(G, 1, 2)


def test_broken_cycles_small():
    assert broken_cycle_free_counts(named_graph("complete_k", 3)).c == (1, 3, 2, 0)
    assert broken_cycle_free_counts(cycle_graph(4)).c == (1, 4, 6, 3, 0)
    with pytest.raises(GraphError):
        broken_cycle_free_counts(disjoint_union(cycle_graph(3), cycle_graph(3)))
    loop = Multigraph.from_pairs(2, [(0, 1), (1, 1)])
    assert set(broken_cycle_free_counts(loop).c) == {0}


@pytest.mark.parametrize("seed", range(6))
def test_whitney_independent_of_ordering(seed):
    G = random_regular(8, 3, seed)
    if component_count(G) > 1:
        pytest.skip("disconnected sample")
    T = tutte_polynomial(G).polynomial
    rng = random.Random(seed)
    ref = whitney_polynomial(G, T)
    for _ in range(3):
        o = EdgeOrdering.random(G, rng)
        assert broken_cycle_free_counts(G, o).polynomial() == ref


def test_whitney_on_petersen():
    G = named_graph("petersen")
    assert broken_cycle_free_counts(G).polynomial() == whitney_polynomial(G)


def test_deletion_contraction_scales():
    # 24 edges is well past the subset oracle's comfort zone
    G = random_regular(16, 3, 5)
    T = tutte_polynomial(G)
    assert T(1, 1) == spanning_trees_kirchhoff(G)


def test_enumeration_guards():
    G = random_regular(18, 3, 1)
    with pytest.raises(EnumerationGuard):
        forest_counts(G)
    with pytest.raises(EnumerationGuard):
        broken_cycle_free_counts(G)
