from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tuttelimit.exact_poly import Poly
from tuttelimit.graph_core import GraphError, Multigraph, cycle_graph, named_graph, random_regular
from tuttelimit.halfedge import (
    EnumerationGuard,
    GaugePair,
    HalfEdgeWeights,
    NormalFactorGraph,
    build_subdivision_nfg,
    constant_nfg,
    gauge_transform,
    half_edge_closed_form,
    half_edge_partition,
    half_edge_polynomial,
    half_edge_profile,
    identity_gauge,
    nfg_from_json,
    nfg_partition,
    nfg_to_json,
    perfect_matching_nfg,
    pseudo_forest_polynomial,
    random_gauge,
    subdivision_gauge,
)
from tuttelimit.matching import r_polynomial

z = Poly.z()
small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def _half_edge_naive(G: Multigraph, w: HalfEdgeWeights):
    # each edge picks none / first half / second half / both; each vertex
    # may be covered by at most one chosen half
    total = Fraction(0)
    weight = {0: w.a0, 1: w.a1, 2: w.a1, 3: w.a2}
    for states in itertools.product(range(4), repeat=G.m):
        cover = [0] * G.n
        for (u, v, _), s in zip(G.edges, states):
            if s & 1:
                cover[u] += 1
            if s & 2:
                cover[v] += 1
        if max(cover, default=0) <= 1:
            prod = Fraction(1)
            for s in states:
                prod *= weight[s]
            total += prod
    return total


def _random_simple(rng: random.Random, nmax: int = 6) -> Multigraph:
    n = rng.randint(1, nmax)
    return Multigraph.from_pairs(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5])


def test_k2_value():
    assert half_edge_partition(named_graph("complete_k", 2), HalfEdgeWeights(2, 3, 5)) == 13


def test_triangle_at_pseudo_forest_point():
    assert half_edge_partition(cycle_graph(3), HalfEdgeWeights(1, 1, -1)) == 9


def test_profile_counts_every_configuration():
    G = cycle_graph(4)
    prof = half_edge_profile(G)
    assert sum(prof.values()) == half_edge_partition(G, HalfEdgeWeights(1, 1, 1))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9), small_rationals, small_rationals, small_rationals)
def test_brute_force_matches_naive(seed, a0, a1, a2):
    G = _random_simple(random.Random(seed), 5)
    w = HalfEdgeWeights(a0, a1, a2)
    assert half_edge_partition(G, w) == _half_edge_naive(G, w)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), small_rationals.filter(lambda a: a != 0), small_rationals, small_rationals)
def test_closed_form(seed, a0, a1, a2):
    G = _random_simple(random.Random(seed))
    w = HalfEdgeWeights(a0, a1, a2)
    assert half_edge_closed_form(G, w) == half_edge_partition(G, w)


def test_closed_form_rejects_zero_a0():
    with pytest.raises(ZeroDivisionError):
        half_edge_closed_form(cycle_graph(3), HalfEdgeWeights(0, 1, 1))


def test_pseudo_forest_triangle():
    assert pseudo_forest_polynomial(cycle_graph(3)) == z**3 + 3 * z**2 + 3 * z + 2
    assert pseudo_forest_polynomial(cycle_graph(3)) == r_polynomial(cycle_graph(3)).shift(1)


@pytest.mark.parametrize("seed", range(4))
def test_half_edge_matches_r_on_cubic_graphs(seed):
    G = random_regular(10, 3, seed)
    R1 = r_polynomial(G).shift(1)
    assert half_edge_polynomial(G) == R1.mul_zpow(G.m - G.n)
    assert pseudo_forest_polynomial(G) == R1


def test_guards():
    with pytest.raises(EnumerationGuard):
        half_edge_profile(named_graph("complete_k", 7))
    with pytest.raises(EnumerationGuard):
        nfg_partition(constant_nfg(named_graph("complete_k", 7), 3))


def test_nfg_basics():
    assert nfg_partition(perfect_matching_nfg(cycle_graph(4))) == 2
    assert nfg_partition(perfect_matching_nfg(named_graph("petersen"))) == 6
    assert nfg_partition(constant_nfg(cycle_graph(3), 2)) == 2**3 * 1
    with pytest.raises(GraphError):
        NormalFactorGraph(cycle_graph(3), 2, ((1,), (1,), (1,)))


@pytest.mark.parametrize("name", ["complete_k(2)", "cycle(3)", "star:3", "complete_k(4)"])
def test_subdivision_nfg_is_half_edge_model(name):
    G = named_graph(name)
    w = HalfEdgeWeights(2, Fraction(-1, 3), 5)
    assert nfg_partition(build_subdivision_nfg(G, w)) == half_edge_partition(G, w)


def test_triangular_gauge_tables_k2():
    G = named_graph("complete_k", 2)
    w = HalfEdgeWeights(2, 3, 5)
    H = build_subdivision_nfg(G, w)
    Hg = gauge_transform(H, subdivision_gauge(H, w, G.n))
    assert Hg.tables == ((Fraction(5, 2), 1), (Fraction(5, 2), 1), (2, 0, 0, Fraction(1, 2)))
    assert nfg_partition(Hg) == 13


def _random_nfg(rng: random.Random, q: int = 2) -> NormalFactorGraph:
    n = rng.randint(1, 4)
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(1, 4))]
    G = Multigraph.from_pairs(n, pairs)
    tables = [tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(q ** k)) for k in G.degrees()]
    return NormalFactorGraph(G, q, tuple(tables))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["triangular", "dense", "wider"]))
def test_gauge_invariance(seed, kind):
    rng = random.Random(seed)
    H = _random_nfg(rng)
    if kind == "triangular":
        g = random_gauge(H, rng, triangular=True)
    elif kind == "dense":
        g = random_gauge(H, rng)
    else:
        g = random_gauge(H, rng, q_new=3)
    assert nfg_partition(gauge_transform(H, g)) == nfg_partition(H)


def test_identity_gauge_is_noop():
    H = build_subdivision_nfg(cycle_graph(3), HalfEdgeWeights(1, 2, 3))
    assert gauge_transform(H, identity_gauge(H)).tables == H.tables


def test_invalid_gauge_names_edge():
    H = perfect_matching_nfg(cycle_graph(3))
    mats = identity_gauge(H).matrices
    mats[1] = (((1, 1), (0, 1)), ((1, 0), (0, 1)))
    with pytest.raises(GraphError, match="edge 1"):
        gauge_transform(H, GaugePair(mats))


def test_json_roundtrip():
    H = build_subdivision_nfg(cycle_graph(3), HalfEdgeWeights(Fraction(1, 2), 2, -3))
    H2 = nfg_from_json(nfg_to_json(H))
    assert H2.tables == H.tables and H2.graph.pairs() == H.graph.pairs()
