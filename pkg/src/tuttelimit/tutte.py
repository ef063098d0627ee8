"""Exact Tutte polynomial and its specializations.

Two independent routes compute ``T_G(x, y)``:

* :func:`tutte_subset_oracle` sums the rank-nullity expansion over all edge
  subsets (exponential in ``e(G)``, guarded at 24 edges);
* :func:`tutte_polynomial` runs deletion-contraction with loops and bridges
  stripped as factors ``y`` and ``x``, connected components multiplied, and a
  memo keyed on a relabelled edge list.

Disconnected graphs are handled throughout; ``k(E)`` in the subset expansion
refers to the whole graph.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .exact_poly import BiPoly, Poly, as_rational
from .graph_core import EdgeOrdering, GraphError, Multigraph, component_count, enumerate_cycles

__all__ = [
    "EnumerationGuard",
    "TutteResult",
    "BrokenCycleCounts",
    "subset_profile",
    "tutte_subset_oracle",
    "tutte_polynomial",
    "forest_counts",
    "forest_polynomial",
    "random_cluster",
    "random_cluster_to_tutte",
    "special_evaluations",
    "spanning_trees_kirchhoff",
    "chromatic_polynomial",
    "chromatic_brute_force",
    "broken_cycle_free_counts",
    "whitney_polynomial",
]

SUBSET_EDGE_LIMIT = 24


class EnumerationGuard(GraphError):
    """Input is too large for a brute-force enumeration."""


@dataclass(frozen=True)
class TutteResult:
    polynomial: BiPoly
    node_count: int

    def __call__(self, x, y):
        return self.polynomial.eval_exact(x, y)


@dataclass(frozen=True)
class BrokenCycleCounts:
    """``c[k]`` = number of ``k``-edge sets containing no broken cycle, k = 0..n."""

    c: tuple[int, ...]

    def polynomial(self) -> Poly:
        """``sum_k c[k] z^(n-k)``."""
        n = len(self.c) - 1
        return Poly([self.c[n - j] for j in range(n + 1)])


# --------------------------------------------------------------------------
# subset enumeration


def subset_profile(G: Multigraph, limit: int = SUBSET_EDGE_LIMIT) -> Counter:
    """Counter of ``(k(A), |A|)`` over all ``A`` subset of ``E``.

    Depth-first over edges with a union-find that is rolled back on return,
    so each subset costs O(1) amortized beyond the union step.
    """
    if G.m > limit:
        raise EnumerationGuard(f"{G.m} edges exceeds the subset enumeration limit {limit}")
    parent = list(range(G.n))
    edges = [(u, v) for u, v, _ in G.edges]
    out: Counter = Counter()

    def find(a: int) -> int:
        while parent[a] != a:
            a = parent[a]
        return a

    def walk(i: int, comps: int, size: int) -> None:
        if i == len(edges):
            out[(comps, size)] += 1
            return
        walk(i + 1, comps, size)
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru == rv:
            walk(i + 1, comps, size + 1)
        else:
            parent[ru] = rv
            walk(i + 1, comps - 1, size + 1)
            parent[ru] = ru

    walk(0, G.n, 0)
    return out


def tutte_subset_oracle(G: Multigraph) -> BiPoly:
    """``sum_A (x-1)^(k(A)-k(E)) (y-1)^(k(A)+|A|-n)`` expanded exactly."""
    profile = subset_profile(G)
    kE = component_count(G)
    xm1, ym1 = Poly([-1, 1]), Poly([-1, 1])
    terms: dict[tuple[int, int], int] = {}
    for (k, a), cnt in profile.items():
        px = (xm1 ** (k - kE)).coeffs
        py = (ym1 ** (k + a - G.n)).coeffs
        for i, ci in enumerate(px):
            for j, cj in enumerate(py):
                terms[(i, j)] = terms.get((i, j), 0) + cnt * ci * cj
    return BiPoly.from_dict(terms)


def random_cluster(G: Multigraph, q, w) -> int | Fraction:
    """``Z_G(q, w) = sum_A q^k(A) w^|A|`` by subset enumeration."""
    q, w = as_rational(q), as_rational(w)
    total = sum(cnt * Fraction(q) ** k * Fraction(w) ** a for (k, a), cnt in subset_profile(G).items())
    return as_rational(total)


def random_cluster_to_tutte(G: Multigraph, x, y) -> int | Fraction:
    """``(x-1)^-k(E) (y-1)^-n Z_G((x-1)(y-1), y-1)``; needs ``x != 1 != y``."""
    x, y = Fraction(as_rational(x)), Fraction(as_rational(y))
    if x == 1 or y == 1:
        raise ValueError("conversion needs x != 1 and y != 1")
    z = random_cluster(G, (x - 1) * (y - 1), y - 1)
    return as_rational(z / ((x - 1) ** component_count(G) * (y - 1) ** G.n))


# --------------------------------------------------------------------------
# deletion-contraction

_Terms = dict  # {(i, j): int}


def _mul_terms(a: _Terms, b: _Terms) -> _Terms:
    out: _Terms = {}
    for (i, j), c in a.items():
        for (k, l), d in b.items():
            key = (i + k, j + l)
            out[key] = out.get(key, 0) + c * d
    return out


def _add_terms(a: _Terms, b: _Terms) -> _Terms:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + c
    return out


def _bridges(edges: list[tuple[int, int, int]]) -> set[int]:
    """Edge ids not lying on any cycle (parallel edges are never bridges)."""
    inc: dict[int, list[tuple[int, int]]] = {}
    for u, v, e in edges:
        inc.setdefault(u, []).append((v, e))
        inc.setdefault(v, []).append((u, e))
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    out: set[int] = set()
    counter = 0
    for root in inc:
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        stack = [(root, -1, iter(inc[root]))]
        while stack:
            a, via, it = stack[-1]
            advanced = False
            for b, e in it:
                if e == via:
                    continue
                if b in disc:
                    low[a] = min(low[a], disc[b])
                else:
                    disc[b] = low[b] = counter
                    counter += 1
                    stack.append((b, e, iter(inc[b])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[a])
                    if low[a] > disc[parent]:
                        out.add(via)
    return out


def _split_components(edges: list[tuple[int, int, int]]) -> list[list[tuple[int, int, int]]]:
    parent: dict[int, int] = {}

    def find(a: int) -> int:
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v, _ in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, list[tuple[int, int, int]]] = {}
    for t in edges:
        groups.setdefault(find(t[0]), []).append(t)
    return list(groups.values())


def _edge_rank(G: Multigraph) -> dict[int, int]:
    """Pivot priority: edges sorted by a breadth-first vertex order.

    Processing edges along a BFS order keeps the set of partially processed
    vertices small, which is what makes the memo effective.
    """
    nb = G.neighbors()
    order: list[int] = []
    seen: set[int] = set()
    for root in sorted(range(G.n), key=lambda v: (-len(nb[v]), v)):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            a = queue.pop(0)
            order.append(a)
            for b in sorted(nb[a]):
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
    pos = {v: i for i, v in enumerate(order)}
    ranked = sorted(G.edges, key=lambda t: (max(pos[t[0]], pos[t[1]]), min(pos[t[0]], pos[t[1]]), t[2]))
    return {e: i for i, (_, _, e) in enumerate(ranked)}


class _DeletionContraction:
    def __init__(self, rank: dict[int, int], memo: bool):
        self.rank = rank
        self.memo: dict | None = {} if memo else None
        self.nodes = 0

    def solve(self, edges: list[tuple[int, int, int]]) -> _Terms:
        loops = sum(1 for u, v, _ in edges if u == v)
        edges = [t for t in edges if t[0] != t[1]]
        bridges = _bridges(edges)
        edges = [t for t in edges if t[2] not in bridges]
        result: _Terms = {(len(bridges), loops): 1}
        for comp in _split_components(edges):
            result = _mul_terms(result, self._component(comp))
        return result

    def _key(self, edges: list[tuple[int, int, int]]) -> tuple:
        ordered = sorted(edges, key=lambda t: self.rank[t[2]])
        label: dict[int, int] = {}
        out = []
        for u, v, _ in ordered:
            a = label.setdefault(u, len(label))
            b = label.setdefault(v, len(label))
            out.append((a, b) if a < b else (b, a))
        return tuple(out)

    def _component(self, edges: list[tuple[int, int, int]]) -> _Terms:
        # connected, bridgeless, loopless, at least one edge
        key = None
        if self.memo is not None:
            key = self._key(edges)
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        self.nodes += 1
        pivot = min(edges, key=lambda t: self.rank[t[2]])
        pu, pv, pe = pivot
        deleted = [t for t in edges if t[2] != pe]
        contracted = []
        for u, v, e in deleted:
            contracted.append((pu if u == pv else u, pu if v == pv else v, e))
        result = _add_terms(self.solve(deleted), self.solve(contracted))
        if key is not None:
            self.memo[key] = result
        return result


def tutte_polynomial(G: Multigraph, memo: bool = True) -> TutteResult:
    """``T_G(x, y)`` by deletion-contraction.

    The pivot is always a non-loop, non-bridge edge (loops and bridges are
    stripped beforehand), chosen by BFS edge rank.  ``node_count`` counts
    the pivot expansions actually performed.
    """
    dc = _DeletionContraction(_edge_rank(G), memo)
    terms = dc.solve(list(G.edges))
    return TutteResult(BiPoly.from_dict(terms), dc.nodes)


# --------------------------------------------------------------------------
# forests and special values


def forest_counts(G: Multigraph, limit: int = SUBSET_EDGE_LIMIT) -> list[int]:
    """``f_k`` for k = 0..n by enumerating acyclic edge sets only."""
    if G.m > limit:
        raise EnumerationGuard(f"{G.m} edges exceeds the forest enumeration limit {limit}")
    parent = list(range(G.n))
    edges = [(u, v) for u, v, _ in G.edges]
    counts = [0] * (G.n + 1)

    def find(a: int) -> int:
        while parent[a] != a:
            a = parent[a]
        return a

    def walk(i: int, size: int) -> None:
        if i == len(edges):
            counts[size] += 1
            return
        walk(i + 1, size)
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            walk(i + 1, size + 1)
            parent[ru] = ru

    walk(0, 0)
    return counts


def forest_polynomial(G: Multigraph, method: str = "tutte") -> Poly:
    """``F_G(z) = sum_k f_k z^(n-k)``.

    ``method="tutte"`` evaluates ``z^k(G) T_G(z+1, 1)``; ``method="enumerate"``
    counts forests directly.
    """
    if method == "enumerate":
        f = forest_counts(G)
        return Poly([f[G.n - j] for j in range(G.n + 1)])
    if method != "tutte":
        raise ValueError(f"unknown method {method!r}")
    T = tutte_polynomial(G).polynomial
    return T.at_y(1).shift(1).mul_zpow(component_count(G))


def special_evaluations(G: Multigraph, T: BiPoly | None = None) -> tuple[int, int, int]:
    """(spanning trees, spanning forests, acyclic orientations) = T(1,1), T(2,1), T(2,0)."""
    if T is None:
        T = tutte_polynomial(G).polynomial
    return T(1, 1), T(2, 1), T(2, 0)


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def spanning_trees_kirchhoff(G: Multigraph) -> int:
    """Spanning-tree count as a reduced Laplacian determinant (0 if disconnected)."""
    if G.n == 0:
        return 0
    if component_count(G) > 1:
        return 0
    L = [[0] * G.n for _ in range(G.n)]
    for u, v, _ in G.edges:
        if u == v:
            continue
        L[u][u] += 1
        L[v][v] += 1
        L[u][v] -= 1
        L[v][u] -= 1
    return _bareiss_det([row[1:] for row in L[1:]])


def chromatic_polynomial(G: Multigraph, q, T: BiPoly | None = None) -> int | Fraction:
    """``(-1)^(n-k) q^k T_G(1-q, 0)``."""
    q = as_rational(q)
    if T is None:
        T = tutte_polynomial(G).polynomial
    k = component_count(G)
    return as_rational((-1) ** (G.n - k) * Fraction(q) ** k * T(1 - q, 0))


def chromatic_brute_force(G: Multigraph, q: int, limit: int = 10**7) -> int:
    """Proper ``q``-colorings counted one assignment at a time."""
    if q ** G.n > limit:
        raise EnumerationGuard(f"{q}^{G.n} colorings exceeds {limit}")
    pairs = G.pairs()
    return sum(1 for col in itertools.product(range(q), repeat=G.n) if all(col[u] != col[v] for u, v in pairs))


# --------------------------------------------------------------------------
# broken cycles


def broken_cycle_free_counts(
    G: Multigraph, ordering: EdgeOrdering | None = None, limit: int = SUBSET_EDGE_LIMIT
) -> BrokenCycleCounts:
    """Count edge sets containing no broken cycle, by size.

    Broken cycles are enumerated explicitly (every cycle minus its
    highest-ranked edge).  Edge sets are grown in increasing rank order, and a
    set is abandoned as soon as the edge just added completes a broken cycle.
    """
    if component_count(G) > 1:
        raise GraphError("broken-cycle counts need a connected graph")
    if G.m > limit:
        raise EnumerationGuard(f"{G.m} edges exceeds the broken-cycle enumeration limit {limit}")
    if ordering is None:
        ordering = EdgeOrdering.natural(G)
    ordering.check(G)
    rank = ordering.rank()
    bit = {e: 1 << rank[e] for e in G.edge_ids}
    # broken cycles keyed by their own highest-ranked edge
    by_top: dict[int, list[int]] = {}
    for cyc in enumerate_cycles(G):
        top = max(cyc, key=rank.__getitem__)
        rest = [e for e in cyc if e != top]
        if not rest:
            # a loop: the empty set is "broken", so nothing is broken-cycle free
            return BrokenCycleCounts(tuple([0] * (G.n + 1)))
        mask = 0
        for e in rest:
            mask |= bit[e]
        last = max(rest, key=rank.__getitem__)
        by_top.setdefault(rank[last], []).append(mask)

    counts = [0] * (G.n + 1)
    m = G.m

    def walk(i: int, chosen: int, size: int) -> None:
        if i == m:
            counts[size] += 1
            return
        walk(i + 1, chosen, size)
        new = chosen | (1 << i)
        for mask in by_top.get(i, ()):
            if mask & new == mask:
                return
        walk(i + 1, new, size + 1)

    walk(0, 0, 0)
    return BrokenCycleCounts(tuple(counts))


def whitney_polynomial(G: Multigraph, T: BiPoly | None = None) -> Poly:
    """``z^k(G) T_G(z+1, 0)``."""
    if T is None:
        T = tutte_polynomial(G).polynomial
    return T.at_y(0).shift(1).mul_zpow(component_count(G))

