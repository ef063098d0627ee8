"""Half-edge model, pseudo-forest expansion, and normal factor graphs with
gauge transformations.

A half-edge configuration picks, at every vertex, either nothing or one
incident half-edge.  Edges with 0, 1 or 2 chosen halves are weighted
``a0``, ``a1``, ``a2``.  The same partition function arises as the normal
factor graph on the subdivision of ``G``, and an edge-local gauge change of
basis turns it into a weighted matching sum.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact_poly import Poly, as_rational, format_rational
from .graph_core import GraphError, Multigraph
from .matching import matching_sum
from .tutte import EnumerationGuard

__all__ = [
    "HalfEdgeWeights",
    "NormalFactorGraph",
    "GaugePair",
    "half_edge_profile",
    "evaluate_profile",
    "half_edge_partition",
    "half_edge_polynomial",
    "half_edge_closed_form",
    "pseudo_forest_polynomial",
    "nfg_partition",
    "build_subdivision_nfg",
    "perfect_matching_nfg",
    "constant_nfg",
    "gauge_transform",
    "identity_gauge",
    "subdivision_gauge",
    "random_gauge",
    "nfg_to_json",
    "nfg_from_json",
]

HALF_EDGE_EDGE_LIMIT = 20
HALF_EDGE_CONFIG_LIMIT = 1 << 26
PSEUDO_FOREST_EDGE_LIMIT = 24
NFG_STATE_LIMIT = 10**7

Matrix = tuple  # tuple of rows of rationals


@dataclass(frozen=True)
class HalfEdgeWeights:
    a0: Fraction | int
    a1: Fraction | int
    a2: Fraction | int

    def __post_init__(self) -> None:
        for name in ("a0", "a1", "a2"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))


# --------------------------------------------------------------------------
# half-edge model


def half_edge_profile(G: Multigraph) -> Counter:
    """Counter of ``(C0, C1, C2)`` over all half-edge configurations.

    Configurations are enumerated as per-vertex choices (nothing, or the
    i-th incident half-edge) in numpy blocks.
    """
    if G.m > HALF_EDGE_EDGE_LIMIT:
        raise EnumerationGuard(f"{G.m} edges exceeds the half-edge limit {HALF_EDGE_EDGE_LIMIT}")
    radix = [len(s) + 1 for s in G.incidence()]
    total = 1
    for r in radix:
        total *= r
    if total > HALF_EDGE_CONFIG_LIMIT:
        raise EnumerationGuard(f"{total} half-edge configurations exceeds {HALF_EDGE_CONFIG_LIMIT}")
    # for each edge, the (vertex, choice code) selecting each of its two halves
    halves: dict[int, list[tuple[int, int]]] = {e: [] for e in G.edge_ids}
    for v, slots in enumerate(G.incidence()):
        for i, (_, e) in enumerate(slots):
            halves[e].append((v, i + 1))
    m = G.m
    out: Counter = Counter()
    block = 1 << 20
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total), dtype=np.int64)
        choice = []
        for r in radix:
            choice.append(idx % r)
            idx = idx // r
        c1 = np.zeros(len(choice[0]) if choice else 1, dtype=np.int64)
        c2 = np.zeros_like(c1)
        for e in G.edge_ids:
            (v1, k1), (v2, k2) = halves[e]
            h = (choice[v1] == k1).astype(np.int64) + (choice[v2] == k2)
            c1 += h == 1
            c2 += h == 2
        codes = np.bincount(c1 * (m + 1) + c2, minlength=(m + 1) ** 2)
        for code in np.nonzero(codes)[0]:
            a, b = divmod(int(code), m + 1)
            out[(m - a - b, a, b)] += int(codes[code])
    return out


def evaluate_profile(profile: Counter, a0, a1, a2):
    """``sum count * a0^C0 a1^C1 a2^C2`` in the ring of the weights."""
    acc = 0
    for (c0, c1, c2), cnt in profile.items():
        acc = acc + (a0**c0) * (a1**c1) * (a2**c2) * cnt
    return acc


def half_edge_partition(G: Multigraph, w: HalfEdgeWeights):
    """``M_G(a0, a1, a2)`` by brute-force enumeration."""
    return as_rational(evaluate_profile(half_edge_profile(G), Fraction(w.a0), Fraction(w.a1), Fraction(w.a2)))


def half_edge_polynomial(G: Multigraph) -> Poly:
    """``M_G(z, 1, -1)`` as an exact polynomial in ``z``."""
    out = evaluate_profile(half_edge_profile(G), Poly.z(), 1, -1)
    return out if isinstance(out, Poly) else Poly.const(out)


def half_edge_closed_form(G: Multigraph, w: HalfEdgeWeights):
    """``a0^(|E|-n) sum_M (a0 a2 - a1^2)^|M| prod_{v not in V(M)} (a0 + d_v a1)``."""
    if w.a0 == 0:
        raise ZeroDivisionError("closed form divides by a0")
    deg = G.degrees()
    a0, a1, a2 = Fraction(w.a0), Fraction(w.a1), Fraction(w.a2)
    s = matching_sum(G, lambda v: a0 + deg[v] * a1, a0 * a2 - a1 * a1)
    return as_rational(a0 ** (G.m - G.n) * s)


def pseudo_forest_polynomial(G: Multigraph) -> Poly:
    """``sum_k (sum_{A pseudo-forest, |A|=k} 2^c(A)) z^(n-k)``.

    Edge subsets are grown depth-first; a branch dies as soon as a component
    has more edges than vertices, since no superset can recover.
    """
    if G.m > PSEUDO_FOREST_EDGE_LIMIT:
        raise EnumerationGuard(f"{G.m} edges exceeds the pseudo-forest limit {PSEUDO_FOREST_EDGE_LIMIT}")
    parent = list(range(G.n))
    size = [1] * G.n
    nedges = [0] * G.n
    edges = G.pairs()
    weight = [0] * (G.n + 1)

    def find(a: int) -> int:
        while parent[a] != a:
            a = parent[a]
        return a

    def walk(i: int, k: int, cycles: int) -> None:
        if i == len(edges):
            weight[k] += 1 << cycles
            return
        walk(i + 1, k, cycles)
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru == rv:
            if nedges[ru] + 1 > size[ru]:
                return
            nedges[ru] += 1
            walk(i + 1, k + 1, cycles + 1)
            nedges[ru] -= 1
            return
        if nedges[ru] + nedges[rv] + 1 > size[ru] + size[rv]:
            return
        if size[ru] > size[rv]:
            ru, rv = rv, ru
        parent[ru] = rv
        size[rv] += size[ru]
        nedges[rv] += nedges[ru] + 1
        walk(i + 1, k + 1, cycles)
        nedges[rv] -= nedges[ru] + 1
        size[rv] -= size[ru]
        parent[ru] = ru

    walk(0, 0, 0)
    return Poly([weight[G.n - j] for j in range(G.n + 1)])


# --------------------------------------------------------------------------
# normal factor graphs


@dataclass(frozen=True)
class NormalFactorGraph:
    """Edge variables over ``{0..q-1}`` and one dense table per vertex.

    The table of ``v`` lists ``f_v`` over assignments to ``slots(v)`` in
    mixed-radix order, first slot most significant.  A loop occupies two
    slots of its vertex.
    """

    graph: Multigraph
    q: int
    tables: tuple[tuple, ...]

    def __post_init__(self) -> None:
        tables = tuple(tuple(as_rational(c) for c in t) for t in self.tables)
        object.__setattr__(self, "tables", tables)
        if len(tables) != self.graph.n:
            raise GraphError("one table per vertex required")
        for v in range(self.graph.n):
            want = self.q ** len(self.slots(v))
            if len(tables[v]) != want:
                raise GraphError(f"table of vertex {v} has {len(tables[v])} entries, expected {want}")

    def slots(self, v: int) -> list[tuple[int, int]]:
        """``(eid, side)`` per incident half; side 0 is the edge's first endpoint."""
        out = []
        for a, b, e in self.graph.edges:
            if a == v:
                out.append((e, 0))
            if b == v:
                out.append((e, 1))
        return out

    def table_array(self, v: int) -> np.ndarray:
        k = len(self.slots(v))
        arr = np.empty(len(self.tables[v]), dtype=object)
        arr[:] = list(self.tables[v])
        return arr.reshape((self.q,) * k)

    def value(self, v: int, assignment: Sequence[int]) -> Fraction | int:
        idx = 0
        for s in assignment:
            idx = idx * self.q + s
        return self.tables[v][idx]


def nfg_partition(H: NormalFactorGraph):
    """``Z(H) = sum_sigma prod_v f_v(sigma restricted to v)``."""
    m = H.graph.m
    if H.q**m > NFG_STATE_LIMIT:
        raise EnumerationGuard(f"{H.q}^{m} assignments exceeds {NFG_STATE_LIMIT}")
    pos = {e: i for i, e in enumerate(H.graph.edge_ids)}
    slot_pos = [[pos[e] for e, _ in H.slots(v)] for v in range(H.graph.n)]
    q = H.q
    total = 0
    for sigma in itertools.product(range(q), repeat=m):
        prod = 1
        for v, sp in enumerate(slot_pos):
            idx = 0
            for p in sp:
                idx = idx * q + sigma[p]
            val = H.tables[v][idx]
            if val == 0:
                prod = 0
                break
            prod = prod * val
        total += prod
    return as_rational(total)


def build_subdivision_nfg(G: Multigraph, w: HalfEdgeWeights) -> NormalFactorGraph:
    """NFG on ``Sub(G)``: original vertices keep ids, edge ``i`` becomes
    vertex ``n + i`` joined by edges ``2i`` (to its first endpoint) and
    ``2i + 1`` (to its second)."""
    n = G.n
    edges = []
    for i, (u, v, _) in enumerate(G.edges):
        edges.append((u, n + i, 2 * i))
        edges.append((n + i, v, 2 * i + 1))
    sub = Multigraph(n + G.m, tuple(edges))
    tables = []
    for v in range(n):
        k = G.degrees()[v]
        tables.append(tuple(1 if sum(s) <= 1 else 0 for s in itertools.product((0, 1), repeat=k)))
    for _ in range(G.m):
        tables.append((w.a0, w.a1, w.a1, w.a2))
    return NormalFactorGraph(sub, 2, tuple(tables))


def perfect_matching_nfg(G: Multigraph) -> NormalFactorGraph:
    """Binary NFG whose vertex tables accept exactly one incident 1."""
    tables = []
    for k in G.degrees():
        tables.append(tuple(1 if sum(s) == 1 else 0 for s in itertools.product((0, 1), repeat=k)))
    return NormalFactorGraph(G, 2, tuple(tables))


def constant_nfg(G: Multigraph, q: int, value=1) -> NormalFactorGraph:
    return NormalFactorGraph(G, q, tuple((value,) * q**k for k in G.degrees()))


# --------------------------------------------------------------------------
# gauge transformations


def _matrix(rows) -> Matrix:
    return tuple(tuple(as_rational(c) for c in r) for r in rows)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(as_rational(sum(Fraction(a[i][k]) * b[k][j] for k in range(len(b)))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def _transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def _inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [[Fraction(c) for c in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [c / p for c in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return _matrix(row[n:] for row in aug)


@dataclass(frozen=True)
class GaugePair:
    """Per edge id, ``(G_uv, G_vu)``: the ``q' x q`` matrices applied at the
    edge's first and second endpoint, indexed ``[new][old]``."""

    matrices: dict

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "matrices", {e: (_matrix(a), _matrix(b)) for e, (a, b) in self.matrices.items()}
        )

    def new_alphabet(self) -> int:
        sizes = {len(a) for a, _ in self.matrices.values()} | {len(b) for _, b in self.matrices.values()}
        if len(sizes) != 1:
            raise GraphError("gauge matrices disagree on the new alphabet size")
        return sizes.pop()

    def validate(self, H: NormalFactorGraph) -> None:
        """Raise unless ``G_uv^T G_vu`` is the identity on every edge."""
        ident = tuple(tuple(int(i == j) for j in range(H.q)) for i in range(H.q))
        for e in H.graph.edge_ids:
            if e not in self.matrices:
                raise GraphError(f"no gauge matrices for edge {e}")
            a, b = self.matrices[e]
            if any(len(r) != H.q for r in a + b):
                raise GraphError(f"gauge matrices on edge {e} do not act on the alphabet of size {H.q}")
            if _matmul(_transpose(a), b) != ident:
                raise GraphError(f"gauge condition G_uv^T G_vu = Id fails on edge {e}")


def gauge_transform(H: NormalFactorGraph, gauge: GaugePair) -> NormalFactorGraph:
    """New tables ``sum_sigma prod_i G_(v, slot i)[tau_i][sigma_i] f_v(sigma)``.

    The partition function is unchanged for any valid gauge.
    """
    gauge.validate(H)
    q_new = gauge.new_alphabet()
    tables = []
    for v in range(H.graph.n):
        arr = H.table_array(v)
        for axis, (e, side) in enumerate(H.slots(v)):
            mat = np.empty((q_new, H.q), dtype=object)
            mat[:, :] = [list(r) for r in gauge.matrices[e][side]]
            arr = np.moveaxis(np.tensordot(mat, arr, axes=([1], [axis])), 0, axis)
        tables.append(tuple(as_rational(c) for c in np.asarray(arr).reshape(-1)))
    return NormalFactorGraph(H.graph, q_new, tuple(tables))


def identity_gauge(H: NormalFactorGraph) -> GaugePair:
    ident = tuple(tuple(int(i == j) for j in range(H.q)) for i in range(H.q))
    return GaugePair({e: (ident, ident) for e in H.graph.edge_ids})


def subdivision_gauge(H: NormalFactorGraph, w: HalfEdgeWeights, n_original: int) -> GaugePair:
    """The triangular pair turning the subdivision NFG into a matching sum.

    ``G1 = [[1, 0], [-a1/a0, 1]]`` sits on the subdivision-vertex side of
    each edge, ``G2 = [[1, a1/a0], [0, 1]]`` on the original-vertex side.
    """
    if w.a0 == 0:
        raise ZeroDivisionError("gauge needs a0 != 0")
    r = Fraction(w.a1) / Fraction(w.a0)
    g1 = ((1, 0), (-r, 1))
    g2 = ((1, r), (0, 1))
    mats = {}
    for u, v, e in H.graph.edges:
        mats[e] = (g2 if u < n_original else g1, g2 if v < n_original else g1)
    return GaugePair(mats)


def _random_rational(rng: random.Random, span: int = 5) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def random_gauge(
    H: NormalFactorGraph, rng: random.Random, q_new: int | None = None, triangular: bool = False
) -> GaugePair:
    """A random valid gauge with rational entries.

    ``triangular`` draws a unit lower-triangular ``G_uv`` and sets
    ``G_vu = (G_uv^T)^-1`` (upper triangular).  Otherwise ``G_uv`` is a dense
    ``q_new x q`` matrix of full column rank and ``G_vu = G_uv (G_uv^T G_uv)^-1``.
    """
    q = H.q
    q_new = q if q_new is None else q_new
    if q_new < q:
        raise GraphError("the new alphabet cannot be smaller than the old one")
    mats = {}
    for e in H.graph.edge_ids:
        if triangular:
            if q_new != q:
                raise GraphError("triangular gauges keep the alphabet size")
            a = _matrix([[1 if i == j else (_random_rational(rng) if j < i else 0) for j in range(q)] for i in range(q)])
            b = _inverse(_transpose(a))
        else:
            while True:
                a = _matrix([[_random_rational(rng) for _ in range(q)] for _ in range(q_new)])
                try:
                    b = _matmul(a, _inverse(_matmul(_transpose(a), a)))
                    break
                except ZeroDivisionError:
                    continue
        if rng.random() < 0.5:
            a, b = b, a
        mats[e] = (a, b)
    return GaugePair(mats)


# --------------------------------------------------------------------------
# serialization


def nfg_to_json(H: NormalFactorGraph) -> str:
    return json.dumps(
        {
            "n": H.graph.n,
            "q": H.q,
            "edges": [[u, v] for u, v, _ in H.graph.edges],
            "tables": [[format_rational(c) for c in t] for t in H.tables],
        }
    )


def nfg_from_json(text: str) -> NormalFactorGraph:
    data = json.loads(text)
    G = Multigraph.from_pairs(int(data["n"]), [tuple(p) for p in data["edges"]])
    return NormalFactorGraph(G, int(data["q"]), tuple(tuple(Fraction(c) for c in t) for t in data["tables"]))
