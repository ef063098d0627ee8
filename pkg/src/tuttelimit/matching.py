"""Matching polynomial, R_G, the Laplacian matching polynomial, matching
roots, path-trees and tree-like walk counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .exact_poly import Poly, isolate_real_roots
from .graph_core import GraphError, Multigraph

__all__ = [
    "MatchingPolynomial",
    "PathTree",
    "matching_sum",
    "matching_polynomial",
    "matching_counts_brute_force",
    "r_polynomial",
    "r_from_matching",
    "r_regular_identity_check",
    "laplacian_matching_polynomial",
    "real_root_certificate",
    "imaginary_residue",
    "polynomial_real_roots",
    "matching_roots",
    "power_sums",
    "path_tree",
    "tree_like_walk_total",
    "tree_like_moment",
    "tree_moment_infinite",
]

PATH_TREE_LIMIT = 10**6


@dataclass(frozen=True)
class MatchingPolynomial:
    """``mu_G(z) = sum_k (-1)^k m_k z^(n-2k)`` with the counts ``m_k``."""

    poly: Poly
    matching_counts: tuple[int, ...]


@dataclass(frozen=True)
class PathTree:
    """Simple paths from a root; ``parent[i]`` is the index of the path minus
    its last vertex (``-1`` for the trivial path)."""

    paths: tuple[tuple[int, ...], ...]
    parent: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.paths)

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in self.paths]
        for i, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(i)
        return kids


def _check_loopless(G: Multigraph) -> None:
    if G.has_loops():
        raise GraphError("matching-type polynomials are defined for loopless graphs")


def matching_sum(G: Multigraph, vertex_weight: Callable[[int], object], edge_weight):
    """``sum_M edge_weight^|M| prod_{v not in V(M)} vertex_weight(v)``.

    Works over any commutative ring whose elements support ``+`` and ``*``
    with ints (``Poly``, ``Fraction``).  Recursion on the lowest remaining
    vertex, memoized on the remaining vertex set; parallel edges count as
    distinct matching edges.
    """
    _check_loopless(G)
    mult: list[dict[int, int]] = [dict() for _ in range(G.n)]
    for u, v, _ in G.edges:
        mult[u][v] = mult[u].get(v, 0) + 1
        mult[v][u] = mult[v].get(u, 0) + 1
    weights = [vertex_weight(v) for v in range(G.n)]
    memo: dict[int, object] = {0: 1}

    def solve(mask: int):
        hit = memo.get(mask)
        if hit is not None:
            return hit
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        acc = weights[v] * solve(rest)
        for u, k in mult[v].items():
            if rest >> u & 1:
                acc = acc + edge_weight * k * solve(rest & ~(1 << u))
        memo[mask] = acc
        return acc

    return solve((1 << G.n) - 1)


def matching_polynomial(G: Multigraph) -> MatchingPolynomial:
    z = Poly.z()
    poly = matching_sum(G, lambda v: z, -1)
    if not isinstance(poly, Poly):
        poly = Poly.const(poly)
    counts = tuple(abs(poly[G.n - 2 * k]) for k in range(G.n // 2 + 1))
    while len(counts) > 1 and counts[-1] == 0:
        counts = counts[:-1]
    return MatchingPolynomial(poly, counts)


def matching_counts_brute_force(G: Multigraph) -> list[int]:
    """``m_k`` by checking every edge subset (independent of the recursion)."""
    _check_loopless(G)
    edges = G.pairs()
    counts = [0] * (G.n // 2 + 1)
    for mask in range(1 << len(edges)):
        used: set[int] = set()
        ok, size = True, 0
        for i, (u, v) in enumerate(edges):
            if mask >> i & 1:
                if u in used or v in used:
                    ok = False
                    break
                used.update((u, v))
                size += 1
        if ok:
            counts[size] += 1
    return counts


def r_polynomial(G: Multigraph) -> Poly:
    """``R_G(z) = sum_M (-z)^|M| prod_{v not in V(M)} (z + d_v - 1)``."""
    deg = G.degrees()
    out = matching_sum(G, lambda v: Poly([deg[v] - 1, 1]), Poly([0, -1]))
    return out if isinstance(out, Poly) else Poly.const(out)


def laplacian_matching_polynomial(G: Multigraph) -> Poly:
    """``sum_M (-1)^|M| prod_{v not in V(M)} (z - d_v)``."""
    deg = G.degrees()
    out = matching_sum(G, lambda v: Poly([-deg[v], 1]), -1)
    return out if isinstance(out, Poly) else Poly.const(out)


def r_from_matching(mu: MatchingPolynomial, n: int, d: int) -> Poly:
    """``z^(n/2) mu((d-1+z)/sqrt z)`` written as ``sum_k (-1)^k m_k z^k (z+d-1)^(n-2k)``."""
    lin = Poly([d - 1, 1])
    out = Poly()
    for k, m in enumerate(mu.matching_counts):
        out = out + (lin ** (n - 2 * k)).mul_zpow(k).scale((-1) ** k * m)
    return out


def r_regular_identity_check(G: Multigraph, z) -> tuple[float, float]:
    """Floating-point ``(R_G(z), z^(n/2) mu_G((d-1+z)/sqrt z))`` for regular ``G``."""
    d = G.regular_degree()
    if d is None:
        raise GraphError("R/mu substitution needs a regular graph")
    z = Fraction(z)
    if z <= 0:
        raise ValueError("z must be positive")
    lhs = float(r_polynomial(G).eval_exact(z))
    zf = float(z)
    u = (d - 1 + zf) / math.sqrt(zf)
    rhs = zf ** (G.n / 2) * matching_polynomial(G).poly.eval_float(float(u))
    return lhs, rhs


# --------------------------------------------------------------------------
# roots


def real_root_certificate(p: Poly) -> tuple[int, int]:
    """``(real roots counted with multiplicity, degree)`` via Sturm sequences.

    The two agree exactly when ``p`` is real-rooted.
    """
    total = 0
    for f, k in p.squarefree_factors():
        total += k * len(isolate_real_roots(f, tol=1e-3))
    return total, max(p.degree, 0)


def imaginary_residue(p: Poly) -> float:
    """Largest ``|Im|`` among companion-matrix eigenvalues of the square-free parts."""
    worst = 0.0
    for f, _ in p.squarefree_factors():
        if f.degree < 1:
            continue
        r = np.roots([float(c) for c in reversed(f.coeffs)])
        worst = max(worst, float(np.max(np.abs(r.imag))) if len(r) else 0.0)
    return worst


def polynomial_real_roots(p: Poly, tol: float = 1e-12) -> list[float]:
    """All real roots with multiplicity, sorted.

    Roots of each square-free factor are isolated with exact Sturm counts and
    refined by exact bisection to ``tol``.
    """
    roots: list[float] = []
    for f, k in p.squarefree_factors():
        for r in isolate_real_roots(f, tol):
            roots.extend([r] * k)
    return sorted(roots)


def matching_roots(G: Multigraph) -> list[float]:
    """Roots of ``mu_G``; raises if fewer than ``n`` real roots are found."""
    mu = matching_polynomial(G).poly
    roots = polynomial_real_roots(mu)
    if len(roots) != G.n:
        raise ArithmeticError(f"matching polynomial has {len(roots)} real roots, expected {G.n}")
    return roots


def power_sums(p: Poly, upto: int) -> list[Fraction]:
    """Exact root power sums ``p_0..p_upto`` of a nonzero polynomial (Newton)."""
    n = p.degree
    lead = Fraction(p.leading)
    # p = lead * (z^n + c_1 z^(n-1) + ... + c_n)
    c = [Fraction(p[n - i]) / lead for i in range(n + 1)]
    sums = [Fraction(n)]
    for k in range(1, upto + 1):
        acc = k * c[k] if k <= n else Fraction(0)
        for i in range(1, min(k, n + 1)):
            acc += c[i] * sums[k - i]
        sums.append(-acc)
    return sums


# --------------------------------------------------------------------------
# path-trees and walks


def _simple_neighbors(G: Multigraph) -> list[list[int]]:
    if not G.is_simple():
        raise GraphError("path-trees are built on simple graphs")
    return [sorted(s) for s in G.neighbors()]


def path_tree(G: Multigraph, u: int, max_depth: int | None = None, limit: int = PATH_TREE_LIMIT) -> PathTree:
    """Path-tree rooted at the trivial path ``(u,)``, optionally truncated at
    ``max_depth`` edges; refuses to grow past ``limit`` nodes."""
    if not 0 <= u < G.n:
        raise GraphError(f"vertex {u} out of range")
    nb = _simple_neighbors(G)
    paths: list[tuple[int, ...]] = [(u,)]
    parent: list[int] = [-1]
    frontier = [0]
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        nxt = []
        for i in frontier:
            p = paths[i]
            for w in nb[p[-1]]:
                if w in p:
                    continue
                paths.append(p + (w,))
                parent.append(i)
                nxt.append(len(paths) - 1)
                if len(paths) > limit:
                    raise GraphError(f"path-tree exceeds {limit} nodes")
        frontier = nxt
        depth += 1
    return PathTree(tuple(paths), tuple(parent))


def _closed_walks_at_root(tree: PathTree, length: int) -> int:
    kids = tree.children()
    vec = [0] * len(tree)
    vec[0] = 1
    for _ in range(length):
        new = [0] * len(tree)
        for i, val in enumerate(vec):
            if not val:
                continue
            p = tree.parent[i]
            if p >= 0:
                new[p] += val
            for c in kids[i]:
                new[c] += val
        vec = new
    return vec[0]


def tree_like_walk_total(G: Multigraph, length: int) -> int:
    """Closed walks of the given length at the root of ``T(G, u)``, summed over ``u``.

    A closed walk of length ``l`` never leaves depth ``l/2``, so each
    path-tree is truncated there.  The total equals the ``l``-th power sum of
    the matching roots.
    """
    if length < 0:
        raise ValueError("walk length must be non-negative")
    if length % 2:
        return 0
    return sum(_closed_walks_at_root(path_tree(G, u, max_depth=length // 2), length) for u in range(G.n))


def tree_like_moment(G: Multigraph, length: int) -> Fraction:
    """Per-vertex moment ``total / v(G)``."""
    return Fraction(tree_like_walk_total(G, length), G.n)


def tree_moment_infinite(d: int, k: int) -> int:
    """Closed walks of length ``k`` from the root of the infinite ``d``-regular tree."""
    if k < 0:
        raise ValueError("k must be non-negative")
    depth = [1] + [0] * (k // 2 + 1)
    for _ in range(k):
        new = [0] * len(depth)
        for h, val in enumerate(depth):
            if not val:
                continue
            if h == 0:
                if len(depth) > 1:
                    new[1] += d * val
            else:
                new[h - 1] += val
                if h + 1 < len(depth):
                    new[h + 1] += (d - 1) * val
        depth = new
    return depth[0]
