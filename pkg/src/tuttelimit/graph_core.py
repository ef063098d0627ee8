"""Multigraphs, graph generators and structural statistics.

Graphs are immutable :class:`Multigraph` values.  Loops and parallel edges are
allowed because deletion-contraction produces them; every edge carries an id
that survives deletion and contraction unchanged.
"""

from __future__ import annotations

import math
from random import Random
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "GraphError",
    "Multigraph",
    "EdgeOrdering",
    "cycle_graph",
    "named_graph",
    "random_regular",
    "trial_seed",
    "disjoint_union",
    "delete_edge",
    "contract_edge",
    "component_count",
    "components",
    "girth",
    "enumerate_cycles",
    "count_short_cycles",
    "read_edge_list",
    "write_edge_list",
    "parse_edge_list",
    "format_edge_list",
]


class GraphError(ValueError):
    """Invalid graph construction or operation."""


@dataclass(frozen=True)
class Multigraph:
    """Vertices ``0..n-1`` and edges ``(u, v, eid)``; ``u == v`` is a loop."""

    n: int
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("negative vertex count")
        edges = tuple((int(u), int(v), int(e)) for u, v, e in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for u, v, e in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {e} = ({u}, {v}) out of range for n={self.n}")
            if e in seen:
                raise GraphError(f"duplicate edge id {e}")
            seen.add(e)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence[int]]) -> Multigraph:
        return cls(n, tuple((u, v, i) for i, (u, v) in enumerate(pairs)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e for _, _, e in self.edges)

    def edge(self, eid: int) -> tuple[int, int]:
        for u, v, e in self.edges:
            if e == eid:
                return u, v
        raise GraphError(f"no edge with id {eid}")

    def pairs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, _ in self.edges]

    def degrees(self) -> list[int]:
        """Degree sequence; a loop adds 2 to its vertex."""
        deg = [0] * self.n
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def average_degree(self) -> float:
        return 2 * self.m / self.n if self.n else 0.0

    def regular_degree(self) -> int | None:
        """The common degree if the graph is regular, else ``None``."""
        deg = self.degrees()
        if not deg or any(d != deg[0] for d in deg):
            return None
        return deg[0]

    def incidence(self) -> list[list[tuple[int, int]]]:
        """Per vertex, ``(neighbor, eid)`` pairs; a loop appears twice."""
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, e in self.edges:
            inc[u].append((v, e))
            inc[v].append((u, e))
        return inc

    def neighbors(self) -> list[set[int]]:
        """Simple neighbor sets, loops excluded."""
        nb: list[set[int]] = [set() for _ in range(self.n)]
        for u, v, _ in self.edges:
            if u != v:
                nb[u].add(v)
                nb[v].add(u)
        return nb

    def has_loops(self) -> bool:
        return any(u == v for u, v, _ in self.edges)

    def is_simple(self) -> bool:
        if self.has_loops():
            return False
        keys = [(min(u, v), max(u, v)) for u, v, _ in self.edges]
        return len(keys) == len(set(keys))

    def key(self) -> tuple:
        """Hashable labelled description (ids ignored)."""
        return (self.n, tuple(sorted((min(u, v), max(u, v)) for u, v, _ in self.edges)))


@dataclass(frozen=True)
class EdgeOrdering:
    """A total order on edge ids; position in ``order`` is the rank."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(self.order))
        if len(set(self.order)) != len(self.order):
            raise GraphError("edge ordering repeats an edge id")

    @classmethod
    def natural(cls, G: Multigraph) -> EdgeOrdering:
        return cls(tuple(sorted(G.edge_ids)))

    @classmethod
    def random(cls, G: Multigraph, rng: Random) -> EdgeOrdering:
        ids = list(G.edge_ids)
        rng.shuffle(ids)
        return cls(tuple(ids))

    def rank(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.order)}

    def check(self, G: Multigraph) -> None:
        if set(self.order) != set(G.edge_ids):
            raise GraphError("edge ordering is not a bijection on the edge ids")


# --------------------------------------------------------------------------
# generators


def cycle_graph(n: int) -> Multigraph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return Multigraph.from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def _complete(n: int) -> Multigraph:
    return Multigraph.from_pairs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def _path(n: int) -> Multigraph:
    if n < 1:
        raise GraphError("path needs at least one vertex")
    return Multigraph.from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def _star(k: int) -> Multigraph:
    # k leaves around center 0
    return Multigraph.from_pairs(k + 1, [(0, i) for i in range(1, k + 1)])


def _petersen() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Multigraph.from_pairs(10, outer + spokes + inner)


_NAMED = {
    "complete_k": _complete,
    "k": _complete,
    "path": _path,
    "p": _path,
    "star": _star,
    "edgeless": lambda n: Multigraph(n),
    "cycle": cycle_graph,
    "c": cycle_graph,
}


def named_graph(name: str, param: int | None = None) -> Multigraph:
    """Standard test graphs.

    ``name`` is one of ``complete_k``, ``petersen``, ``path``, ``star``,
    ``edgeless`` or ``cycle``; the size may be passed as ``param`` or inline
    as ``"complete_k(4)"`` / ``"star:3"``.  ``star(k)`` has ``k`` leaves.
    """
    text = name.strip().lower()
    for sep in ("(", ":"):
        if sep in text:
            head, _, rest = text.partition(sep)
            text = head.strip()
            param = int(rest.rstrip(")").strip())
            break
    if text == "petersen":
        return _petersen()
    if text not in _NAMED:
        raise GraphError(f"unknown graph name {name!r}")
    if param is None:
        raise GraphError(f"graph {name!r} needs a size parameter")
    return _NAMED[text](param)


def trial_seed(seed: int, trial: int) -> int:
    """Per-trial seed; XOR keeps trials independent of scheduling order."""
    return (int(seed) ^ int(trial)) & 0xFFFFFFFFFFFFFFFF


def random_regular(n: int, d: int, seed: int, max_tries: int = 100_000) -> Multigraph:
    """Uniform simple ``d``-regular graph via the pairing model.

    Stubs are matched by a uniform random permutation drawn from numpy's
    PCG64 generator seeded with ``seed``; pairings with a loop or a repeated
    pair are rejected and redrawn.  Conditioned on simplicity the pairing
    model is uniform over simple ``d``-regular graphs.
    """
    if (n * d) % 2:
        raise GraphError(f"n*d must be even (n={n}, d={d})")
    if d >= n or d < 0:
        raise GraphError(f"need 0 <= d < n (n={n}, d={d})")
    rng = np.random.Generator(np.random.PCG64(seed))
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        perm = rng.permutation(stubs)
        a, b = perm[0::2], perm[1::2]
        if np.any(a == b):
            continue
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        codes = lo * n + hi
        if len(np.unique(codes)) != len(codes):
            continue
        pairs = sorted(zip(lo.tolist(), hi.tolist()))
        return Multigraph.from_pairs(n, pairs)
    raise GraphError(f"no simple pairing found in {max_tries} tries (n={n}, d={d})")


def disjoint_union(*graphs: Multigraph) -> Multigraph:
    pairs: list[tuple[int, int]] = []
    offset = 0
    for G in graphs:
        pairs.extend((u + offset, v + offset) for u, v in G.pairs())
        offset += G.n
    return Multigraph.from_pairs(offset, pairs)


# --------------------------------------------------------------------------
# minors


def delete_edge(G: Multigraph, eid: int) -> Multigraph:
    if eid not in G.edge_ids:
        raise GraphError(f"no edge with id {eid}")
    return Multigraph(G.n, tuple(t for t in G.edges if t[2] != eid))


def contract_edge(G: Multigraph, eid: int) -> Multigraph:
    """Merge the endpoints of ``eid``; other parallel edges become loops.

    The higher-numbered endpoint disappears and later vertices shift down.
    """
    u, v = G.edge(eid)
    if u == v:
        raise GraphError(f"cannot contract loop {eid}")
    keep, gone = min(u, v), max(u, v)

    def relabel(w: int) -> int:
        if w == gone:
            w = keep
        return w - 1 if w > gone else w

    edges = tuple((relabel(a), relabel(b), e) for a, b, e in G.edges if e != eid)
    return Multigraph(G.n - 1, edges)


# --------------------------------------------------------------------------
# structure


def components(G: Multigraph) -> list[list[int]]:
    parent = list(range(G.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v, _ in G.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, list[int]] = {}
    for w in range(G.n):
        groups.setdefault(find(w), []).append(w)
    return list(groups.values())


def component_count(G: Multigraph) -> int:
    return len(components(G))


def girth(G: Multigraph) -> float:
    """Shortest cycle length, ``math.inf`` for forests.

    Loops count as length 1, a parallel pair as length 2.
    """
    if G.has_loops():
        return 1
    inc = G.incidence()
    best = math.inf
    for root in range(G.n):
        dist = {root: 0}
        via = {root: -1}
        queue = deque([root])
        while queue:
            a = queue.popleft()
            if 2 * dist[a] + 1 >= best:
                break
            for b, e in inc[a]:
                if e == via[a] or (b in via and e == via[b]):
                    continue
                if b not in dist:
                    dist[b] = dist[a] + 1
                    via[b] = e
                    queue.append(b)
                else:
                    best = min(best, dist[a] + dist[b] + 1)
    return best


def _iter_cycles(G: Multigraph, max_len: int | None) -> Iterator[frozenset[int]]:
    """Each cycle once per traversal direction, as a frozenset of edge ids."""
    limit = G.m if max_len is None else max_len
    inc = G.incidence()
    for u, v, e in G.edges:
        if u == v and limit >= 1:
            yield frozenset((e,))
    for start in range(G.n):
        # cycles whose smallest vertex is start
        path_edges: list[int] = []
        on_path = {start}

        def extend(a: int) -> Iterator[frozenset[int]]:
            for b, e in inc[a]:
                if b == a or e in path_edges:
                    continue
                if b == start:
                    if len(path_edges) + 1 >= 2 and len(path_edges) + 1 <= limit:
                        yield frozenset(path_edges + [e])
                    continue
                if b < start or b in on_path or len(path_edges) + 2 > limit:
                    continue
                on_path.add(b)
                path_edges.append(e)
                yield from extend(b)
                path_edges.pop()
                on_path.discard(b)

        yield from extend(start)


def enumerate_cycles(G: Multigraph, max_len: int | None = None) -> list[frozenset[int]]:
    """All cycles (as edge-id sets) of length at most ``max_len``."""
    return sorted(set(_iter_cycles(G, max_len)), key=lambda c: (len(c), sorted(c)))


def count_short_cycles(G: Multigraph, g: int) -> int:
    """L(G, g): the number of cycles of length at most ``g - 1``."""
    if g < 2:
        raise GraphError("g must be at least 2")
    return len(enumerate_cycles(G, g - 1))


# --------------------------------------------------------------------------
# edge-list files


def parse_edge_list(text: str) -> Multigraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge list must start with 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges, found {len(body)}")
    pairs = []
    for row in body:
        if len(row) != 2:
            raise GraphError(f"bad edge line {' '.join(row)!r}")
        pairs.append((int(row[0]), int(row[1])))
    return Multigraph.from_pairs(n, pairs)


def format_edge_list(G: Multigraph) -> str:
    lines = [f"{G.n} {G.m}"] + [f"{u} {v}" for u, v, _ in G.edges]
    return "\n".join(lines) + "\n"


def read_edge_list(path: str | Path) -> Multigraph:
    return parse_edge_list(Path(path).read_text())


def write_edge_list(G: Multigraph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(G))
