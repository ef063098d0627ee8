"""Identity suites, inequality audits and convergence runs.

Everything here composes the exact engines; nothing is asserted with
floating point unless the quantity itself is irrational.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .bethe import t_d
from .exact_poly import BiPoly, as_rational, format_rational
from .graph_core import (
    EdgeOrdering,
    GraphError,
    Multigraph,
    component_count,
    count_short_cycles,
    cycle_graph,
    disjoint_union,
    girth,
    named_graph,
    random_regular,
    trial_seed,
)
from .halfedge import (
    HalfEdgeWeights,
    evaluate_profile,
    half_edge_closed_form,
    half_edge_polynomial,
    half_edge_profile,
    pseudo_forest_polynomial,
)
from .matching import matching_polynomial, r_from_matching, r_polynomial
from .tutte import (
    broken_cycle_free_counts,
    forest_counts,
    forest_polynomial,
    random_cluster_to_tutte,
    spanning_trees_kirchhoff,
    tutte_polynomial,
    tutte_subset_oracle,
    whitney_polynomial,
)

__all__ = [
    "CSV_COLUMNS",
    "ExperimentRecord",
    "ComparisonEntry",
    "FKGEntry",
    "BoundReport",
    "IdentityResult",
    "IdentityReport",
    "IDENTITIES",
    "default_g",
    "comparison_bound_report",
    "fkg_bound_report",
    "bound_report",
    "default_corpus",
    "identity_suite",
    "convergence_run",
    "aggregate",
    "records_to_csv",
    "records_to_json",
    "sandwich_x_check",
    "sandwich_y_check",
]

CSV_COLUMNS = ("d", "n", "trial", "seed", "girth", "L", "x", "y", "T_exact", "root", "target", "gap")
CONVERGENCE_EDGE_LIMIT = 32
CONVERGENCE_G = 5


# --------------------------------------------------------------------------
# inequality audits


def default_g(G: Multigraph) -> int:
    """Girth, or ``n + 1`` for a forest (any g works there since L = 0)."""
    g = girth(G)
    if math.isinf(g):
        return G.n + 1
    return max(int(g), 2)


@dataclass(frozen=True)
class ComparisonEntry:
    """``lower <= F_G(z) <= R_G(z+1)``; ``lower`` is exact when its exponent is an integer."""

    z: Fraction
    g: int
    L: int
    lower: Fraction | float
    forest: Fraction
    upper: Fraction
    lower_ok: bool
    upper_ok: bool

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok

    def triple(self) -> tuple:
        return (as_rational(self.lower) if isinstance(self.lower, Fraction) else self.lower,
                as_rational(self.forest), as_rational(self.upper))

    def render(self) -> str:
        lo = format_rational(self.lower) if isinstance(self.lower, Fraction) else repr(self.lower)
        return f"({lo}, {format_rational(self.forest)}, {format_rational(self.upper)})"


@dataclass(frozen=True)
class FKGEntry:
    """``c_k >= (2/3)^L (1 - 1/g)^(m - n + k(G) - L) f_k``."""

    k: int
    f_k: int
    c_k: int
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.c_k >= self.bound

    @property
    def tight(self) -> bool:
        return self.c_k == self.bound


@dataclass
class BoundReport:
    graph: str
    n: int
    m: int
    g: int
    L: int
    comparison: list[ComparisonEntry] = field(default_factory=list)
    fkg: list[FKGEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.comparison) and all(e.ok for e in self.fkg)

    def violations(self) -> list[str]:
        out = [f"comparison z={format_rational(e.z)}" for e in self.comparison if not e.ok]
        out += [f"fkg k={e.k}" for e in self.fkg if not e.ok]
        return out


def comparison_bound_report(G: Multigraph, z, g: int | None = None, name: str = "G") -> BoundReport:
    z = Fraction(as_rational(z))
    if z <= 0:
        raise ValueError("z must be positive")
    g = default_g(G) if g is None else g
    L = count_short_cycles(G, g)
    F = Fraction(forest_polynomial(G).eval_exact(z))
    R = Fraction(r_polynomial(G).eval_exact(z + 1))
    base = 1 + g * Fraction(2 * G.m, G.n) / z
    expo = L + Fraction(G.n, g)
    if expo.denominator == 1:
        lower: Fraction | float = R / base ** int(expo)
        lower_ok = lower <= F
    else:
        # base^(-expo) R <= F  <=>  R^g <= F^g base^(gL + n), all terms positive
        lower = float(R) * math.exp(-float(expo) * math.log(base))
        lower_ok = R**g <= F**g * base ** (g * L + G.n)
    entry = ComparisonEntry(z, g, L, lower, F, R, lower_ok, F <= R)
    return BoundReport(name, G.n, G.m, g, L, comparison=[entry])


def fkg_bound_report(
    G: Multigraph, ordering: EdgeOrdering | None = None, g: int | None = None, name: str = "G"
) -> BoundReport:
    if component_count(G) > 1:
        raise GraphError("the broken-cycle bound is audited on connected graphs")
    g = default_g(G) if g is None else g
    L = count_short_cycles(G, g)
    c = broken_cycle_free_counts(G, ordering).c
    f = forest_counts(G)
    factor = Fraction(2, 3) ** L * (1 - Fraction(1, g)) ** (G.m - G.n + 1 - L)
    rows = [FKGEntry(k, f[k], c[k], factor * f[k]) for k in range(G.n)]
    return BoundReport(name, G.n, G.m, g, L, fkg=rows)


def bound_report(G: Multigraph, zs: Iterable, g: int | None = None, name: str = "G",
                 ordering: EdgeOrdering | None = None) -> BoundReport:
    """Both audits in one report; the FKG part is skipped for disconnected graphs."""
    g = default_g(G) if g is None else g
    rep = BoundReport(name, G.n, G.m, g, count_short_cycles(G, g))
    for z in zs:
        rep.comparison.extend(comparison_bound_report(G, z, g, name).comparison)
    if component_count(G) == 1:
        rep.fkg = fkg_bound_report(G, ordering, g, name).fkg
    return rep


# --------------------------------------------------------------------------
# identity suite

IDENTITIES = (
    "tutte_oracle",
    "forest",
    "half_edge",
    "pseudo_forest",
    "random_cluster",
    "whitney",
    "kirchhoff",
    "regular_r_mu",
)

_HALF_EDGE_WEIGHTS = (
    HalfEdgeWeights(2, 3, 5),
    HalfEdgeWeights(3, -1, Fraction(1, 2)),
    HalfEdgeWeights(Fraction(1, 2), Fraction(2, 3), -7),
)
_CLUSTER_POINTS = ((2, 3), (3, 2), (Fraction(1, 2), 3), (-1, Fraction(5, 3)))


@dataclass(frozen=True)
class IdentityResult:
    graph: str
    identity: str
    status: str  # pass | fail | n/a | error
    detail: str = ""


@dataclass
class IdentityReport:
    results: list[IdentityResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status in ("pass", "n/a") for r in self.results)

    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if r.status in ("fail", "error")]

    def summary(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for r in self.results:
            out.setdefault(r.identity, {}).setdefault(r.status, 0)
            out[r.identity][r.status] += 1
        return out


def default_corpus(random_count: int = 25, seed: int = 1000) -> list[tuple[str, Multigraph]]:
    corpus = [
        ("K2", named_graph("complete_k", 2)),
        ("P3", named_graph("path", 3)),
        ("star(3)", named_graph("star", 3)),
        ("K3", named_graph("complete_k", 3)),
        ("C4", cycle_graph(4)),
        ("C5", cycle_graph(5)),
        ("C6", cycle_graph(6)),
        ("K4", named_graph("complete_k", 4)),
        ("C3+C3", disjoint_union(cycle_graph(3), cycle_graph(3))),
    ]
    sizes = (6, 8, 10)
    for i in range(random_count):
        n = sizes[i % len(sizes)]
        corpus.append((f"rr3_n{n}_s{seed + i}", random_regular(n, 3, seed + i)))
    return corpus


def _check_identity(identity: str, G: Multigraph, T: BiPoly) -> tuple[str, str]:
    k = component_count(G)
    if identity == "tutte_oracle":
        oracle = tutte_subset_oracle(G)
        return ("pass", "") if oracle == T else ("fail", "deletion-contraction differs from subset sum")
    if identity == "forest":
        lhs = forest_polynomial(G, method="enumerate")
        rhs = T.at_y(1).shift(1).mul_zpow(k)
        return ("pass", "") if lhs == rhs else ("fail", f"{lhs.render()} != {rhs.render()}")
    if identity == "half_edge":
        prof = half_edge_profile(G)
        for w in _HALF_EDGE_WEIGHTS:
            brute = evaluate_profile(prof, Fraction(w.a0), Fraction(w.a1), Fraction(w.a2))
            if brute != half_edge_closed_form(G, w):
                return "fail", f"weights {w}"
        return "pass", ""
    if identity == "pseudo_forest":
        if G.has_loops():
            return "n/a", "loops"
        R1 = r_polynomial(G).shift(1)
        if pseudo_forest_polynomial(G) != R1:
            return "fail", "R(z+1) differs from the pseudo-forest sum"
        M = half_edge_polynomial(G)
        ok = M == R1.mul_zpow(G.m - G.n) if G.m >= G.n else M.mul_zpow(G.n - G.m) == R1
        return ("pass", "") if ok else ("fail", "M(z,1,-1) != z^(m-n) R(z+1)")
    if identity == "random_cluster":
        for x, y in _CLUSTER_POINTS:
            if random_cluster_to_tutte(G, x, y) != T(x, y):
                return "fail", f"at ({x}, {y})"
        return "pass", ""
    if identity == "whitney":
        if k > 1:
            return "n/a", "disconnected"
        lhs = broken_cycle_free_counts(G).polynomial()
        rhs = whitney_polynomial(G, T)
        return ("pass", "") if lhs == rhs else ("fail", f"{lhs.render()} != {rhs.render()}")
    if identity == "kirchhoff":
        if k > 1:
            return "n/a", "disconnected"
        tau, t11 = spanning_trees_kirchhoff(G), T(1, 1)
        return ("pass", "") if tau == t11 else ("fail", f"{tau} != {t11}")
    if identity == "regular_r_mu":
        d = G.regular_degree()
        if d is None or G.has_loops():
            return "n/a", "not regular"
        lhs = r_from_matching(matching_polynomial(G), G.n, d)
        return ("pass", "") if lhs == r_polynomial(G) else ("fail", "R != substituted mu")
    raise ValueError(f"unknown identity {identity!r}")


def identity_suite(corpus: Sequence[tuple[str, Multigraph]], identities: Sequence[str] = IDENTITIES) -> IdentityReport:
    """Run every identity on every graph; guard violations are recorded and the suite moves on."""
    report = IdentityReport()
    for name, G in corpus:
        try:
            T = tutte_polynomial(G).polynomial
        except GraphError as exc:
            report.results.extend(IdentityResult(name, i, "error", str(exc)) for i in identities)
            continue
        for ident in identities:
            try:
                status, detail = _check_identity(ident, G, T)
            except (GraphError, ArithmeticError) as exc:
                status, detail = "error", str(exc)
            report.results.append(IdentityResult(name, ident, status, detail))
    return report


# --------------------------------------------------------------------------
# convergence experiments


@dataclass(frozen=True)
class ExperimentRecord:
    """One sampled graph at one ``(x, y)``; ``trial = "mean"`` marks an aggregate row."""

    d: int
    n: int
    trial: int | str
    seed: int | str
    girth: int | str
    L: int | str
    x: str
    y: str
    T_exact: str
    root: float
    target: float
    gap: float

    def row(self) -> dict:
        return asdict(self)


def _per_vertex_root(value: Fraction | int, n: int) -> float:
    value = Fraction(value)
    if value <= 0:
        return 0.0
    return math.exp((math.log(value.numerator) - math.log(value.denominator)) / n)


def _sample(generator: str, n: int, d: int, seed: int) -> Multigraph:
    if generator == "random_regular":
        return random_regular(n, d, seed)
    if generator == "cycle":
        return cycle_graph(n)
    raise ValueError(f"unknown generator {generator!r}")


_TUTTE_CACHE: dict[tuple, BiPoly] = {}


def _tutte_cached(G: Multigraph) -> BiPoly:
    key = G.key()
    hit = _TUTTE_CACHE.get(key)
    if hit is None:
        if len(_TUTTE_CACHE) > 4096:
            _TUTTE_CACHE.clear()
        hit = _TUTTE_CACHE[key] = tutte_polynomial(G).polynomial
    return hit


def _one_trial(task: tuple) -> ExperimentRecord:
    generator, d, n, trial, seed, x, y, g = task
    s = trial_seed(seed, trial)
    G = _sample(generator, n, d, s)
    T = _tutte_cached(G)
    val = as_rational(T(x, y))
    root = _per_vertex_root(val, n)
    target = t_d(d, float(x), float(y))
    gi = girth(G)
    return ExperimentRecord(
        d=d, n=n, trial=trial, seed=s,
        girth="inf" if math.isinf(gi) else int(gi),
        L=count_short_cycles(G, g),
        x=format_rational(x), y=format_rational(y),
        T_exact=format_rational(val),
        root=root, target=target, gap=abs(root - target) / target,
    )


def _to_rational(v) -> Fraction:
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(as_rational(v))


def convergence_run(
    d: int,
    x,
    y,
    sizes: Sequence[int],
    trials: int,
    seed: int,
    generator: str = "random_regular",
    workers: int = 1,
    g: int = CONVERGENCE_G,
) -> list[ExperimentRecord]:
    """Sample ``trials`` graphs per size and record ``T(x, y)^(1/n)`` against ``t_d(x)``.

    Trial ``i`` uses seed ``seed ^ i``, so rows are reproducible one by one.
    ``L`` in each row counts cycles of length at most ``g - 1``.
    """
    x, y = _to_rational(x), _to_rational(y)
    if x < 1:
        raise ValueError("x must be at least 1")
    if not 0 <= y <= 1:
        raise ValueError("y must lie in [0, 1]")
    if generator == "cycle":
        d = 2
    for n in sizes:
        if (n * d) % 2:
            raise ValueError(f"n*d must be even (n={n}, d={d})")
        # cycles reduce to bridges after one deletion, so only sampled graphs are guarded
        if generator == "random_regular" and n * d // 2 > CONVERGENCE_EDGE_LIMIT:
            raise GraphError(
                f"n={n}, d={d} gives {n * d // 2} edges; exact evaluation is limited to {CONVERGENCE_EDGE_LIMIT}"
            )
    tasks = [(generator, d, n, t, seed, x, y, g) for n in sizes for t in range(trials)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            out = list(ex.map(_one_trial, tasks))
    else:
        out = [_one_trial(t) for t in tasks]
    return sorted(out, key=lambda r: (r.n, r.trial))


def aggregate(records: Sequence[ExperimentRecord]) -> list[ExperimentRecord]:
    """One ``trial = "mean"`` row per ``n``: mean root and mean gap."""
    by_n: dict[int, list[ExperimentRecord]] = {}
    for r in records:
        if r.trial != "mean":
            by_n.setdefault(r.n, []).append(r)
    rows = []
    for n in sorted(by_n):
        rs = by_n[n]
        rows.append(ExperimentRecord(
            d=rs[0].d, n=n, trial="mean", seed="", girth="", L="",
            x=rs[0].x, y=rs[0].y, T_exact="",
            root=statistics.fmean(r.root for r in rs), target=rs[0].target,
            gap=statistics.fmean(r.gap for r in rs),
        ))
    return rows


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        row = r.row()
        for key in ("root", "target", "gap"):
            row[key] = repr(float(row[key]))
        w.writerow(row)
    return buf.getvalue()


def records_to_json(records: Iterable[ExperimentRecord]) -> str:
    return json.dumps([r.row() for r in records], indent=2)


def sandwich_x_check(G: Multigraph, x) -> tuple[Fraction, Fraction, Fraction]:
    """``(T(1,1), T(x,1), x^n T(1,1))``; nondecreasing for ``x >= 1`` since coefficients are non-negative."""
    x = Fraction(as_rational(x))
    T = _tutte_cached(G)
    t11 = Fraction(T(1, 1))
    return t11, Fraction(T(x, 1)), x ** G.n * t11


def sandwich_y_check(G: Multigraph, x, y) -> tuple[Fraction, Fraction, Fraction]:
    """``(T(x,0), T(x,y), T(x,1))``; nondecreasing for ``x >= 1``, ``0 <= y <= 1``."""
    x, y = Fraction(as_rational(x)), Fraction(as_rational(y))
    T = _tutte_cached(G)
    return Fraction(T(x, 0)), Fraction(T(x, y)), Fraction(T(x, 1))
