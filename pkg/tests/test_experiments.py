from __future__ import annotations

import csv
import io
import math
from fractions import Fraction

import pytest

from tuttelimit import experiments
from tuttelimit.exact_poly import BiPoly
from tuttelimit.graph_core import GraphError, cycle_graph, disjoint_union, named_graph, random_regular
from tuttelimit.experiments import (
    CSV_COLUMNS,
    aggregate,
    bound_report,
    comparison_bound_report,
    convergence_run,
    default_corpus,
    fkg_bound_report,
    identity_suite,
    records_to_csv,
    records_to_json,
    sandwich_x_check,
    sandwich_y_check,
)


def test_comparison_triangle():
    e = comparison_bound_report(named_graph("complete_k", 3), 1, 3).comparison[0]
    assert e.triple() == (Fraction(9, 7), 7, 9)
    assert e.ok and e.render() == "(9/7, 7, 9)"


@pytest.mark.parametrize("name", ["path(5)", "star:4"])
def test_comparison_forest_is_tight_above(name):
    G = named_graph(name)
    for z in (Fraction(1, 3), 1, 5):
        e = comparison_bound_report(G, z).comparison[0]
        assert e.forest == e.upper and e.ok


def test_comparison_petersen_strict():
    for z in (1, Fraction(1, 2), 4):
        e = comparison_bound_report(named_graph("petersen"), z, 5).comparison[0]
        assert e.ok and e.lower < e.forest < e.upper


def test_comparison_irrational_exponent():
    # n/g = 10/6 is not an integer, so the lower bound is a float but checked exactly
    e = comparison_bound_report(named_graph("petersen"), 1, 6).comparison[0]
    assert isinstance(e.lower, float) and e.lower_ok
    with pytest.raises(ValueError):
        comparison_bound_report(named_graph("petersen"), 0)


def test_fkg_tight_cases():
    rows = fkg_bound_report(named_graph("complete_k", 3), g=3).fkg
    assert rows[2].c_k == 2 and rows[2].bound == 2 and rows[2].tight
    rows = fkg_bound_report(cycle_graph(4), g=4).fkg
    assert rows[3].c_k == 3 and rows[3].bound == 3 and rows[3].tight
    assert all(r.ok for r in rows)


def test_fkg_tree_and_disconnected():
    rows = fkg_bound_report(named_graph("path", 5)).fkg
    assert all(r.c_k == r.f_k and r.bound <= r.f_k for r in rows)
    with pytest.raises(GraphError):
        fkg_bound_report(disjoint_union(cycle_graph(3), cycle_graph(3)))


@pytest.mark.parametrize("seed", range(10))
def test_bounds_on_random_cubic(seed):
    G = random_regular(10, 3, 500 + seed)
    for g in (None, 5, 6):
        rep = bound_report(G, [Fraction(1, 2), 1, 3], g)
        assert rep.ok, rep.violations()


def test_identity_suite_default_corpus():
    rep = identity_suite(default_corpus(random_count=6))
    assert rep.ok, rep.failures()
    assert rep.summary()["whitney"].get("n/a") == 1  # C3 + C3


def test_identity_suite_empty():
    rep = identity_suite([])
    assert rep.results == [] and rep.ok


def test_identity_suite_detects_corruption(monkeypatch):
    real = experiments.tutte_subset_oracle
    monkeypatch.setattr(experiments, "tutte_subset_oracle", lambda G: real(G) + BiPoly.x())
    rep = identity_suite([("K4", named_graph("complete_k", 4)), ("C5", cycle_graph(5))])
    failed = {(r.graph, r.identity) for r in rep.failures()}
    assert failed == {("K4", "tutte_oracle"), ("C5", "tutte_oracle")}
    assert not rep.ok


def test_identity_suite_reports_guard_and_continues():
    big = random_regular(18, 3, 1)  # 27 edges: past the subset oracle guard
    rep = identity_suite([("big", big), ("K3", named_graph("complete_k", 3))])
    statuses = {(r.graph, r.identity): r.status for r in rep.results}
    assert statuses[("big", "tutte_oracle")] == "error"
    assert all(statuses[("K3", i)] in ("pass", "n/a") for i in experiments.IDENTITIES)


def test_convergence_records_and_csv():
    recs = convergence_run(3, 2, 1, [8, 12], 5, 1)
    assert len(recs) == 10
    for r in recs:
        assert r.root > 0 and r.gap == pytest.approx(abs(r.root - r.target) / r.target)
        assert r.root == pytest.approx(float(Fraction(r.T_exact)) ** (1 / r.n))
    rows = list(csv.DictReader(io.StringIO(records_to_csv(recs + aggregate(recs)))))
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert len(rows) == 12 and rows[-1]["trial"] == "mean"
    assert '"T_exact"' in records_to_json(recs)


def test_convergence_deterministic_across_workers():
    a = records_to_csv(convergence_run(3, 1, 1, [8, 10], 4, 9, workers=1))
    b = records_to_csv(convergence_run(3, 1, 1, [8, 10], 4, 9, workers=2))
    assert a == b


def test_convergence_cycles():
    recs = convergence_run(2, 3, 1, [10, 20, 40], 1, 0, generator="cycle")
    for r in recs:
        assert Fraction(r.T_exact) == Fraction(3**r.n - 1, 2)
    assert recs[1].root == pytest.approx(2.897, abs=1e-3)
    gaps = [r.gap for r in recs]
    assert gaps == sorted(gaps, reverse=True)


def test_convergence_guards():
    with pytest.raises(GraphError, match="32"):
        convergence_run(3, 2, 1, [24], 1, 0)
    with pytest.raises(ValueError):
        convergence_run(3, 2, 1, [9], 1, 0)
    with pytest.raises(ValueError):
        convergence_run(3, Fraction(1, 2), 1, [8], 1, 0)
    with pytest.raises(ValueError):
        convergence_run(3, 2, 2, [8], 1, 0)


@pytest.mark.parametrize("seed", range(5))
def test_sandwiches(seed):
    G = random_regular(10, 3, seed)
    lo, mid, hi = sandwich_x_check(G, Fraction(101, 100))
    assert lo <= mid <= hi
    for y in (0, Fraction(1, 3), 1):
        a, b, c = sandwich_y_check(G, 2, y)
        assert a <= b <= c


def test_y_runs_share_graphs():
    r0 = convergence_run(3, 2, 0, [8], 3, 4)
    r1 = convergence_run(3, 2, 1, [8], 3, 4)
    assert [r.seed for r in r0] == [r.seed for r in r1]
    assert all(a.root <= b.root for a, b in zip(r0, r1))
    assert all(math.isclose(a.target, b.target) for a, b in zip(r0, r1))
