"""Dominance filtering, payoff table, grid construction, front generation."""

from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cropboard.model import ObjectiveSpec, ObjectiveTriple, build_model, evaluate_plan, extract_plan
from cropboard.pareto import (
    EpsilonGrid,
    ParetoError,
    PayoffTable,
    dominates,
    epsilon_grid,
    filter_dominated,
    front_from_document,
    front_to_document,
    generate_front,
    lexicographic_optimize,
    payoff_table,
)
from cropboard.solver import brute_force_milp, solve_milp

from conftest import conflict_scenario, two_farmer_scenario

# frozen three-objective reference front, shared with the ranking tests
REFERENCE_FRONT = [
    ("A", ObjectiveTriple(148334625.0, 5316020.0, 207317999.0)),
    ("B", ObjectiveTriple(148302280.0, 5315998.0, 201749612.0)),
    ("C", ObjectiveTriple(148003481.0, 6417520.0, 195841392.0)),
    ("D", ObjectiveTriple(146849751.0, 11193326.0, 189933239.0)),
    ("E", ObjectiveTriple(145326260.0, 14017213.0, 184025050.0)),
    ("F", ObjectiveTriple(142518888.0, 11213768.0, 178116854.0)),
    ("G", ObjectiveTriple(136863913.0, 8410330.0, 172208666.0)),
    ("H", ObjectiveTriple(146572577.0, 0.0, 204769167.0)),
    ("I", ObjectiveTriple(135083010.0, 0.0, 182724221.0)),
    ("J", ObjectiveTriple(129129328.0, 25230996.0, 154484078.0)),
]


def brute_filter(points):
    kept = []
    seen = set()
    for label, t in points:
        key = (t.profit, t.waste, t.unmet)
        if key in seen:
            continue
        seen.add(key)
        kept.append((label, t))
    result = []
    for label, t in kept:
        beaten = False
        for _, other in kept:
            better_somewhere = (
                other.profit > t.profit or other.waste < t.waste or other.unmet < t.unmet
            )
            never_worse = (
                other.profit >= t.profit
                and other.waste <= t.waste
                and other.unmet <= t.unmet
            )
            if better_somewhere and never_worse:
                beaten = True
                break
        if not beaten:
            result.append((label, t))
    return result


# ---------------------------------------------------------------------------
# dominance


def test_equal_triples_do_not_dominate():
    t = ObjectiveTriple(10.0, 5.0, 3.0)
    assert not dominates(t, ObjectiveTriple(10.0, 5.0, 3.0))


def test_reference_a_b_mutually_nondominated():
    a = REFERENCE_FRONT[0][1]
    b = REFERENCE_FRONT[1][1]
    assert not dominates(a, b)
    assert not dominates(b, a)


def test_strictly_worse_point_is_dominated():
    a = REFERENCE_FRONT[0][1]
    worse = ObjectiveTriple(148334624.0, 5316021.0, 207318000.0)
    assert dominates(a, worse)
    assert not dominates(worse, a)


def test_single_coordinate_improvement_dominates():
    t = ObjectiveTriple(10.0, 5.0, 3.0)
    assert dominates(ObjectiveTriple(11.0, 5.0, 3.0), t)
    assert dominates(ObjectiveTriple(10.0, 4.0, 3.0), t)
    assert dominates(ObjectiveTriple(10.0, 5.0, 2.0), t)


@given(
    st.tuples(
        st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)
    ),
    st.tuples(
        st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)
    ),
)
def test_dominance_irreflexive_asymmetric(pa, pb):
    a = ObjectiveTriple(*map(float, pa))
    b = ObjectiveTriple(*map(float, pb))
    assert not dominates(a, a)
    if dominates(a, b):
        assert not dominates(b, a)


# ---------------------------------------------------------------------------
# filtering


def test_filter_empty():
    assert filter_dominated([]) == []


def test_filter_retains_reference_front():
    assert filter_dominated(REFERENCE_FRONT) == REFERENCE_FRONT


def test_filter_drops_point_dominated_by_reference_a():
    extra = ("X", ObjectiveTriple(148334624.0, 5316021.0, 207318000.0))
    result = filter_dominated(REFERENCE_FRONT + [extra])
    assert result == REFERENCE_FRONT


def test_filter_collapses_duplicates_keeping_first_label():
    t = ObjectiveTriple(1.0, 2.0, 3.0)
    pts = [("first", t), ("second", ObjectiveTriple(1.0, 2.0, 3.0))]
    assert filter_dominated(pts) == [("first", t)]


def test_filter_preserves_input_order():
    pts = [
        ("x", ObjectiveTriple(1.0, 9.0, 0.0)),
        ("y", ObjectiveTriple(2.0, 10.0, 0.0)),
        ("z", ObjectiveTriple(3.0, 11.0, 0.0)),
    ]
    assert [label for label, _ in filter_dominated(pts)] == ["x", "y", "z"]


def test_filter_matches_brute_force_on_random_sets():
    rng = random.Random(20260822)
    for _ in range(500):
        n = rng.randint(0, 50)
        pts = [
            (
                f"p{i}",
                ObjectiveTriple(
                    float(rng.randint(0, 12)),
                    float(rng.randint(0, 12)),
                    float(rng.randint(0, 12)),
                ),
            )
            for i in range(n)
        ]
        assert filter_dominated(pts) == brute_filter(pts)


@given(
    st.lists(
        st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)),
        max_size=25,
    )
)
@settings(max_examples=60)
def test_filter_output_pairwise_nondominated(raw):
    pts = [(f"p{i}", ObjectiveTriple(*map(float, t))) for i, t in enumerate(raw)]
    kept = filter_dominated(pts)
    for _, a in kept:
        for _, b in kept:
            if a is not b:
                assert not dominates(a, b)


# ---------------------------------------------------------------------------
# lexicographic stages and the payoff table


def test_lexicographic_first_stage_matches_single_objective():
    s = conflict_scenario()
    program = build_model(s, ObjectiveSpec(optimized="profit"))
    direct = solve_milp(program)
    assert direct.status == "optimal"
    _, triple = lexicographic_optimize(s, ("profit", "waste", "unmet"))
    assert triple.profit == pytest.approx(direct.objective_value, rel=1e-6)


def test_lexicographic_six_orders_mutually_nondominated():
    s = conflict_scenario()
    from itertools import permutations

    triples = []
    for order in permutations(("profit", "waste", "unmet")):
        _, triple = lexicographic_optimize(s, order)
        triples.append(triple)
    for a in triples:
        for b in triples:
            if (a.profit, a.waste, a.unmet) != (b.profit, b.waste, b.unmet):
                assert not dominates(b, a)


def test_lexicographic_rejects_bad_order():
    s = conflict_scenario()
    with pytest.raises(ParetoError):
        lexicographic_optimize(s, ("profit", "waste", "waste"))


def test_payoff_diagonal_matches_single_objective_optima():
    s = conflict_scenario()
    table = payoff_table(s)
    for i, objective in enumerate(("profit", "waste", "unmet")):
        program = build_model(s, ObjectiveSpec(optimized=objective))
        direct = solve_milp(program)
        entry = table.entries[i].as_dict()[objective]
        assert entry == pytest.approx(direct.objective_value, rel=1e-6, abs=1e-6)


def test_payoff_best_worst_ordering():
    table = payoff_table(conflict_scenario())
    assert table.best.profit >= table.worst.profit
    assert table.best.waste <= table.worst.waste
    assert table.best.unmet <= table.worst.unmet


def test_payoff_entries_match_independent_runs():
    s = conflict_scenario()
    table = payoff_table(s)
    orders = [
        ("profit", "waste", "unmet"),
        ("waste", "profit", "unmet"),
        ("unmet", "profit", "waste"),
    ]
    for row, order in zip(table.entries, orders):
        _, triple = lexicographic_optimize(s, order)
        assert row.profit == pytest.approx(triple.profit, abs=1e-6)
        assert row.waste == pytest.approx(triple.waste, abs=1e-6)
        assert row.unmet == pytest.approx(triple.unmet, abs=1e-6)


def test_conflict_scenario_has_conflicting_objectives():
    table = payoff_table(conflict_scenario())
    # zero waste and zero unmet are individually achievable but not jointly
    assert table.best.waste == pytest.approx(0.0, abs=1e-6)
    assert table.best.unmet == pytest.approx(0.0, abs=1e-6)
    assert table.worst.waste > 1.0
    assert table.worst.unmet > 1.0


# ---------------------------------------------------------------------------
# epsilon grid


def _table(best, worst):
    dummy = ObjectiveTriple(0.0, 0.0, 0.0)
    return PayoffTable(entries=(dummy, dummy, dummy), best=best, worst=worst)


def test_grid_waste_nine_to_zero():
    table = _table(
        best=ObjectiveTriple(100.0, 0.0, 0.0),
        worst=ObjectiveTriple(50.0, 9.0, 0.0),
    )
    grid = epsilon_grid(table, 10)
    assert grid.waste_values == tuple(float(v) for v in range(9, -1, -1))


def test_grid_g1_sits_at_worst():
    table = _table(
        best=ObjectiveTriple(100.0, 0.0, 1.0),
        worst=ObjectiveTriple(50.0, 9.0, 7.0),
    )
    grid = epsilon_grid(table, 1)
    assert grid.waste_values == (9.0,)
    assert grid.unmet_values == (7.0,)
    assert grid.vectors() == [(9.0, 7.0)]


def test_grid_diagonal_counts():
    table = _table(
        best=ObjectiveTriple(1.0, 0.0, 0.0), worst=ObjectiveTriple(0.0, 10.0, 20.0)
    )
    assert len(epsilon_grid(table, 10, "diagonal").vectors()) == 10
    assert len(epsilon_grid(table, 4, "full").vectors()) == 16


def test_grid_degenerate_range_repeats_value():
    table = _table(
        best=ObjectiveTriple(1.0, 5.0, 0.0), worst=ObjectiveTriple(0.0, 5.0, 3.0)
    )
    grid = epsilon_grid(table, 4)
    assert grid.waste_values == (5.0, 5.0, 5.0, 5.0)


def test_grid_bounds_monotone_worst_to_best():
    table = _table(
        best=ObjectiveTriple(9.0, 1.0, 2.0), worst=ObjectiveTriple(3.0, 13.0, 17.0)
    )
    for values, worst, best in (
        (epsilon_grid(table, 7).waste_values, 13.0, 1.0),
        (epsilon_grid(table, 7).unmet_values, 17.0, 2.0),
    ):
        assert values[0] == worst
        assert values[-1] == best
        assert all(a >= b for a, b in zip(values, values[1:]))


def test_grid_rejects_bad_arguments():
    table = _table(
        best=ObjectiveTriple(1.0, 0.0, 0.0), worst=ObjectiveTriple(0.0, 1.0, 1.0)
    )
    with pytest.raises(ParetoError):
        epsilon_grid(table, 0)
    with pytest.raises(ParetoError):
        epsilon_grid(table, 5, "spiral")


# ---------------------------------------------------------------------------
# front generation


def test_front_g1_single_profit_optimal_solution():
    s = conflict_scenario()
    front, report = generate_front(s, grid_size=1)
    assert len(front) == 1
    label, plan, triple = front.solutions[0]
    assert label == "A"
    program = build_model(s, ObjectiveSpec(optimized="profit"))
    direct = solve_milp(program)
    assert triple.profit == pytest.approx(direct.objective_value, rel=1e-6)
    assert report.solve_count == 19  # 18 payoff stages + 1 grid cell
    assert not report.skipped_cells


def test_front_full_grid_matches_brute_force_per_cell():
    s = two_farmer_scenario()
    g = 4
    front, report = generate_front(s, grid_size=g, mode="full")

    table = payoff_table(s)
    grid = epsilon_grid(table, g, "full")
    cell_triples = []
    for eps_waste, eps_unmet in grid.vectors():
        spec = ObjectiveSpec(optimized="profit", max_waste=eps_waste, max_unmet=eps_unmet)
        program = build_model(s, spec)
        oracle = brute_force_milp(program)
        if oracle.status != "optimal":
            continue
        plan = extract_plan(s, oracle.assignment)
        cell_triples.append((oracle.objective_value, evaluate_plan(s, plan)))

    # every front triple must equal a per-cell brute-force optimum
    for _, _, triple in front.solutions:
        assert any(
            triple.profit == pytest.approx(value, rel=1e-6, abs=1e-6)
            for value, _ in cell_triples
        )
    # and the best profit over all cells must be the front's first entry
    best_profit = max(value for value, _ in cell_triples)
    assert front.solutions[0][2].profit == pytest.approx(best_profit, rel=1e-6)


def test_front_skips_jointly_infeasible_cells():
    s = conflict_scenario()
    front, report = generate_front(s, grid_size=4, mode="full")
    # the (zero waste, zero unmet) corner cannot be satisfied
    assert report.skipped_cells
    assert len(front) >= 2
    assert report.solve_count == 18 + 16


def test_front_is_filter_idempotent():
    front, _ = generate_front(conflict_scenario(), grid_size=4)
    assert filter_dominated(front.triples()) == front.triples()


def test_front_sorted_by_decreasing_profit_with_alphabet_labels():
    front, _ = generate_front(conflict_scenario(), grid_size=5, mode="full")
    labels = front.labels()
    assert labels == [chr(ord("A") + i) for i in range(len(labels))]
    profits = [triple.profit for _, _, triple in front.solutions]
    assert profits == sorted(profits, reverse=True)


def test_front_diagonal_profit_monotone_in_bound_relaxation():
    s = conflict_scenario()
    table = payoff_table(s)
    grid = epsilon_grid(table, 5, "diagonal")
    profits = []
    for eps_waste, eps_unmet in grid.vectors():
        spec = ObjectiveSpec(optimized="profit", max_waste=eps_waste, max_unmet=eps_unmet)
        outcome = solve_milp(build_model(s, spec))
        if outcome.status == "optimal":
            profits.append(outcome.objective_value)
        else:
            profits.append(None)
    seen = [p for p in profits if p is not None]
    # the grid runs worst -> best, so bounds only tighten: profit cannot rise
    assert all(a >= b - 1e-6 for a, b in zip(seen, seen[1:]))


def test_front_triples_within_payoff_bounds():
    s = conflict_scenario()
    table = payoff_table(s)
    front, _ = generate_front(s, grid_size=4, mode="full")
    tol_p = 1e-6 * max(1.0, abs(table.best.profit))
    tol_w = 1e-6 * max(1.0, abs(table.worst.waste))
    tol_u = 1e-6 * max(1.0, abs(table.worst.unmet))
    for _, _, triple in front.solutions:
        assert triple.profit <= table.best.profit + tol_p
        assert triple.waste >= table.best.waste - tol_w
        assert triple.unmet >= table.best.unmet - tol_u


def test_front_plans_pass_audit():
    from cropboard.model import check_plan

    s = conflict_scenario()
    front, _ = generate_front(s, grid_size=3)
    assert len(front) >= 1
    for _, plan, triple in front.solutions:
        assert check_plan(s, plan) == []
        evaluated = evaluate_plan(s, plan)
        assert evaluated.profit == pytest.approx(triple.profit, abs=1e-9)


def test_front_document_roundtrip():
    s = conflict_scenario()
    front, _ = generate_front(s, grid_size=3)
    doc = front_to_document(s, front)
    assert doc["schema_version"] == 1
    assert doc["kind"] == "pareto-front"
    text = json.dumps(doc, sort_keys=True)
    restored = front_from_document(s, json.loads(text))
    assert restored.labels() == front.labels()
    for (_, plan_a, triple_a), (_, plan_b, triple_b) in zip(
        front.solutions, restored.solutions
    ):
        assert triple_a == triple_b
        assert plan_a == plan_b


def test_front_document_rejects_other_kinds():
    s = conflict_scenario()
    with pytest.raises(ParetoError):
        front_from_document(s, {"schema_version": 1, "kind": "weather-report"})
