"""Model translation and dual-route plan audits."""

from __future__ import annotations

import numpy as np
import pytest

from conftest import random_scenario
from cropboard.model import (
    ModelError,
    ObjectiveSpec,
    SolutionPlan,
    build_model,
    check_plan,
    evaluate_plan,
    extract_plan,
    plan_from_document,
    plan_summary_by_farmer,
    plan_to_document,
)
from cropboard.scenario import (
    Farmer,
    Market,
    PlantingPeriod,
    Scenario,
    Variety,
    demo_scenario,
)
from cropboard.solver import solve_lp, solve_milp


def tiny_scenario(n_farmers: int = 1) -> Scenario:
    """n farmers, one variety, one period, one market; hand-sized numbers."""
    farmers = [
        Farmer(f"f{k}", area=4.0 + k, labor_capacity=(200.0,) * 12) for k in range(n_farmers)
    ]
    return Scenario(
        farmers=farmers,
        varieties=[Variety("v", harvest_labor=0.1, planting_cost=10.0)],
        periods=[PlantingPeriod("p", 1, (3, 4), (50.0, 40.0), (2.0, 1.0, 1.0, 1.0))],
        markets=[Market("m")],
        demand={("v", "m", 3): 120.0, ("v", "m", 4): 80.0},
        price={("v", "m", 3): 2.0, ("v", "m", 4): 2.5},
        transport_cost={(f.id, "m"): 0.1 for f in farmers},
        min_plot=0.5,
    )


def test_demo_has_45_binaries():
    prog = build_model(demo_scenario(), ObjectiveSpec("profit"))
    assert len(prog.binary_ids()) == 5 * 3 * 3


def test_policy_row_counts():
    demo = demo_scenario()
    prog = build_model(demo, ObjectiveSpec("profit"))
    a_rows = [r for r in prog.rows if r.name.startswith("policyA(")]
    b_rows = [r for r in prog.rows if r.name.startswith("policyB(")]
    assert len(a_rows) == len(demo.varieties) * len(demo.periods)
    assert len(b_rows) == len(demo.farmers) * len(demo.periods)
    for row in a_rows + b_rows:
        assert row.sense == ">=" and row.rhs == 1.0


def test_waste_bound_adds_single_row():
    demo = demo_scenario()
    base = build_model(demo, ObjectiveSpec("profit"))
    bounded = build_model(demo, ObjectiveSpec("profit", max_waste=0.0))
    assert len(bounded.rows) == len(base.rows) + 1
    extra = bounded.rows[-1]
    assert extra.name == "bound_waste"
    assert extra.sense == "<=" and extra.rhs == 0.0
    assert all(coef == 1.0 for coef in extra.coeffs.values())


def test_build_model_deterministic():
    demo = demo_scenario()
    a = build_model(demo, ObjectiveSpec("profit"))
    b = build_model(demo, ObjectiveSpec("profit"))
    assert [c.id for c in a.columns] == [c.id for c in b.columns]
    assert [(r.coeffs, r.sense, r.rhs) for r in a.rows] == [
        (r.coeffs, r.sense, r.rhs) for r in b.rows
    ]
    assert a.objective == b.objective


def test_objective_spec_guards():
    with pytest.raises(ModelError):
        ObjectiveSpec("yield").validate()
    with pytest.raises(ModelError):
        ObjectiveSpec("profit", min_profit=5.0).validate()
    with pytest.raises(ModelError):
        ObjectiveSpec("waste", max_waste=1.0).validate()
    ObjectiveSpec("profit", max_waste=1.0, max_unmet=2.0).validate()


def test_invalid_scenario_rejected():
    s = tiny_scenario()
    s.min_plot = 100.0
    with pytest.raises(ModelError) as err:
        build_model(s, ObjectiveSpec("profit"))
    assert "MIN_PLOT_EXCEEDS_FARM" in str(err.value)


def test_forced_single_binary_relaxation_integral():
    s = tiny_scenario(1)
    out = solve_lp(build_model(s, ObjectiveSpec("profit")))
    assert out.status == "optimal"
    assert out.assignment["b(0,0,0)"] == pytest.approx(1.0, abs=1e-7)


def test_all_zero_plan_violates_policies():
    demo = demo_scenario()
    report = check_plan(demo, SolutionPlan())
    families = {v.family for v in report}
    assert "policyA" in families
    assert "policyB" in families


def test_all_zero_plan_objectives():
    demo = demo_scenario()
    triple = evaluate_plan(demo, SolutionPlan())
    assert triple.profit == 0.0
    assert triple.waste == 0.0
    assert triple.unmet == sum(demo.demand.values())


def test_single_sale_profit():
    s = tiny_scenario()
    plan = SolutionPlan(sold={("v", "m", 3): 10.0})
    triple = evaluate_plan(s, plan)
    assert triple.profit == pytest.approx(20.0)
    assert triple.unmet == pytest.approx(sum(s.demand.values()) - 10.0)


def test_solver_plan_passes_both_audits():
    s = tiny_scenario(2)
    prog = build_model(s, ObjectiveSpec("profit"))
    out = solve_milp(prog)
    assert out.status == "optimal"
    plan = extract_plan(s, out.assignment)
    assert check_plan(s, plan) == []
    triple = evaluate_plan(s, plan)
    scale = max(1.0, abs(out.objective_value))
    assert abs(triple.profit - out.objective_value) <= 1e-6 * scale


def test_perturbed_harvest_breaks_shipment_balance():
    s = tiny_scenario(1)
    out = solve_milp(build_model(s, ObjectiveSpec("profit")))
    plan = extract_plan(s, out.assignment)
    key = ("f0", "v", "p", 3)
    plan.harvested[key] = plan.harvested.get(key, 0.0) + 1.0
    report = check_plan(s, plan)
    shipment = [v for v in report if v.family == "shipment"]
    assert shipment and shipment[0].residual == pytest.approx(1.0, abs=1e-6)


def test_unknown_plan_key_is_dimension_error():
    s = tiny_scenario(1)
    plan = SolutionPlan(planted_area={("ghost", "v", "p"): 1.0})
    with pytest.raises(ModelError):
        check_plan(s, plan)
    plan = SolutionPlan(harvested={("f0", "v", "p", 9): 1.0})  # month outside window
    with pytest.raises(ModelError):
        evaluate_plan(s, plan)


def test_plan_document_round_trip():
    s = tiny_scenario(2)
    out = solve_milp(build_model(s, ObjectiveSpec("profit")))
    plan = extract_plan(s, out.assignment)
    doc = plan_to_document(s, plan)
    assert doc["schema_version"] == 1
    back = plan_from_document(s, doc)
    assert back == plan
    # documents are JSON-stable
    import json

    assert json.loads(json.dumps(doc)) == doc


def test_plan_summary_by_farmer():
    s = tiny_scenario(2)
    out = solve_milp(build_model(s, ObjectiveSpec("profit")))
    plan = extract_plan(s, out.assignment)
    summary = plan_summary_by_farmer(s, plan)
    assert set(summary) == {"f0", "f1"}
    for farmer in s.farmers:
        assert summary[farmer.id]["v"] == pytest.approx(
            plan.planted_area[(farmer.id, "v", "p")]
        )


def test_objective_senses_and_bounds_interact():
    s = tiny_scenario(1)
    profit_out = solve_milp(build_model(s, ObjectiveSpec("profit")))
    waste_out = solve_milp(build_model(s, ObjectiveSpec("waste")))
    unmet_out = solve_milp(build_model(s, ObjectiveSpec("unmet")))
    assert profit_out.status == waste_out.status == unmet_out.status == "optimal"
    # bounding waste at its optimum still leaves a feasible profit problem
    bounded = solve_milp(
        build_model(s, ObjectiveSpec("profit", max_waste=waste_out.objective_value + 1e-6))
    )
    assert bounded.status == "optimal"
    assert bounded.objective_value <= profit_out.objective_value + 1e-6
    plan = extract_plan(s, bounded.assignment)
    triple = evaluate_plan(s, plan)
    assert triple.waste <= waste_out.objective_value + 1e-5


def test_model_integrity_many_random_scenarios():
    rng = np.random.default_rng(314159)
    checked = 0
    for _ in range(24):
        s = random_scenario(rng)
        for objective in ("profit", "waste"):
            out = solve_milp(build_model(s, ObjectiveSpec(objective)))
            assert out.status == "optimal", (s, objective, out.status)
            plan = extract_plan(s, out.assignment)
            assert check_plan(s, plan) == [], (s, objective)
            triple = evaluate_plan(s, plan)
            reported = {
                "profit": triple.profit,
                "waste": triple.waste,
                "unmet": triple.unmet,
            }[objective]
            scale = max(1.0, abs(out.objective_value))
            assert abs(reported - out.objective_value) <= 1e-6 * scale
        checked += 1
    assert checked >= 20
