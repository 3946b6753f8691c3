"""Shared test helpers: feasibility checks, LP oracles, random scenarios."""

from __future__ import annotations

import itertools
import math

import numpy as np

from cropboard.scenario import Farmer, Market, PlantingPeriod, Scenario, Variety
from cropboard.solver import MixedProgram


def random_scenario(rng, max_farmers: int = 3) -> Scenario:
    """A small random valid scenario; generous labor keeps it feasible."""
    n_f = int(rng.integers(1, max_farmers + 1))
    n_v = int(rng.integers(1, 3))
    n_p = int(rng.integers(1, 3))
    n_m = int(rng.integers(1, 3))

    farmers = [
        Farmer(
            f"f{k}",
            area=float(rng.integers(3, 21)),
            labor_capacity=tuple(float(rng.integers(800, 2001)) for _ in range(12)),
        )
        for k in range(n_f)
    ]
    varieties = [
        Variety(
            f"v{k}",
            harvest_labor=round(float(rng.uniform(0, 0.05)), 4),
            planting_cost=float(rng.integers(0, 50)),
        )
        for k in range(n_v)
    ]
    periods = []
    for k in range(n_p):
        plant = int(rng.integers(1, 7))
        start = plant + int(rng.integers(1, 4))
        length = int(rng.integers(1, 4))
        window = tuple(range(start, min(start + length, 13)))
        periods.append(
            PlantingPeriod(
                f"p{k}",
                planting_month=plant,
                harvest_window=window,
                yields=tuple(float(rng.integers(0, 101)) for _ in window),
                care_labor=tuple(
                    float(rng.integers(0, 4)) for _ in range(max(window) - plant + 1)
                ),
            )
        )
    markets = [Market(f"m{k}") for k in range(n_m)]

    demand = {}
    price = {}
    for v in varieties:
        for m in markets:
            for t in range(1, 13):
                if rng.random() < 0.3:
                    demand[(v.id, m.id, t)] = float(rng.integers(0, 151))
                if rng.random() < 0.5:
                    price[(v.id, m.id, t)] = round(float(rng.uniform(0, 5)), 2)
    transport = {
        (f.id, m.id): round(float(rng.uniform(0, 0.5)), 2)
        for f in farmers
        for m in markets
    }
    return Scenario(
        farmers=farmers,
        varieties=varieties,
        periods=periods,
        markets=markets,
        demand=demand,
        price=price,
        transport_cost=transport,
        min_plot=round(float(rng.uniform(0, 0.8)), 2),
        labor_cost_per_hour=float(rng.choice([0.0, 0.0, 1.5])),
    )


def conflict_scenario() -> Scenario:
    """One farmer, one variety; meeting demand forces waste and vice versa.

    Planting enough for the month-3 demand (x >= 1.2 ha) matures more in
    month 4 than the market absorbs, so zero unmet implies positive waste;
    the policy rows force at least the minimum plot, so zero waste implies
    positive unmet.
    """
    return Scenario(
        farmers=(Farmer(id="f1", area=2.0, labor_capacity=tuple([1000.0] * 12)),),
        varieties=(Variety(id="v", harvest_labor=0.01, planting_cost=10.0),),
        periods=(
            PlantingPeriod(
                id="p",
                planting_month=1,
                harvest_window=(3, 4),
                yields=(100.0, 50.0),
                care_labor=(1.0, 1.0, 1.0, 1.0),
            ),
        ),
        markets=(Market(id="m"),),
        demand={("v", "m", 3): 120.0, ("v", "m", 4): 30.0},
        price={("v", "m", 3): 3.0, ("v", "m", 4): 3.0},
        transport_cost={("f1", "m"): 0.1},
        min_plot=0.5,
        labor_cost_per_hour=0.0,
    )


def two_farmer_scenario() -> Scenario:
    base = conflict_scenario()
    return Scenario(
        farmers=base.farmers
        + (Farmer(id="f2", area=1.5, labor_capacity=tuple([1000.0] * 12)),),
        varieties=base.varieties,
        periods=base.periods,
        markets=base.markets,
        demand=dict(base.demand),
        price=dict(base.price),
        transport_cost=dict(base.transport_cost),
        min_plot=base.min_plot,
        labor_cost_per_hour=base.labor_cost_per_hour,
    )


def objective_of(program: MixedProgram, assignment: dict[str, float]) -> float:
    return sum(coef * assignment[key] for key, coef in program.objective.items())


def assert_assignment_feasible(program: MixedProgram, assignment, tol=1e-6):
    """Check bounds, row senses, and binary integrality of a solution."""
    for col in program.columns:
        value = assignment[col.id]
        span = 1.0 + max(abs(col.lower) if math.isfinite(col.lower) else 0.0,
                         abs(col.upper) if math.isfinite(col.upper) else 0.0)
        assert value >= col.lower - tol * span, (col.id, value, col.lower)
        assert value <= col.upper + tol * span, (col.id, value, col.upper)
        if col.kind == "binary":
            assert abs(value - round(value)) <= 1e-7, (col.id, value)
    for i, row in enumerate(program.rows):
        lhs = sum(coef * assignment[key] for key, coef in row.coeffs.items())
        slack_tol = tol * (1.0 + abs(row.rhs))
        if row.sense == "<=":
            assert lhs <= row.rhs + slack_tol, (i, lhs, row.rhs)
        elif row.sense == ">=":
            assert lhs >= row.rhs - slack_tol, (i, lhs, row.rhs)
        else:
            assert abs(lhs - row.rhs) <= slack_tol, (i, lhs, row.rhs)


def oracle_boxed_lp(program: MixedProgram):
    """Vertex-enumeration LP oracle for programs whose columns all have
    finite bounds (so any nonempty feasible set is a polytope).

    Returns ("optimal", value) or ("infeasible", None).  Binary columns are
    treated as their [0, 1] relaxation.
    """
    cols = program.columns
    n = len(cols)
    index = {c.id: j for j, c in enumerate(cols)}

    planes = []  # (normal, offset) pairs; vertex = intersection of n of them
    for row in program.rows:
        normal = np.zeros(n)
        for key, coef in row.coeffs.items():
            normal[index[key]] += coef
        planes.append((normal, float(row.rhs)))
    for j, col in enumerate(cols):
        lo = max(col.lower, 0.0) if col.kind == "binary" else col.lower
        up = min(col.upper, 1.0) if col.kind == "binary" else col.upper
        assert math.isfinite(lo) and math.isfinite(up), "oracle needs boxed columns"
        e = np.zeros(n)
        e[j] = 1.0
        planes.append((e, lo))
        planes.append((e, up))

    def feasible(x) -> bool:
        for j, col in enumerate(cols):
            lo = max(col.lower, 0.0) if col.kind == "binary" else col.lower
            up = min(col.upper, 1.0) if col.kind == "binary" else col.upper
            if x[j] < lo - 1e-7 or x[j] > up + 1e-7:
                return False
        for row in program.rows:
            lhs = sum(coef * x[index[key]] for key, coef in row.coeffs.items())
            margin = 1e-7 * (1.0 + abs(row.rhs))
            if row.sense == "<=" and lhs > row.rhs + margin:
                return False
            if row.sense == ">=" and lhs < row.rhs - margin:
                return False
            if row.sense == "=" and abs(lhs - row.rhs) > margin:
                return False
        return True

    c = np.zeros(n)
    for key, coef in program.objective.items():
        c[index[key]] += coef
    better = max if program.sense == "maximize" else min

    best = None
    for combo in itertools.combinations(range(len(planes)), n):
        M = np.array([planes[k][0] for k in combo])
        rhs = np.array([planes[k][1] for k in combo])
        try:
            x = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            continue
        if not feasible(x):
            continue
        value = float(c @ x)
        best = value if best is None else better(best, value)
    if best is None:
        return "infeasible", None
    return "optimal", best
