"""Non-dominated plan generation via the epsilon-constraint method.

The pipeline: run all six lexicographic objective orderings to build a
payoff table, span each constrained objective's worst-to-best range with
evenly spaced bounds, solve one profit-maximization per grid point under
those bounds, then discard dominated and duplicate results.  The survivors
are labeled A, B, C, ... in decreasing-profit order.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .model import (
    OBJECTIVES,
    ObjectiveSpec,
    ObjectiveTriple,
    SolutionPlan,
    build_model,
    evaluate_plan,
    extract_plan,
    plan_to_document,
)
from .scenario import Scenario
from .solver import solve_milp


class ParetoError(Exception):
    """Raised when front generation cannot proceed (e.g. no feasible plan)."""


@dataclass(frozen=True)
class PayoffTable:
    """Objective ranges observed across all six lexicographic orderings.

    ``entries[i]`` is the triple obtained by the ordering that starts with
    objective i (profit, waste, unmet) and continues in that canonical
    order.  ``best`` collects each objective's optimum over all runs;
    ``worst`` each objective's worst value over the non-dominated runs.
    """

    entries: tuple[ObjectiveTriple, ObjectiveTriple, ObjectiveTriple]
    best: ObjectiveTriple
    worst: ObjectiveTriple


@dataclass(frozen=True)
class EpsilonGrid:
    """Bound values for the constrained objectives, worst to best."""

    grid_size: int
    mode: str  # "diagonal" | "full"
    waste_values: tuple[float, ...]
    unmet_values: tuple[float, ...]

    def vectors(self) -> list[tuple[float, float]]:
        """(waste bound, unmet bound) pairs, one per candidate solve."""
        if self.mode == "diagonal":
            return list(zip(self.waste_values, self.unmet_values))
        return [(w, u) for w in self.waste_values for u in self.unmet_values]


@dataclass(frozen=True)
class ParetoSet:
    """Labeled non-dominated solutions, in decreasing-profit order."""

    solutions: tuple[tuple[str, SolutionPlan, ObjectiveTriple], ...]

    def labels(self) -> list[str]:
        return [label for label, _, _ in self.solutions]

    def triples(self) -> list[tuple[str, ObjectiveTriple]]:
        return [(label, triple) for label, _, triple in self.solutions]

    def __len__(self) -> int:
        return len(self.solutions)


@dataclass
class FrontReport:
    """What happened while generating a front."""

    solve_count: int = 0
    skipped_cells: list[tuple[float, float]] = field(default_factory=list)


def dominates(a: ObjectiveTriple, b: ObjectiveTriple) -> bool:
    """True iff a is at least as good everywhere and strictly better once.

    Profit is better larger; waste and unmet are better smaller.
    """
    at_least = a.profit >= b.profit and a.waste <= b.waste and a.unmet <= b.unmet
    strictly = a.profit > b.profit or a.waste < b.waste or a.unmet < b.unmet
    return at_least and strictly


def filter_dominated(
    points: list[tuple[str, ObjectiveTriple]],
) -> list[tuple[str, ObjectiveTriple]]:
    """Drop dominated entries and collapse exact-duplicate triples.

    The first label of a duplicate group survives; input order is
    preserved otherwise.
    """
    unique: list[tuple[str, ObjectiveTriple]] = []
    seen: set[tuple[float, float, float]] = set()
    for label, triple in points:
        key = (triple.profit, triple.waste, triple.unmet)
        if key in seen:
            continue
        seen.add(key)
        unique.append((label, triple))
    return [
        (label, triple)
        for label, triple in unique
        if not any(dominates(other, triple) for _, other in unique)
    ]


def _bound_after(optimized: str, value: float, bounds: dict[str, float]) -> None:
    # pin an achieved optimum for the later stages, with relative slack so
    # floating-point noise cannot make the next stage infeasible
    slack = 1e-9 * max(1.0, abs(value))
    if optimized == "profit":
        bounds["min_profit"] = value - slack
    elif optimized == "waste":
        bounds["max_waste"] = value + slack
    else:
        bounds["max_unmet"] = value + slack


def lexicographic_optimize(
    s: Scenario,
    order: tuple[str, str, str],
    *,
    node_limit: int = 1_000_000,
) -> tuple[SolutionPlan, ObjectiveTriple]:
    """Optimize the objectives one at a time in the given order.

    Each stage fixes the previous stages' optima as bounds (relative slack
    1e-9) and optimizes the next objective.  Returns the final plan and
    its independently evaluated objective values.
    """
    if sorted(order) != sorted(OBJECTIVES):
        raise ParetoError(f"order must be a permutation of {OBJECTIVES}, got {order!r}")

    bounds: dict[str, float] = {}
    plan: SolutionPlan | None = None
    for objective in order:
        spec = ObjectiveSpec(optimized=objective, **bounds)
        program = build_model(s, spec)
        outcome = solve_milp(program, node_limit=node_limit)
        if outcome.status == "infeasible":
            raise ParetoError(
                f"no feasible plan while optimizing {objective} (stage bounds {bounds})"
            )
        if outcome.status == "unbounded":
            raise ParetoError(f"objective {objective} is unbounded for this scenario")
        plan = extract_plan(s, outcome.assignment)
        _bound_after(objective, outcome.objective_value, bounds)
    return plan, evaluate_plan(s, plan)


def payoff_table(s: Scenario, *, node_limit: int = 1_000_000) -> PayoffTable:
    """Solve all six lexicographic orderings and collect objective ranges."""
    results: dict[tuple[str, ...], ObjectiveTriple] = {}
    for order in permutations(OBJECTIVES):
        _, triple = lexicographic_optimize(s, order, node_limit=node_limit)
        results[order] = triple

    rows = []
    for first in OBJECTIVES:
        rest = tuple(o for o in OBJECTIVES if o != first)
        rows.append(results[(first, *rest)])

    triples = list(results.values())
    best = ObjectiveTriple(
        profit=max(t.profit for t in triples),
        waste=min(t.waste for t in triples),
        unmet=min(t.unmet for t in triples),
    )
    survivors = [
        t for _, t in filter_dominated([(str(i), t) for i, t in enumerate(triples)])
    ]
    worst = ObjectiveTriple(
        profit=min(t.profit for t in survivors),
        waste=max(t.waste for t in survivors),
        unmet=max(t.unmet for t in survivors),
    )
    return PayoffTable(entries=tuple(rows), best=best, worst=worst)


def epsilon_grid(table: PayoffTable, g: int, mode: str = "diagonal") -> EpsilonGrid:
    """Evenly spaced bounds from worst to best for each constrained objective."""
    if g < 1:
        raise ParetoError(f"grid size must be at least 1, got {g}")
    if mode not in ("diagonal", "full"):
        raise ParetoError(f"mode must be 'diagonal' or 'full', got {mode!r}")
    waste_values = _spaced(table.worst.waste, table.best.waste, g)
    unmet_values = _spaced(table.worst.unmet, table.best.unmet, g)
    return EpsilonGrid(
        grid_size=g, mode=mode, waste_values=waste_values, unmet_values=unmet_values
    )


def _spaced(worst: float, best: float, g: int) -> tuple[float, ...]:
    if g == 1:
        return (worst,)
    return tuple(float(v) for v in np.linspace(worst, best, g))


def _labels():
    size = 1
    while True:
        for combo in itertools.product(string.ascii_uppercase, repeat=size):
            yield "".join(combo)
        size += 1


def generate_front(
    s: Scenario,
    grid_size: int = 10,
    mode: str = "diagonal",
    *,
    node_limit: int = 1_000_000,
) -> tuple[ParetoSet, FrontReport]:
    """Build the non-dominated solution set for a scenario.

    Infeasible bound combinations are skipped and recorded in the report.
    """
    report = FrontReport()
    table = payoff_table(s, node_limit=node_limit)
    report.solve_count += len(OBJECTIVES) * len(list(permutations(OBJECTIVES)))
    grid = epsilon_grid(table, grid_size, mode)

    candidates: list[tuple[SolutionPlan, ObjectiveTriple]] = []
    for eps_waste, eps_unmet in grid.vectors():
        spec = ObjectiveSpec(
            optimized="profit", max_waste=eps_waste, max_unmet=eps_unmet
        )
        program = build_model(s, spec)
        outcome = solve_milp(program, node_limit=node_limit)
        report.solve_count += 1
        if outcome.status != "optimal":
            report.skipped_cells.append((eps_waste, eps_unmet))
            continue
        plan = extract_plan(s, outcome.assignment)
        candidates.append((plan, evaluate_plan(s, plan)))

    # collapse near-identical optima from adjacent grid points
    quantum = {
        "profit": 1e-6 * max(1.0, abs(table.best.profit), abs(table.worst.profit)),
        "waste": 1e-6 * max(1.0, abs(table.best.waste), abs(table.worst.waste)),
        "unmet": 1e-6 * max(1.0, abs(table.best.unmet), abs(table.worst.unmet)),
    }
    unique: list[tuple[SolutionPlan, ObjectiveTriple]] = []
    seen: set[tuple[int, int, int]] = set()
    for plan, triple in candidates:
        key = (
            round(triple.profit / quantum["profit"]),
            round(triple.waste / quantum["waste"]),
            round(triple.unmet / quantum["unmet"]),
        )
        if key in seen:
            continue
        seen.add(key)
        unique.append((plan, triple))

    kept = filter_dominated([(str(i), t) for i, (_, t) in enumerate(unique)])
    survivors = [unique[int(label)] for label, _ in kept]
    survivors.sort(key=lambda item: (-item[1].profit, item[1].waste, item[1].unmet))

    labeled = tuple(
        (label, plan, triple)
        for label, (plan, triple) in zip(_labels(), survivors)
    )
    return ParetoSet(solutions=labeled), report


def front_to_document(s: Scenario, front: ParetoSet) -> dict:
    """Export a front as one record per solution, with the full plan."""
    return {
        "schema_version": 1,
        "kind": "pareto-front",
        "solutions": [
            {
                "label": label,
                "objectives": triple.as_dict(),
                "plan": plan_to_document(s, plan),
            }
            for label, plan, triple in front.solutions
        ],
    }


def front_from_document(s: Scenario, doc: dict) -> ParetoSet:
    """Rebuild a front from its export document."""
    from .model import plan_from_document

    if doc.get("kind") != "pareto-front":
        raise ParetoError("document is not a front export")
    solutions = []
    for record in doc["solutions"]:
        triple = ObjectiveTriple(
            profit=float(record["objectives"]["profit"]),
            waste=float(record["objectives"]["waste"]),
            unmet=float(record["objectives"]["unmet"]),
        )
        plan = plan_from_document(s, record["plan"])
        solutions.append((str(record["label"]), plan, triple))
    return ParetoSet(solutions=tuple(solutions))
