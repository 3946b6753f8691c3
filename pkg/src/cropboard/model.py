"""Planning model: scenario to mixed program, and independent plan audits.

The translation (build_model) and the audits (check_plan, evaluate_plan)
are deliberately separate code paths over the raw scenario data.  A plan
coming out of the solver is trusted only after the audits agree with it, so
nothing here lets the checker peek at the generated program.

Decision variables, all indexed by scenario list positions:

* ``x(f,v,p)``  planted hectares, ``b(f,v,p)`` planting indicator
* ``h(f,v,p,t)`` harvested kg in month t of p's window
* ``q(f,v,m,t)`` kg shipped to market m
* ``wf(f,v,t)`` matured-but-unharvested kg at the farm
* ``wm(v,m,t)`` shipped-but-unsold kg at the market
* ``s(v,m,t)``  kg sold, ``u(v,m,t)`` unmet demand kg
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .scenario import Scenario, validate_scenario
from .solver import Column, MixedProgram, Row

OBJECTIVES = ("profit", "waste", "unmet")


class ModelError(Exception):
    """Raised for invalid scenarios, specs, or mismatched plan shapes."""


@dataclass(frozen=True)
class ObjectiveTriple:
    profit: float
    waste: float
    unmet: float

    def as_dict(self) -> dict[str, float]:
        return {"profit": self.profit, "waste": self.waste, "unmet": self.unmet}


@dataclass(frozen=True)
class ObjectiveSpec:
    optimized: str  # one of OBJECTIVES
    max_waste: float | None = None
    max_unmet: float | None = None
    min_profit: float | None = None

    def validate(self) -> None:
        if self.optimized not in OBJECTIVES:
            raise ModelError(f"unknown objective {self.optimized!r}")
        bounds = {
            "waste": self.max_waste,
            "unmet": self.max_unmet,
            "profit": self.min_profit,
        }
        if bounds[self.optimized] is not None:
            raise ModelError(f"bound given on the optimized objective {self.optimized!r}")


@dataclass
class SolutionPlan:
    planted_area: dict[tuple[str, str, str], float] = field(default_factory=dict)
    planting_flag: dict[tuple[str, str, str], bool] = field(default_factory=dict)
    harvested: dict[tuple[str, str, str, int], float] = field(default_factory=dict)
    shipped: dict[tuple[str, str, str, int], float] = field(default_factory=dict)
    farm_waste: dict[tuple[str, str, int], float] = field(default_factory=dict)
    market_waste: dict[tuple[str, str, int], float] = field(default_factory=dict)
    sold: dict[tuple[str, str, int], float] = field(default_factory=dict)
    unmet: dict[tuple[str, str, int], float] = field(default_factory=dict)


@dataclass(frozen=True)
class PlanViolation:
    family: str
    key: tuple
    residual: float


# ---------------------------------------------------------------------------
# program construction


class _Index:
    """Deterministic column-id scheme shared by build_model and extract_plan."""

    def __init__(self, s: Scenario):
        self.s = s
        self.farmers = [f.id for f in s.farmers]
        self.varieties = [v.id for v in s.varieties]
        self.periods = [p.id for p in s.periods]
        self.markets = [m.id for m in s.markets]
        self.harvest_union = s.harvest_months()

    def x(self, f: int, v: int, p: int) -> str:
        return f"x({f},{v},{p})"

    def b(self, f: int, v: int, p: int) -> str:
        return f"b({f},{v},{p})"

    def h(self, f: int, v: int, p: int, t: int) -> str:
        return f"h({f},{v},{p},{t})"

    def q(self, f: int, v: int, m: int, t: int) -> str:
        return f"q({f},{v},{m},{t})"

    def wf(self, f: int, v: int, t: int) -> str:
        return f"wf({f},{v},{t})"

    def wm(self, v: int, m: int, t: int) -> str:
        return f"wm({v},{m},{t})"

    def sold(self, v: int, m: int, t: int) -> str:
        return f"s({v},{m},{t})"

    def unmet(self, v: int, m: int, t: int) -> str:
        return f"u({v},{m},{t})"


def _labor_terms(s: Scenario, ix: _Index, f: int, t: int) -> dict[str, float]:
    """Hours used on farm f in month t, as column coefficients."""
    terms: dict[str, float] = {}
    for v in range(len(s.varieties)):
        for p, period in enumerate(s.periods):
            care = period.care_in(t)
            if care:
                terms[ix.x(f, v, p)] = terms.get(ix.x(f, v, p), 0.0) + care
            if t in period.harvest_window and s.varieties[v].harvest_labor:
                terms[ix.h(f, v, p, t)] = s.varieties[v].harvest_labor
    return terms


def _profit_terms(s: Scenario, ix: _Index) -> dict[str, float]:
    terms: dict[str, float] = {}
    for v, variety in enumerate(s.varieties):
        for m, market in enumerate(s.markets):
            for t in range(1, 13):
                price = s.price_for(variety.id, market.id, t)
                if price:
                    terms[ix.sold(v, m, t)] = price
    for f, farmer in enumerate(s.farmers):
        for v in range(len(s.varieties)):
            for m, market in enumerate(s.markets):
                cost = s.transport_for(farmer.id, market.id)
                if cost:
                    for t in ix.harvest_union:
                        terms[ix.q(f, v, m, t)] = -cost
    for f in range(len(s.farmers)):
        for v, variety in enumerate(s.varieties):
            for p in range(len(s.periods)):
                if variety.planting_cost:
                    terms[ix.x(f, v, p)] = terms.get(ix.x(f, v, p), 0.0) - variety.planting_cost
    if s.labor_cost_per_hour:
        for f in range(len(s.farmers)):
            for t in range(1, 13):
                for key, hours in _labor_terms(s, ix, f, t).items():
                    terms[key] = terms.get(key, 0.0) - s.labor_cost_per_hour * hours
    return {k: coef for k, coef in terms.items() if coef}


def _waste_terms(s: Scenario, ix: _Index) -> dict[str, float]:
    terms = {}
    for f in range(len(s.farmers)):
        for v in range(len(s.varieties)):
            for t in ix.harvest_union:
                terms[ix.wf(f, v, t)] = 1.0
    for v in range(len(s.varieties)):
        for m in range(len(s.markets)):
            for t in range(1, 13):
                terms[ix.wm(v, m, t)] = 1.0
    return terms


def _unmet_terms(s: Scenario, ix: _Index) -> dict[str, float]:
    return {
        ix.unmet(v, m, t): 1.0
        for v in range(len(s.varieties))
        for m in range(len(s.markets))
        for t in range(1, 13)
    }


def build_model(s: Scenario, spec: ObjectiveSpec) -> MixedProgram:
    """Translate a valid scenario and objective selection into a program."""
    violations = validate_scenario(s)
    if violations:
        summary = "; ".join(f"{v.code}: {v.message}" for v in violations)
        raise ModelError(f"invalid scenario: {summary}")
    spec.validate()

    ix = _Index(s)
    nf, nv, np_, nm = len(s.farmers), len(s.varieties), len(s.periods), len(s.markets)

    columns: list[Column] = []
    for f in range(nf):
        for v in range(nv):
            for p in range(np_):
                columns.append(Column(ix.x(f, v, p)))
    for f in range(nf):
        for v in range(nv):
            for p in range(np_):
                columns.append(Column(ix.b(f, v, p), kind="binary", upper=1.0))
    for f in range(nf):
        for v in range(nv):
            for p, period in enumerate(s.periods):
                for t in period.harvest_window:
                    columns.append(Column(ix.h(f, v, p, t)))
    for f in range(nf):
        for v in range(nv):
            for m in range(nm):
                for t in ix.harvest_union:
                    columns.append(Column(ix.q(f, v, m, t)))
    for f in range(nf):
        for v in range(nv):
            for t in ix.harvest_union:
                columns.append(Column(ix.wf(f, v, t)))
    for v in range(nv):
        for m in range(nm):
            for t in range(1, 13):
                columns.append(Column(ix.wm(v, m, t)))
                columns.append(Column(ix.sold(v, m, t)))
                columns.append(Column(ix.unmet(v, m, t)))

    rows: list[Row] = []
    # planting area per farm
    for f, farmer in enumerate(s.farmers):
        coeffs = {ix.x(f, v, p): 1.0 for v in range(nv) for p in range(np_)}
        rows.append(Row(coeffs, "<=", farmer.area, name=f"area({f})"))
    # indicator linking: min_plot*b <= x <= area*b
    for f, farmer in enumerate(s.farmers):
        for v in range(nv):
            for p in range(np_):
                if s.min_plot:
                    rows.append(
                        Row(
                            {ix.x(f, v, p): 1.0, ix.b(f, v, p): -s.min_plot},
                            ">=",
                            0.0,
                            name=f"link_lo({f},{v},{p})",
                        )
                    )
                rows.append(
                    Row(
                        {ix.x(f, v, p): 1.0, ix.b(f, v, p): -farmer.area},
                        "<=",
                        0.0,
                        name=f"link_up({f},{v},{p})",
                    )
                )
    # every variety planted in every period, by someone
    for v in range(nv):
        for p in range(np_):
            rows.append(
                Row(
                    {ix.b(f, v, p): 1.0 for f in range(nf)},
                    ">=",
                    1.0,
                    name=f"policyA({v},{p})",
                )
            )
    # every farmer plants something in every period
    for f in range(nf):
        for p in range(np_):
            rows.append(
                Row(
                    {ix.b(f, v, p): 1.0 for v in range(nv)},
                    ">=",
                    1.0,
                    name=f"policyB({f},{p})",
                )
            )
    # harvest cannot exceed what matured from each planting
    for f in range(nf):
        for v in range(nv):
            for p, period in enumerate(s.periods):
                for t in period.harvest_window:
                    rows.append(
                        Row(
                            {ix.h(f, v, p, t): 1.0, ix.x(f, v, p): -period.yield_in(t)},
                            "<=",
                            0.0,
                            name=f"hcap({f},{v},{p},{t})",
                        )
                    )
    # farm waste = matured - harvested
    for f in range(nf):
        for v in range(nv):
            for t in ix.harvest_union:
                coeffs = {ix.wf(f, v, t): 1.0}
                for p, period in enumerate(s.periods):
                    if t in period.harvest_window:
                        coeffs[ix.h(f, v, p, t)] = 1.0
                        coeffs[ix.x(f, v, p)] = coeffs.get(ix.x(f, v, p), 0.0) - period.yield_in(t)
                rows.append(Row(coeffs, "=", 0.0, name=f"wfdef({f},{v},{t})"))
    # everything harvested ships the same month
    for f in range(nf):
        for v in range(nv):
            for t in ix.harvest_union:
                coeffs = {ix.q(f, v, m, t): 1.0 for m in range(nm)}
                for p, period in enumerate(s.periods):
                    if t in period.harvest_window:
                        coeffs[ix.h(f, v, p, t)] = -1.0
                rows.append(Row(coeffs, "=", 0.0, name=f"ship({f},{v},{t})"))
    # arrivals split into sold and market waste
    for v in range(nv):
        for m in range(nm):
            for t in range(1, 13):
                coeffs = {ix.sold(v, m, t): -1.0, ix.wm(v, m, t): -1.0}
                if t in ix.harvest_union:
                    for f in range(nf):
                        coeffs[ix.q(f, v, m, t)] = 1.0
                rows.append(Row(coeffs, "=", 0.0, name=f"mkt({v},{m},{t})"))
    # sold + unmet = demand
    for v, variety in enumerate(s.varieties):
        for m, market in enumerate(s.markets):
            for t in range(1, 13):
                rows.append(
                    Row(
                        {ix.sold(v, m, t): 1.0, ix.unmet(v, m, t): 1.0},
                        "=",
                        s.demand_for(variety.id, market.id, t),
                        name=f"udef({v},{m},{t})",
                    )
                )
    # monthly labor capacity per farm
    for f, farmer in enumerate(s.farmers):
        for t in range(1, 13):
            terms = _labor_terms(s, ix, f, t)
            if terms:
                rows.append(Row(terms, "<=", farmer.labor_capacity[t - 1], name=f"labor({f},{t})"))

    objective_terms = {
        "profit": _profit_terms,
        "waste": _waste_terms,
        "unmet": _unmet_terms,
    }
    # epsilon bounds on the non-optimized objectives come last
    if spec.max_waste is not None:
        rows.append(Row(_waste_terms(s, ix), "<=", spec.max_waste, name="bound_waste"))
    if spec.max_unmet is not None:
        rows.append(Row(_unmet_terms(s, ix), "<=", spec.max_unmet, name="bound_unmet"))
    if spec.min_profit is not None:
        rows.append(Row(_profit_terms(s, ix), ">=", spec.min_profit, name="bound_profit"))

    sense = "maximize" if spec.optimized == "profit" else "minimize"
    program = MixedProgram(
        columns=columns,
        rows=rows,
        objective=objective_terms[spec.optimized](s, ix),
        sense=sense,
    )
    program.validate()
    return program


def extract_plan(s: Scenario, assignment: dict[str, float]) -> SolutionPlan:
    """Read a solver assignment back into named plan quantities."""
    ix = _Index(s)

    def val(key: str) -> float:
        value = assignment.get(key, 0.0)
        return 0.0 if abs(value) < 1e-9 else value

    plan = SolutionPlan()
    for f, farmer in enumerate(s.farmers):
        for v, variety in enumerate(s.varieties):
            for p, period in enumerate(s.periods):
                fvp = (farmer.id, variety.id, period.id)
                plan.planted_area[fvp] = val(ix.x(f, v, p))
                plan.planting_flag[fvp] = assignment.get(ix.b(f, v, p), 0.0) > 0.5
                for t in period.harvest_window:
                    plan.harvested[(*fvp, t)] = val(ix.h(f, v, p, t))
    for f, farmer in enumerate(s.farmers):
        for v, variety in enumerate(s.varieties):
            for m, market in enumerate(s.markets):
                for t in ix.harvest_union:
                    plan.shipped[(farmer.id, variety.id, market.id, t)] = val(ix.q(f, v, m, t))
            for t in ix.harvest_union:
                plan.farm_waste[(farmer.id, variety.id, t)] = val(ix.wf(f, v, t))
    for v, variety in enumerate(s.varieties):
        for m, market in enumerate(s.markets):
            for t in range(1, 13):
                vmt = (variety.id, market.id, t)
                plan.market_waste[vmt] = val(ix.wm(v, m, t))
                plan.sold[vmt] = val(ix.sold(v, m, t))
                plan.unmet[vmt] = val(ix.unmet(v, m, t))
    return plan


# ---------------------------------------------------------------------------
# independent audits (no MixedProgram involved)


def _check_dimensions(s: Scenario, plan: SolutionPlan) -> None:
    farmer_ids = {f.id for f in s.farmers}
    variety_ids = {v.id for v in s.varieties}
    market_ids = {m.id for m in s.markets}
    period_window = {p.id: set(p.harvest_window) for p in s.periods}
    union = set(s.harvest_months())

    for key in list(plan.planted_area) + list(plan.planting_flag):
        f, v, p = key
        if f not in farmer_ids or v not in variety_ids or p not in period_window:
            raise ModelError(f"plan references unknown planting key {key!r}")
    for f, v, p, t in plan.harvested:
        if f not in farmer_ids or v not in variety_ids or t not in period_window.get(p, ()):
            raise ModelError(f"plan harvest key outside the scenario calendar: {(f, v, p, t)!r}")
    for f, v, m, t in plan.shipped:
        if f not in farmer_ids or v not in variety_ids or m not in market_ids or t not in union:
            raise ModelError(f"plan shipment key outside the scenario calendar: {(f, v, m, t)!r}")
    for f, v, t in plan.farm_waste:
        if f not in farmer_ids or v not in variety_ids or t not in union:
            raise ModelError(f"plan farm-waste key outside the scenario calendar: {(f, v, t)!r}")
    for table in (plan.market_waste, plan.sold, plan.unmet):
        for v, m, t in table:
            if v not in variety_ids or m not in market_ids or not 1 <= t <= 12:
                raise ModelError(f"plan market key outside the scenario: {(v, m, t)!r}")


def check_plan(s: Scenario, plan: SolutionPlan, tol: float = 1e-6) -> list[PlanViolation]:
    """Audit a plan against every constraint family, straight from the data."""
    _check_dimensions(s, plan)
    out: list[PlanViolation] = []

    def flag(family: str, key: tuple, residual: float) -> None:
        if residual > tol:
            out.append(PlanViolation(family, key, residual))

    x = plan.planted_area
    b = plan.planting_flag
    h = plan.harvested
    q = plan.shipped
    wf = plan.farm_waste
    wm = plan.market_waste
    sold = plan.sold
    unmet = plan.unmet
    union = s.harvest_months()

    for table, family in (
        (x, "nonneg_x"),
        (h, "nonneg_h"),
        (q, "nonneg_q"),
        (wf, "nonneg_wf"),
        (wm, "nonneg_wm"),
        (sold, "nonneg_s"),
        (unmet, "nonneg_u"),
    ):
        for key, value in table.items():
            flag(family, key, -value)

    for farmer in s.farmers:
        used = sum(
            x.get((farmer.id, v.id, p.id), 0.0) for v in s.varieties for p in s.periods
        )
        flag("area", (farmer.id,), used - farmer.area)

    for farmer in s.farmers:
        for variety in s.varieties:
            for period in s.periods:
                key = (farmer.id, variety.id, period.id)
                area = x.get(key, 0.0)
                if b.get(key, False):
                    flag("link_lo", key, s.min_plot - area)
                    flag("link_up", key, area - farmer.area)
                else:
                    flag("link_up", key, area)

    for variety in s.varieties:
        for period in s.periods:
            count = sum(
                1 for farmer in s.farmers if b.get((farmer.id, variety.id, period.id), False)
            )
            flag("policyA", (variety.id, period.id), 1.0 - count)
    for farmer in s.farmers:
        for period in s.periods:
            count = sum(
                1 for variety in s.varieties if b.get((farmer.id, variety.id, period.id), False)
            )
            flag("policyB", (farmer.id, period.id), 1.0 - count)

    for farmer in s.farmers:
        for variety in s.varieties:
            for period in s.periods:
                for t in period.harvest_window:
                    key = (farmer.id, variety.id, period.id, t)
                    cap = period.yield_in(t) * x.get((farmer.id, variety.id, period.id), 0.0)
                    flag("hcap", key, h.get(key, 0.0) - cap)

    for farmer in s.farmers:
        for variety in s.varieties:
            for t in union:
                matured = sum(
                    p.yield_in(t) * x.get((farmer.id, variety.id, p.id), 0.0)
                    for p in s.periods
                    if t in p.harvest_window
                )
                picked = sum(
                    h.get((farmer.id, variety.id, p.id, t), 0.0)
                    for p in s.periods
                    if t in p.harvest_window
                )
                key = (farmer.id, variety.id, t)
                flag("farm_waste", key, abs(wf.get(key, 0.0) - (matured - picked)))

    for farmer in s.farmers:
        for variety in s.varieties:
            for t in union:
                outbound = sum(q.get((farmer.id, variety.id, m.id, t), 0.0) for m in s.markets)
                picked = sum(
                    h.get((farmer.id, variety.id, p.id, t), 0.0)
                    for p in s.periods
                    if t in p.harvest_window
                )
                flag("shipment", (farmer.id, variety.id, t), abs(outbound - picked))

    for variety in s.varieties:
        for market in s.markets:
            for t in range(1, 13):
                vmt = (variety.id, market.id, t)
                arrivals = (
                    sum(q.get((f.id, variety.id, market.id, t), 0.0) for f in s.farmers)
                    if t in union
                    else 0.0
                )
                flag(
                    "market_balance",
                    vmt,
                    abs(arrivals - sold.get(vmt, 0.0) - wm.get(vmt, 0.0)),
                )
                flag(
                    "unmet_demand",
                    vmt,
                    abs(
                        sold.get(vmt, 0.0)
                        + unmet.get(vmt, 0.0)
                        - s.demand_for(variety.id, market.id, t)
                    ),
                )

    for farmer in s.farmers:
        for t in range(1, 13):
            hours = 0.0
            for variety in s.varieties:
                for period in s.periods:
                    hours += period.care_in(t) * x.get((farmer.id, variety.id, period.id), 0.0)
                    if t in period.harvest_window:
                        hours += variety.harvest_labor * h.get(
                            (farmer.id, variety.id, period.id, t), 0.0
                        )
            flag("labor", (farmer.id, t), hours - farmer.labor_capacity[t - 1])

    return out


def evaluate_plan(s: Scenario, plan: SolutionPlan) -> ObjectiveTriple:
    """Recompute the three objectives from the plan's physical quantities.

    Only planted area, harvests, shipments, and sales enter the arithmetic;
    the plan's own waste and unmet bookkeeping is ignored, so a plan cannot
    flatter itself.  On any feasible plan the two agree by the balance rows.
    """
    _check_dimensions(s, plan)

    revenue = sum(
        s.price_for(v, m, t) * value for (v, m, t), value in plan.sold.items()
    )
    transport = sum(
        s.transport_for(f, m) * value for (f, v, m, t), value in plan.shipped.items()
    )
    planting_cost_by_variety = {v.id: v.planting_cost for v in s.varieties}
    planting = sum(
        planting_cost_by_variety[v] * value for (f, v, p), value in plan.planted_area.items()
    )
    labor_cost = 0.0
    if s.labor_cost_per_hour:
        harvest_labor = {v.id: v.harvest_labor for v in s.varieties}
        hours = 0.0
        for (f, v, p), value in plan.planted_area.items():
            period = next(period for period in s.periods if period.id == p)
            hours += sum(period.care_labor) * value
        for (f, v, p, t), value in plan.harvested.items():
            hours += harvest_labor[v] * value
        labor_cost = s.labor_cost_per_hour * hours

    # farm waste: matured but never picked
    waste = 0.0
    for farmer in s.farmers:
        for variety in s.varieties:
            for period in s.periods:
                area = plan.planted_area.get((farmer.id, variety.id, period.id), 0.0)
                for t in period.harvest_window:
                    waste += period.yield_in(t) * area - plan.harvested.get(
                        (farmer.id, variety.id, period.id, t), 0.0
                    )
    # market waste: shipped but never sold
    waste += sum(plan.shipped.values()) - sum(plan.sold.values())

    unmet = sum(s.demand.values()) - sum(plan.sold.values())
    return ObjectiveTriple(
        profit=revenue - transport - planting - labor_cost,
        waste=waste,
        unmet=unmet,
    )


# ---------------------------------------------------------------------------
# plan interchange documents


def plan_to_document(s: Scenario, plan: SolutionPlan) -> dict:
    """JSON-ready record of every plan quantity, in deterministic order."""
    doc = {
        "schema_version": 1,
        "planted": [],
        "harvested": [],
        "shipped": [],
        "farm_waste": [],
        "market_waste": [],
        "sold": [],
        "unmet": [],
    }
    union = s.harvest_months()
    for farmer in s.farmers:
        for variety in s.varieties:
            for period in s.periods:
                key = (farmer.id, variety.id, period.id)
                doc["planted"].append(
                    {
                        "farmer": farmer.id,
                        "variety": variety.id,
                        "period": period.id,
                        "area": plan.planted_area.get(key, 0.0),
                        "flag": bool(plan.planting_flag.get(key, False)),
                    }
                )
                for t in period.harvest_window:
                    doc["harvested"].append(
                        {
                            "farmer": farmer.id,
                            "variety": variety.id,
                            "period": period.id,
                            "month": t,
                            "kg": plan.harvested.get((*key, t), 0.0),
                        }
                    )
    for farmer in s.farmers:
        for variety in s.varieties:
            for market in s.markets:
                for t in union:
                    doc["shipped"].append(
                        {
                            "farmer": farmer.id,
                            "variety": variety.id,
                            "market": market.id,
                            "month": t,
                            "kg": plan.shipped.get((farmer.id, variety.id, market.id, t), 0.0),
                        }
                    )
            for t in union:
                doc["farm_waste"].append(
                    {
                        "farmer": farmer.id,
                        "variety": variety.id,
                        "month": t,
                        "kg": plan.farm_waste.get((farmer.id, variety.id, t), 0.0),
                    }
                )
    for variety in s.varieties:
        for market in s.markets:
            for t in range(1, 13):
                vmt = (variety.id, market.id, t)
                base = {"variety": variety.id, "market": market.id, "month": t}
                doc["market_waste"].append({**base, "kg": plan.market_waste.get(vmt, 0.0)})
                doc["sold"].append({**base, "kg": plan.sold.get(vmt, 0.0)})
                doc["unmet"].append({**base, "kg": plan.unmet.get(vmt, 0.0)})
    return doc


def plan_from_document(s: Scenario, doc: dict) -> SolutionPlan:
    plan = SolutionPlan()
    try:
        for row in doc.get("planted", []):
            key = (row["farmer"], row["variety"], row["period"])
            plan.planted_area[key] = float(row["area"])
            plan.planting_flag[key] = bool(row["flag"])
        for row in doc.get("harvested", []):
            plan.harvested[(row["farmer"], row["variety"], row["period"], int(row["month"]))] = (
                float(row["kg"])
            )
        for row in doc.get("shipped", []):
            plan.shipped[(row["farmer"], row["variety"], row["market"], int(row["month"]))] = (
                float(row["kg"])
            )
        for row in doc.get("farm_waste", []):
            plan.farm_waste[(row["farmer"], row["variety"], int(row["month"]))] = float(row["kg"])
        for row in doc.get("market_waste", []):
            plan.market_waste[(row["variety"], row["market"], int(row["month"]))] = float(row["kg"])
        for row in doc.get("sold", []):
            plan.sold[(row["variety"], row["market"], int(row["month"]))] = float(row["kg"])
        for row in doc.get("unmet", []):
            plan.unmet[(row["variety"], row["market"], int(row["month"]))] = float(row["kg"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed plan document: {exc}") from exc
    _check_dimensions(s, plan)
    return plan


def plan_summary_by_farmer(s: Scenario, plan: SolutionPlan) -> dict[str, dict[str, float]]:
    """Planted hectares per farmer and variety; the voter-facing digest."""
    summary: dict[str, dict[str, float]] = {}
    for farmer in s.farmers:
        per_variety: dict[str, float] = {}
        for variety in s.varieties:
            total = sum(
                plan.planted_area.get((farmer.id, variety.id, period.id), 0.0)
                for period in s.periods
            )
            per_variety[variety.id] = total
        summary[farmer.id] = per_variety
    return summary
