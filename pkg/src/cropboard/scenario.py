"""Problem-instance data model: farms, varieties, planting calendar, markets.

A scenario describes one planning year split into 12 months, where month 1
is July and month 12 is June of the following calendar year.  Each planting
period fixes a planting month, a harvest window strictly after it, a yield
profile over that window, and a care-labor profile from planting until the
window closes.

Scenario files are TOML with top-level sections ``options``, ``farmers``,
``varieties``, ``periods``, ``markets``, ``demand``, ``price``, and
``transport_cost``.  Demand, price, and transport entries that are absent
default to 0.  All quantities are plain decimals with fixed units:
hectares, kilograms, hours, and a single unnamed currency.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

MONTH_NAMES = (
    "July", "August", "September", "October", "November", "December",
    "January", "February", "March", "April", "May", "June",
)


def month_name(index: int) -> str:
    return MONTH_NAMES[index - 1]


class ScenarioError(Exception):
    """Raised for unreadable or invalid scenario files."""


@dataclass(frozen=True)
class Farmer:
    id: str
    area: float
    labor_capacity: tuple[float, ...]  # hours per month, indices 0..11 = months 1..12


@dataclass(frozen=True)
class Variety:
    id: str
    harvest_labor: float  # hours per kg
    planting_cost: float  # currency per hectare


@dataclass(frozen=True)
class PlantingPeriod:
    id: str
    planting_month: int
    harvest_window: tuple[int, ...]  # sorted months
    yields: tuple[float, ...]  # kg per hectare, aligned with harvest_window
    care_labor: tuple[float, ...]  # hours per hectare, months planting_month..max(window)

    def yield_in(self, month: int) -> float:
        if month in self.harvest_window:
            return self.yields[self.harvest_window.index(month)]
        return 0.0

    def care_in(self, month: int) -> float:
        if self.harvest_window and self.planting_month <= month <= max(self.harvest_window):
            return self.care_labor[month - self.planting_month]
        return 0.0


@dataclass(frozen=True)
class Market:
    id: str


@dataclass
class Scenario:
    farmers: list[Farmer]
    varieties: list[Variety]
    periods: list[PlantingPeriod]
    markets: list[Market]
    # dense maps; every declared key combination is materialized
    demand: dict[tuple[str, str, int], float] = field(default_factory=dict)
    price: dict[tuple[str, str, int], float] = field(default_factory=dict)
    transport_cost: dict[tuple[str, str], float] = field(default_factory=dict)
    min_plot: float = 0.5
    labor_cost_per_hour: float = 0.0

    def __post_init__(self):
        # materialize every declared key so equality ignores sparseness
        for variety in self.varieties:
            for market in self.markets:
                for month in range(1, 13):
                    key = (variety.id, market.id, month)
                    self.demand.setdefault(key, 0.0)
                    self.price.setdefault(key, 0.0)
        for farmer in self.farmers:
            for market in self.markets:
                self.transport_cost.setdefault((farmer.id, market.id), 0.0)

    def harvest_months(self) -> tuple[int, ...]:
        months: set[int] = set()
        for period in self.periods:
            months.update(period.harvest_window)
        return tuple(sorted(months))

    def demand_for(self, variety: str, market: str, month: int) -> float:
        return self.demand.get((variety, market, month), 0.0)

    def price_for(self, variety: str, market: str, month: int) -> float:
        return self.price.get((variety, market, month), 0.0)

    def transport_for(self, farmer: str, market: str) -> float:
        return self.transport_cost.get((farmer, market), 0.0)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


# ---------------------------------------------------------------------------
# validation


def validate_scenario(s: Scenario) -> list[Violation]:
    """Check every scenario invariant; an empty list means valid."""
    out: list[Violation] = []

    def bad(code: str, message: str) -> None:
        out.append(Violation(code, message))

    if not s.farmers:
        bad("NO_FARMERS", "at least one farmer required")
    if not s.varieties:
        bad("NO_VARIETIES", "at least one variety required")
    if not s.periods:
        bad("NO_PERIODS", "at least one planting period required")
    if not s.markets:
        bad("NO_MARKETS", "at least one market required")

    for kind, ids in (
        ("farmer", [f.id for f in s.farmers]),
        ("variety", [v.id for v in s.varieties]),
        ("period", [p.id for p in s.periods]),
        ("market", [m.id for m in s.markets]),
    ):
        seen: set[str] = set()
        for entity_id in ids:
            if entity_id in seen:
                bad("DUPLICATE_ID", f"duplicate {kind} id {entity_id!r}")
            seen.add(entity_id)

    for f in s.farmers:
        if not f.area > 0:
            bad("NEGATIVE_QUANTITY", f"farmer {f.id!r}: area must be > 0, got {f.area}")
        if len(f.labor_capacity) != 12:
            bad("LABOR_MONTHS", f"farmer {f.id!r}: labor_capacity needs 12 entries")
        if any(c < 0 for c in f.labor_capacity):
            bad("NEGATIVE_QUANTITY", f"farmer {f.id!r}: negative labor capacity")

    for v in s.varieties:
        if v.harvest_labor < 0 or v.planting_cost < 0:
            bad("NEGATIVE_QUANTITY", f"variety {v.id!r}: negative coefficient")

    for p in s.periods:
        if not 1 <= p.planting_month <= 12:
            bad("MONTH_RANGE", f"period {p.id!r}: planting_month {p.planting_month} outside 1..12")
        if not p.harvest_window:
            bad("WINDOW_EMPTY", f"period {p.id!r}: empty harvest window")
            continue
        if any(not 1 <= t <= 12 for t in p.harvest_window):
            bad("MONTH_RANGE", f"period {p.id!r}: harvest month outside 1..12")
        if tuple(sorted(set(p.harvest_window))) != p.harvest_window:
            bad("WINDOW_ORDER", f"period {p.id!r}: harvest_window must be sorted and unique")
        if min(p.harvest_window) <= p.planting_month:
            bad("WINDOW_ORDER", f"period {p.id!r}: harvest must start after planting month")
        if len(p.yields) != len(p.harvest_window):
            bad("YIELD_SHAPE", f"period {p.id!r}: one yield per window month required")
        elif any(y < 0 for y in p.yields):
            bad("NEGATIVE_QUANTITY", f"period {p.id!r}: negative yield")
        expected_care = max(p.harvest_window) - p.planting_month + 1
        if len(p.care_labor) != expected_care:
            bad(
                "CARE_SHAPE",
                f"period {p.id!r}: care_labor needs {expected_care} entries "
                "(planting month through window end)",
            )
        elif any(c < 0 for c in p.care_labor):
            bad("NEGATIVE_QUANTITY", f"period {p.id!r}: negative care labor")

    farmer_ids = {f.id for f in s.farmers}
    variety_ids = {v.id for v in s.varieties}
    market_ids = {m.id for m in s.markets}

    for (variety, market, month), value in {**s.demand, **s.price}.items():
        if variety not in variety_ids or market not in market_ids:
            bad("UNKNOWN_REFERENCE", f"map entry ({variety!r}, {market!r}) not declared")
        if not 1 <= month <= 12:
            bad("MONTH_RANGE", f"map month {month} outside 1..12")
        if value < 0:
            bad("NEGATIVE_QUANTITY", f"negative value for ({variety!r}, {market!r}, {month})")
    for (farmer, market), value in s.transport_cost.items():
        if farmer not in farmer_ids or market not in market_ids:
            bad("UNKNOWN_REFERENCE", f"transport entry ({farmer!r}, {market!r}) not declared")
        if value < 0:
            bad("NEGATIVE_QUANTITY", f"negative transport cost ({farmer!r}, {market!r})")

    if s.min_plot < 0:
        bad("NEGATIVE_QUANTITY", f"min_plot must be >= 0, got {s.min_plot}")
    if s.labor_cost_per_hour < 0:
        bad("NEGATIVE_QUANTITY", "labor_cost_per_hour must be >= 0")
    if s.farmers and s.min_plot > min(f.area for f in s.farmers):
        bad("MIN_PLOT_EXCEEDS_FARM", f"min_plot {s.min_plot} exceeds smallest farm area")

    return out


# ---------------------------------------------------------------------------
# parsing


def _require(table: dict, key: str, kind, where: str):
    if key not in table:
        raise ScenarioError(f"{where}: missing required field {key!r}")
    value = table[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"{where}: field {key!r} must be a number")
        return float(value)
    if not isinstance(value, kind):
        raise ScenarioError(f"{where}: field {key!r} has the wrong type")
    return value


def _number_list(table: dict, key: str, where: str) -> list[float]:
    raw = _require(table, key, list, where)
    values = []
    for item in raw:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ScenarioError(f"{where}: field {key!r} must hold numbers")
        values.append(float(item))
    return values


def _by_month(table: dict, where: str) -> list[float]:
    values = _number_list(table, "by_month", where)
    if len(values) != 12:
        raise ScenarioError(f"{where}: by_month needs exactly 12 entries")
    return values


def parse_scenario(text: str) -> Scenario:
    """Parse and fully validate scenario-file content."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"scenario syntax error: {exc}") from exc

    options = data.get("options", {})
    if not isinstance(options, dict):
        raise ScenarioError("options: must be a table")

    farmers = []
    for idx, raw in enumerate(data.get("farmers", [])):
        where = f"farmers[{idx}]"
        fid = _require(raw, "id", str, where)
        capacity = raw.get("labor_capacity", 0.0)
        if isinstance(capacity, (int, float)) and not isinstance(capacity, bool):
            months = [float(capacity)] * 12
        else:
            months = _number_list(raw, "labor_capacity", where)
            if len(months) != 12:
                raise ScenarioError(f"{where}: labor_capacity needs 12 entries")
        farmers.append(Farmer(fid, _require(raw, "area", float, where), tuple(months)))

    varieties = []
    for idx, raw in enumerate(data.get("varieties", [])):
        where = f"varieties[{idx}]"
        varieties.append(
            Variety(
                _require(raw, "id", str, where),
                _require(raw, "harvest_labor", float, where),
                _require(raw, "planting_cost", float, where),
            )
        )

    periods = []
    for idx, raw in enumerate(data.get("periods", [])):
        where = f"periods[{idx}]"
        window = [int(t) for t in _number_list(raw, "harvest_window", where)]
        periods.append(
            PlantingPeriod(
                _require(raw, "id", str, where),
                int(_require(raw, "planting_month", float, where)),
                tuple(window),
                tuple(_number_list(raw, "yields", where)),
                tuple(_number_list(raw, "care_labor", where)),
            )
        )

    markets = []
    for idx, raw in enumerate(data.get("markets", [])):
        markets.append(Market(_require(raw, "id", str, f"markets[{idx}]")))

    variety_ids = [v.id for v in varieties]
    market_ids = [m.id for m in markets]
    farmer_ids = [f.id for f in farmers]

    def dense_map(section: str) -> dict[tuple[str, str, int], float]:
        table = {
            (variety, market, month): 0.0
            for variety in variety_ids
            for market in market_ids
            for month in range(1, 13)
        }
        for idx, raw in enumerate(data.get(section, [])):
            where = f"{section}[{idx}]"
            variety = _require(raw, "variety", str, where)
            market = _require(raw, "market", str, where)
            if variety not in variety_ids:
                raise ScenarioError(f"{where}: undeclared variety {variety!r}")
            if market not in market_ids:
                raise ScenarioError(f"{where}: undeclared market {market!r}")
            for month, value in enumerate(_by_month(raw, where), start=1):
                if value < 0:
                    raise ScenarioError(f"{where}: negative quantity in month {month}")
                table[(variety, market, month)] = value
        return table

    transport = {
        (farmer, market): 0.0 for farmer in farmer_ids for market in market_ids
    }
    for idx, raw in enumerate(data.get("transport_cost", [])):
        where = f"transport_cost[{idx}]"
        farmer = _require(raw, "farmer", str, where)
        market = _require(raw, "market", str, where)
        if farmer not in farmer_ids:
            raise ScenarioError(f"{where}: undeclared farmer {farmer!r}")
        if market not in market_ids:
            raise ScenarioError(f"{where}: undeclared market {market!r}")
        per_kg = _require(raw, "per_kg", float, where)
        if per_kg < 0:
            raise ScenarioError(f"{where}: negative quantity")
        transport[(farmer, market)] = per_kg

    scenario = Scenario(
        farmers=farmers,
        varieties=varieties,
        periods=periods,
        markets=markets,
        demand=dense_map("demand"),
        price=dense_map("price"),
        transport_cost=transport,
        min_plot=float(options.get("min_plot", 0.5)),
        labor_cost_per_hour=float(options.get("labor_cost_per_hour", 0.0)),
    )
    violations = validate_scenario(scenario)
    if violations:
        summary = "; ".join(f"{v.code}: {v.message}" for v in violations)
        raise ScenarioError(f"invalid scenario: {summary}")
    return scenario


# ---------------------------------------------------------------------------
# serialization


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ScenarioError(f"cannot serialize non-finite number {value}")
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(item) for item in value) + "]"
    raise ScenarioError(f"cannot serialize value of type {type(value).__name__}")


def serialize_scenario(s: Scenario) -> str:
    """Emit the scenario in its file format; inverse of parse_scenario."""
    lines: list[str] = []

    def emit(section: str, rows: list[dict]) -> None:
        for row in rows:
            lines.append(f"[[{section}]]")
            for key, value in row.items():
                lines.append(f"{key} = {_toml_value(value)}")
            lines.append("")

    lines.append("[options]")
    lines.append(f"min_plot = {_toml_value(float(s.min_plot))}")
    lines.append(f"labor_cost_per_hour = {_toml_value(float(s.labor_cost_per_hour))}")
    lines.append("")

    emit(
        "farmers",
        [
            {"id": f.id, "area": float(f.area), "labor_capacity": [float(c) for c in f.labor_capacity]}
            for f in s.farmers
        ],
    )
    emit(
        "varieties",
        [
            {
                "id": v.id,
                "harvest_labor": float(v.harvest_labor),
                "planting_cost": float(v.planting_cost),
            }
            for v in s.varieties
        ],
    )
    emit(
        "periods",
        [
            {
                "id": p.id,
                "planting_month": int(p.planting_month),
                "harvest_window": [int(t) for t in p.harvest_window],
                "yields": [float(y) for y in p.yields],
                "care_labor": [float(c) for c in p.care_labor],
            }
            for p in s.periods
        ],
    )
    emit("markets", [{"id": m.id} for m in s.markets])

    def map_rows(table: dict[tuple[str, str, int], float]) -> list[dict]:
        rows = []
        for variety in s.varieties:
            for market in s.markets:
                by_month = [float(table.get((variety.id, market.id, t), 0.0)) for t in range(1, 13)]
                if any(by_month):
                    rows.append({"variety": variety.id, "market": market.id, "by_month": by_month})
        return rows

    emit("demand", map_rows(s.demand))
    emit("price", map_rows(s.price))
    emit(
        "transport_cost",
        [
            {"farmer": f.id, "market": m.id, "per_kg": float(s.transport_cost.get((f.id, m.id), 0.0))}
            for f in s.farmers
            for m in s.markets
            if s.transport_cost.get((f.id, m.id), 0.0)
        ],
    )

    return "\n".join(lines)


def demo_scenario() -> Scenario:
    """The built-in five-farm instance used by docs, demos, and smoke tests."""
    text = resources.files("cropboard").joinpath("data/demo.toml").read_text("utf-8")
    return parse_scenario(text)


def orchard_scenario() -> Scenario:
    """The built-in two-farm instance; small enough for fast walkthroughs."""
    text = resources.files("cropboard").joinpath("data/orchard.toml").read_text("utf-8")
    return parse_scenario(text)
