"""Exact solver for small mixed binary/continuous linear programs.

Three entry points share one program representation:

* :func:`solve_lp` - bounded-variable two-phase primal simplex on a dense
  tableau.  Devex pricing by default, switching to Bland's rule after a
  streak of degenerate pivots so cycling cannot occur.
* :func:`solve_milp` - branch and bound over the binary columns: best-bound
  node selection, branching on the most fractional binary, deterministic
  tie-breaking by column position.
* :func:`brute_force_milp` - exhaustive enumeration of binary assignments,
  usable as an oracle for programs with at most 20 binaries.

Everything is plain float64.  The implementation favours predictability
over speed: identical inputs always produce identical outcomes, including
the full variable assignment.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

INTEGRALITY_TOL = 1e-7
ROW_FEAS_TOL = 1e-6
RELATIVE_GAP = 1e-9

# consecutive degenerate pivots before Bland's rule takes over
_BLAND_STREAK = 50
_DUAL_TOL = 1e-9
# ratio-test mask: tableau entries below this are treated as zero, because
# on an equilibrated system entries this small are mostly solve noise and
# pivoting on one can make the next basis numerically singular
_PIVOT_TOL = 1e-8


class SolverError(Exception):
    """Raised for malformed programs or exhausted limits."""


class NodeLimitExceeded(SolverError):
    """Branch and bound ran out of its node budget."""


@dataclass(frozen=True)
class Column:
    id: str
    kind: str = "continuous"  # "continuous" | "binary"
    lower: float = 0.0
    upper: float = math.inf


@dataclass(frozen=True)
class Row:
    coeffs: dict[str, float]
    sense: str  # "<=" | "=" | ">="
    rhs: float
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coeffs", dict(self.coeffs))


@dataclass
class MixedProgram:
    columns: list[Column]
    rows: list[Row]
    objective: dict[str, float]
    sense: str = "maximize"  # "maximize" | "minimize"

    def validate(self) -> None:
        seen: set[str] = set()
        for col in self.columns:
            if col.id in seen:
                raise SolverError(f"duplicate column id {col.id!r}")
            seen.add(col.id)
            if col.kind not in ("continuous", "binary"):
                raise SolverError(f"column {col.id!r}: unknown kind {col.kind!r}")
            if col.lower > col.upper:
                raise SolverError(f"column {col.id!r}: lower bound exceeds upper bound")
            if col.kind == "binary" and (col.lower < -1e-12 or col.upper > 1 + 1e-12):
                raise SolverError(f"binary column {col.id!r}: bounds outside [0, 1]")
        for i, row in enumerate(self.rows):
            if row.sense not in ("<=", "=", ">="):
                raise SolverError(f"row {i}: unknown sense {row.sense!r}")
            for key in row.coeffs:
                if key not in seen:
                    raise SolverError(f"row {i} references undeclared column {key!r}")
        for key in self.objective:
            if key not in seen:
                raise SolverError(f"objective references undeclared column {key!r}")
        if self.sense not in ("maximize", "minimize"):
            raise SolverError(f"unknown objective sense {self.sense!r}")

    def binary_ids(self) -> list[str]:
        return [c.id for c in self.columns if c.kind == "binary"]


@dataclass
class SolveOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    assignment: dict[str, float] | None = None
    objective_value: float | None = None
    node_count: int = 0


# ---------------------------------------------------------------------------
# standard form


class _StandardForm:
    """Program compiled to dense arrays, reusable across bound changes.

    All rows become equalities by appending one slack column per row; the
    slack's bounds encode the sense.  Branch-and-bound nodes then only vary
    the structural bound arrays, so the matrices are built once.
    """

    def __init__(self, program: MixedProgram):
        self.program = program
        n = len(program.columns)
        m = len(program.rows)
        self.n = n
        self.m = m
        self.col_index = {c.id: j for j, c in enumerate(program.columns)}

        self.A = np.zeros((m, n))
        self.b = np.zeros(m)
        self.senses = [r.sense for r in program.rows]
        for i, row in enumerate(program.rows):
            for key, coef in row.coeffs.items():
                self.A[i, self.col_index[key]] += float(coef)
            self.b[i] = float(row.rhs)

        self.c = np.zeros(n)
        for key, coef in program.objective.items():
            self.c[self.col_index[key]] += float(coef)
        # the simplex core always minimizes
        self.minimize_sign = -1.0 if program.sense == "maximize" else 1.0

        self.base_lower = np.array([c.lower for c in program.columns], dtype=float)
        self.base_upper = np.array([c.upper for c in program.columns], dtype=float)
        self.binary_pos = [j for j, c in enumerate(program.columns) if c.kind == "binary"]

    def bounds_with(self, overrides: dict[str, tuple[float, float]]):
        lower = self.base_lower.copy()
        upper = self.base_upper.copy()
        for pos in self.binary_pos:
            lower[pos] = max(lower[pos], 0.0)
            upper[pos] = min(upper[pos], 1.0)
        for key, (lo, up) in overrides.items():
            j = self.col_index[key]
            lower[j] = lo
            upper[j] = up
        return lower, upper

    def solve(self, overrides: dict[str, tuple[float, float]] | None = None) -> SolveOutcome:
        lower, upper = self.bounds_with(overrides or {})
        if np.any(lower > upper + 1e-12):
            return SolveOutcome(status="infeasible")
        status, x = _bounded_simplex(
            self.A, self.b, self.senses, self.minimize_sign * self.c, lower, upper
        )
        if status != "optimal":
            return SolveOutcome(status=status)
        assignment = {col.id: float(x[j]) for j, col in enumerate(self.program.columns)}
        objective = float(self.c @ x)
        return SolveOutcome(status="optimal", assignment=assignment, objective_value=objective)


# ---------------------------------------------------------------------------
# bounded-variable primal simplex

_BASIC, _AT_LOWER, _AT_UPPER, _FREE = 0, 1, 2, 3


def _resting_values(status, lower, upper):
    vals = np.zeros(len(status))
    at_lo = status == _AT_LOWER
    at_up = status == _AT_UPPER
    vals[at_lo] = lower[at_lo]
    vals[at_up] = upper[at_up]
    return vals


class _Simplex:
    """Working state: W = B^-1 F with F = [A I art], basic values, statuses."""

    def __init__(self, F, b, W, xB, basis, status, lo, up):
        self.F = F  # scaled original columns, untouched by pivoting
        self.b = b
        self.W = W
        self.xB = xB
        self.basis = basis
        self.status = status
        self.lo = lo
        self.up = up
        self.iterations = 0
        self.refreshes = 0

    def values(self) -> np.ndarray:
        x = _resting_values(self.status, self.lo, self.up)
        x[self.basis] = self.xB
        return x

    def full_refresh(self) -> None:
        """Recompute W and the basic values directly from the basis system.

        Pivot updates accumulate rounding; this restores both to the
        accuracy of one dense solve.
        """
        if self.F.shape[0] == 0:
            return
        self.refreshes += 1
        B = self.F[:, self.basis]
        try:
            self.W = np.linalg.solve(B, self.F)
        except np.linalg.LinAlgError:
            raise SolverError("simplex basis became singular") from None
        rest = _resting_values(self.status, self.lo, self.up)
        rest[self.basis] = 0.0
        self.xB = np.linalg.solve(B, self.b - self.F @ rest)

    def run(
        self,
        c: np.ndarray,
        freeze_on_leave_from: int | None = None,
        cautious: bool = False,
    ) -> str:
        """Pivot until optimal or unbounded under cost vector c.

        Columns at or past ``freeze_on_leave_from`` are fixed to zero as
        soon as they leave the basis (phase 1 uses this so artificials
        never re-enter).  Cautious mode trades speed for stability: Bland's
        rule from the first pivot and a short refactorization interval.
        """
        lo, up = self.lo, self.up
        status, basis = self.status, self.basis
        m, total = self.W.shape

        d = c - c[basis] @ self.W
        d[basis] = 0.0

        fixed = up - lo <= 1e-15
        refresh_interval = 20 if cautious else 100
        since_refresh = 0
        degen_streak = 0
        full_refreshes = 0
        fresh = False  # whether W was recomputed since the last basis change
        devex = np.ones(total)  # reference weights, reset on refresh
        buf = np.empty_like(self.W)  # rank-1 update scratch, allocated once
        max_iter = 20_000 + 40 * m

        def refresh_state():
            nonlocal fresh, since_refresh
            self.full_refresh()
            fresh = True
            since_refresh = 0
            devex[:] = 1.0
            d_new = c - c[basis] @ self.W
            d_new[basis] = 0.0
            return d_new

        for _ in range(max_iter):
            self.iterations += 1
            if since_refresh >= refresh_interval:
                # bound the drift window of the pivot updates
                d = refresh_state()
            W, xB = self.W, self.xB
            use_bland = cautious or degen_streak >= _BLAND_STREAK

            can_inc = (status == _AT_LOWER) | (status == _FREE)
            can_dec = (status == _AT_UPPER) | (status == _FREE)
            favorable_inc = can_inc & ~fixed & (d < -_DUAL_TOL)
            favorable_dec = can_dec & ~fixed & (d > _DUAL_TOL)
            favorable = favorable_inc | favorable_dec
            if not favorable.any():
                if fresh:
                    return "optimal"
                # verify tentative optimality against freshly computed data
                full_refreshes += 1
                if full_refreshes > 25:
                    raise SolverError("simplex cannot stabilize numerically")
                d = refresh_state()
                W, xB = self.W, self.xB
                favorable_inc = can_inc & ~fixed & (d < -_DUAL_TOL)
                favorable_dec = can_dec & ~fixed & (d > _DUAL_TOL)
                favorable = favorable_inc | favorable_dec
                if not favorable.any():
                    return "optimal"

            if use_bland:
                e = int(np.flatnonzero(favorable)[0])
            else:
                # devex pricing: largest reduced cost relative to the
                # estimated steepest-edge norm
                cand = np.flatnonzero(favorable)
                dc = d[cand]
                e = int(cand[np.argmax(dc * dc / devex[cand])])
            direction = 1.0 if favorable_inc[e] else -1.0

            y = W[:, e]
            g = -direction * y  # rate of change of each basic value

            if status[e] == _FREE:
                t_enter = math.inf
            else:
                t_enter = up[e] - lo[e]

            dec = g < -_PIVOT_TOL
            inc = g > _PIVOT_TOL
            t_rows = np.full(m, math.inf)
            lo_b = lo[basis]
            up_b = up[basis]
            with np.errstate(invalid="ignore"):
                t_rows[dec] = np.where(
                    np.isfinite(lo_b[dec]),
                    (xB[dec] - lo_b[dec]) / (-g[dec]),
                    math.inf,
                )
                t_rows[inc] = np.where(
                    np.isfinite(up_b[inc]),
                    (up_b[inc] - xB[inc]) / g[inc],
                    math.inf,
                )
            t_rows = np.maximum(t_rows, 0.0)

            if use_bland:
                threshold = float(t_rows.min()) if m else math.inf
            else:
                # Harris two-pass ratio test: let the leaving choice relax
                # each bound by a whisker so the pivot element can be
                # picked for numerical size among the near-ties
                t_relaxed = np.full(m, math.inf)
                with np.errstate(invalid="ignore"):
                    t_relaxed[dec] = np.where(
                        np.isfinite(lo_b[dec]),
                        (xB[dec] - lo_b[dec] + 1e-9) / (-g[dec]),
                        math.inf,
                    )
                    t_relaxed[inc] = np.where(
                        np.isfinite(up_b[inc]),
                        (up_b[inc] + 1e-9 - xB[inc]) / g[inc],
                        math.inf,
                    )
                t_relaxed = np.maximum(t_relaxed, 0.0)
                threshold = float(t_relaxed.min()) if m else math.inf

            if threshold < t_enter:
                if not np.isfinite(threshold):
                    if fresh:
                        return "unbounded"
                    d = refresh_state()
                    continue
                if use_bland:
                    near = np.flatnonzero(t_rows <= threshold + 1e-9 * (1.0 + threshold))
                else:
                    near = np.flatnonzero(t_rows <= threshold)
                # among the near-ties, always take the largest pivot element;
                # small pivots are what drive the basis toward singularity
                leave_row = int(near[np.argmax(np.abs(g[near]))])
                if abs(g[leave_row]) < 1e-7 and not fresh:
                    # a smallish pivot under stale data risks admitting a
                    # dependent column; recompute and re-evaluate first
                    d = refresh_state()
                    continue
                step = float(t_rows[leave_row])
                degen_streak = degen_streak + 1 if step <= 1e-11 else 0

                enter_from = {
                    _AT_LOWER: lo[e],
                    _AT_UPPER: up[e],
                    _FREE: 0.0,
                }[int(status[e])]
                xB += g * step
                leaving = basis[leave_row]
                status[leaving] = _AT_LOWER if g[leave_row] < 0 else _AT_UPPER
                if freeze_on_leave_from is not None and leaving >= freeze_on_leave_from:
                    lo[leaving] = 0.0
                    up[leaving] = 0.0
                    fixed[leaving] = True
                    status[leaving] = _AT_LOWER
                xB[leave_row] = enter_from + direction * step
                basis[leave_row] = e
                status[e] = _BASIC

                col = W[:, e].copy()
                piv = float(col[leave_row])
                W[leave_row, :] /= piv
                pr = W[leave_row, :]
                col[leave_row] = 0.0
                np.multiply(col[:, None], pr[None, :], out=buf)
                np.subtract(W, buf, out=W)
                d -= d[e] * pr
                d[e] = 0.0
                ref_weight = devex[e]
                np.maximum(devex, pr * pr * ref_weight, out=devex)
                devex[leaving] = max(ref_weight / (piv * piv), 1.0)
                fresh = False
                since_refresh += 1
            elif np.isfinite(t_enter):
                # entering travels to its opposite bound; basis unchanged
                step = float(t_enter)
                degen_streak = degen_streak + 1 if step <= 1e-11 else 0
                xB += g * step
                status[e] = _AT_UPPER if direction > 0 else _AT_LOWER
            else:
                if fresh:
                    return "unbounded"
                d = refresh_state()

        raise SolverError("simplex iteration limit exceeded")


def _equilibrate(A):
    """Max-abs row and column scaling, rounded to powers of two.

    Power-of-two divisors change only the exponent bits, so scaling adds
    no rounding error of its own.  Returns (row_div, col_div).
    """
    m, n = A.shape
    row_div = np.ones(m)
    col_div = np.ones(n)
    S = np.abs(A)
    for _ in range(2):
        r = S.max(axis=1, initial=0.0)
        r = np.exp2(np.round(np.log2(np.where(r > 0, r, 1.0))))
        S = S / r[:, None]
        row_div *= r
        k = S.max(axis=0, initial=0.0)
        k = np.exp2(np.round(np.log2(np.where(k > 0, k, 1.0))))
        S = S / k[None, :]
        col_div *= k
    return row_div, col_div


def _bounded_simplex(A, b, senses, c, lower, upper):
    """Minimize c@x subject to row senses and column bounds.

    Runs the fast configuration first; if that breaks down numerically
    (singular basis, failure to stabilize, iteration limit), the solve is
    redone from scratch in cautious mode before giving up.
    """
    try:
        return _bounded_simplex_once(A, b, senses, c, lower, upper, cautious=False)
    except SolverError:
        return _bounded_simplex_once(A, b, senses, c, lower, upper, cautious=True)


def _bounded_simplex_once(A, b, senses, c, lower, upper, cautious):
    """Minimize c@x subject to row senses and column bounds.

    The system is equilibrated before solving (poorly scaled inputs mix
    unit coefficients with per-hectare yields), solved in scaled space,
    and the result mapped back.  Returns (status, x) with x over the
    structural columns only.
    """
    m, n = A.shape

    row_div, col_div = _equilibrate(A)
    A = A / row_div[:, None] / col_div[None, :]
    b = b / row_div
    lower = lower * col_div
    upper = upper * col_div
    c = c / col_div

    slack_lo = np.zeros(m)
    slack_up = np.zeros(m)
    for i, sense in enumerate(senses):
        if sense == "<=":
            slack_up[i] = math.inf
        elif sense == ">=":
            slack_lo[i] = -math.inf
        # "=" keeps the slack fixed at zero

    N = n + m
    full_lo = np.concatenate([lower, slack_lo])
    full_up = np.concatenate([upper, slack_up])
    status = np.empty(N, dtype=np.int8)
    for j in range(N):
        if np.isfinite(full_lo[j]):
            status[j] = _AT_LOWER
        elif np.isfinite(full_up[j]):
            status[j] = _AT_UPPER
        else:
            status[j] = _FREE

    rest = _resting_values(status, full_lo, full_up)
    resid = b - A @ rest[:n] - rest[n:]

    scale = 1.0 + (float(np.max(np.abs(b))) if m else 0.0)
    tol0 = 1e-11 * scale
    basis = np.empty(m, dtype=int)
    art_rows: list[int] = []
    art_signs: list[float] = []
    for i in range(m):
        target = rest[n + i] + resid[i]  # slack value that would satisfy the row
        if slack_lo[i] - tol0 <= target <= slack_up[i] + tol0:
            basis[i] = n + i
        else:
            art_rows.append(i)
            art_signs.append(1.0 if resid[i] > 0 else -1.0)
            basis[i] = N + len(art_rows) - 1

    n_art = len(art_rows)
    total = N + n_art
    F = np.zeros((m, total))
    F[:, :n] = A
    F[:, n:N] = np.eye(m)
    for k, i in enumerate(art_rows):
        F[i, N + k] = art_signs[k]
    W = F.copy()
    for k, i in enumerate(art_rows):
        if art_signs[k] < 0:
            # W holds B^-1 [A I art]; a -1 basic coefficient flips its row
            W[i, :] *= -1.0
    lo = np.concatenate([full_lo, np.zeros(n_art)])
    up = np.concatenate([full_up, np.full(n_art, math.inf)])
    status = np.concatenate([status, np.zeros(n_art, dtype=np.int8)])

    xB = np.empty(m)
    for i in range(m):
        j = basis[i]
        if j < N:
            status[j] = _BASIC
            xB[i] = min(max(rest[j], full_lo[j]), full_up[j]) + resid[i]
        else:
            status[j] = _BASIC
            xB[i] = abs(resid[i])

    state = _Simplex(F, b, W, xB, basis, status, lo, up)

    if n_art:
        phase1_c = np.zeros(total)
        phase1_c[N:] = 1.0
        st = state.run(phase1_c, freeze_on_leave_from=N, cautious=cautious)
        if st != "optimal":  # pragma: no cover - phase 1 objective is bounded
            raise SolverError("phase 1 did not converge")
        infeas = float(np.sum(state.values()[N:]))
        if infeas > 1e-7 * scale:
            return "infeasible", None
        # freeze artificials at zero for phase 2
        state.lo[N:] = 0.0
        state.up[N:] = 0.0

    phase2_c = np.zeros(total)
    phase2_c[:n] = c
    st = state.run(phase2_c, cautious=cautious)
    if st == "unbounded":
        return "unbounded", None

    x = _refine(state, n)
    return "optimal", x / col_div


def _refine(state, n):
    """Re-solve the final basis system against the original column data.

    Tableau updates accumulate rounding; one direct solve restores the
    basic values to input accuracy.  Returns structural values only.
    """
    x = state.values()
    if state.F.shape[0] == 0:
        return x[:n]
    nb_mask = np.ones(len(x), dtype=bool)
    nb_mask[state.basis] = False
    rhs = state.b - state.F[:, nb_mask] @ x[nb_mask]
    B = state.F[:, state.basis]
    try:
        xb = np.linalg.solve(B, rhs)
    except np.linalg.LinAlgError:  # pragma: no cover - basis is nonsingular
        return x[:n]
    refined = x.copy()
    refined[state.basis] = xb
    refined = np.clip(refined, state.lo, state.up)
    return refined[:n]


# ---------------------------------------------------------------------------
# public entry points


def solve_lp(program: MixedProgram) -> SolveOutcome:
    """Solve the continuous relaxation (binaries relaxed to [0, 1])."""
    program.validate()
    return _StandardForm(program).solve()


def solve_milp(program: MixedProgram, *, node_limit: int = 1_000_000) -> SolveOutcome:
    """Solve to global optimality over binary columns by branch and bound."""
    program.validate()
    form = _StandardForm(program)
    binary_ids = program.binary_ids()
    maximize = program.sense == "maximize"

    nodes_solved = 0

    def relax(overrides):
        nonlocal nodes_solved
        nodes_solved += 1
        if nodes_solved > node_limit:
            raise NodeLimitExceeded(f"node limit {node_limit} exceeded")
        return form.solve(overrides)

    root = relax({})
    if root.status == "infeasible":
        return SolveOutcome(status="infeasible", node_count=nodes_solved)
    if root.status == "unbounded":
        status = _unbounded_or_infeasible(program, node_limit)
        return SolveOutcome(status=status, node_count=nodes_solved)

    incumbent: SolveOutcome | None = None
    incumbent_value = 0.0

    def improves(value, reference):
        gap = RELATIVE_GAP * max(1.0, abs(value), abs(reference))
        return value > reference + gap if maximize else value < reference - gap

    if _most_fractional(root.assignment, binary_ids) is not None:
        # rounding dive: a feasible integral point found this early prunes
        # most of the tree under best-bound order
        dive_overrides = {
            bid: (float(round(root.assignment[bid])),) * 2 for bid in binary_ids
        }
        dive = relax(dive_overrides)
        if dive.status == "optimal":
            incumbent = dive
            incumbent_value = dive.objective_value

    counter = itertools.count()
    heap: list[tuple[float, int, SolveOutcome, dict]] = []

    def push(outcome, overrides):
        key = -outcome.objective_value if maximize else outcome.objective_value
        heapq.heappush(heap, (key, next(counter), outcome, overrides))

    push(root, {})
    while heap:
        key, _, outcome, overrides = heapq.heappop(heap)
        bound = -key if maximize else key
        if incumbent is not None and not improves(bound, incumbent_value):
            break  # best-bound order: no remaining node can improve
        frac_id = _most_fractional(outcome.assignment, binary_ids)
        if frac_id is None:
            if incumbent is None or improves(outcome.objective_value, incumbent_value):
                incumbent = outcome
                incumbent_value = outcome.objective_value
            continue
        for fixed_value in (0.0, 1.0):
            child_overrides = dict(overrides)
            child_overrides[frac_id] = (fixed_value, fixed_value)
            child = relax(child_overrides)
            if child.status != "optimal":
                continue
            if incumbent is not None and not improves(child.objective_value, incumbent_value):
                continue
            push(child, child_overrides)

    if incumbent is None:
        return SolveOutcome(status="infeasible", node_count=nodes_solved)
    polished = _snap_binaries(form, incumbent, binary_ids)
    return SolveOutcome(
        status="optimal",
        assignment=polished.assignment,
        objective_value=polished.objective_value,
        node_count=nodes_solved,
    )


def brute_force_milp(program: MixedProgram) -> SolveOutcome:
    """Enumerate every binary assignment; oracle for small programs."""
    program.validate()
    binary_ids = program.binary_ids()
    if len(binary_ids) > 20:
        raise SolverError(f"brute force limited to 20 binaries, got {len(binary_ids)}")
    form = _StandardForm(program)
    maximize = program.sense == "maximize"

    best: SolveOutcome | None = None
    count = 0
    for bits in itertools.product((0.0, 1.0), repeat=len(binary_ids)):
        overrides = {bid: (v, v) for bid, v in zip(binary_ids, bits)}
        count += 1
        outcome = form.solve(overrides)
        if outcome.status == "unbounded":
            return SolveOutcome(status="unbounded", node_count=count)
        if outcome.status != "optimal":
            continue
        if best is None:
            best = outcome
        elif maximize and outcome.objective_value > best.objective_value + 1e-12:
            best = outcome
        elif not maximize and outcome.objective_value < best.objective_value - 1e-12:
            best = outcome
    if best is None:
        return SolveOutcome(status="infeasible", node_count=count)
    best.node_count = count
    return best


def _unbounded_or_infeasible(program: MixedProgram, node_limit: int) -> str:
    # Unbounded rays live in the continuous columns (binaries are boxed), so
    # the MILP is unbounded exactly when some binary assignment is feasible.
    probe = MixedProgram(
        columns=program.columns,
        rows=program.rows,
        objective={},
        sense=program.sense,
    )
    feasibility = solve_milp(probe, node_limit=node_limit)
    return "unbounded" if feasibility.status == "optimal" else "infeasible"


def _most_fractional(assignment, binary_ids):
    worst_id = None
    worst_frac = INTEGRALITY_TOL
    for bid in binary_ids:
        value = assignment[bid]
        frac = abs(value - round(value))
        if frac > worst_frac + 1e-15:  # strict: earlier column wins ties
            worst_id = bid
            worst_frac = frac
    return worst_id


def _snap_binaries(form, outcome, binary_ids):
    assignment = dict(outcome.assignment)
    moved = 0.0
    overrides = {}
    for bid in binary_ids:
        snapped = float(round(assignment[bid]))
        moved = max(moved, abs(assignment[bid] - snapped))
        overrides[bid] = (snapped, snapped)
        assignment[bid] = snapped
    if moved <= 1e-12:
        outcome.assignment = assignment
        return outcome
    fixed = form.solve(overrides)
    if fixed.status != "optimal":  # pragma: no cover - snapped point stays feasible
        outcome.assignment = assignment
        return outcome
    return fixed


# ---------------------------------------------------------------------------
# interchange dump


def write_lp_format(program: MixedProgram) -> str:
    """Render the program in CPLEX LP text format for external cross-checks."""
    program.validate()

    def term(coef: float, name: str) -> str:
        sign = "+" if coef >= 0 else "-"
        return f"{sign} {abs(coef):.12g} {name}"

    lines = ["Maximize" if program.sense == "maximize" else "Minimize"]
    obj = " ".join(term(coef, key) for key, coef in program.objective.items())
    lines.append(f" obj: {obj or '0 ' + program.columns[0].id}")
    lines.append("Subject To")
    for i, row in enumerate(program.rows):
        name = row.name or f"r{i}"
        body = " ".join(term(coef, key) for key, coef in row.coeffs.items())
        lines.append(f" {name}: {body or '0 ' + program.columns[0].id} {row.sense} {row.rhs:.12g}")
    lines.append("Bounds")
    for col in program.columns:
        lo = f"{col.lower:.12g}" if math.isfinite(col.lower) else "-inf"
        up = f"{col.upper:.12g}" if math.isfinite(col.upper) else "+inf"
        lines.append(f" {lo} <= {col.id} <= {up}")
    binaries = program.binary_ids()
    if binaries:
        lines.append("Binary")
        lines.extend(f" {bid}" for bid in binaries)
    lines.append("End")
    return "\n".join(lines) + "\n"
