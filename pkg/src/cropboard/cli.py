"""Command-line front door.

solve    scenario file -> labeled non-dominated solutions (JSON, CSV, PNG)
rank     ballot file + alternatives file -> weighted Borda group ranking
compare  two ranking files + objectives -> per-position differences
serve    run the session service against a state directory

Exit codes: 0 success, 1 domain error (invalid input content, infeasible
model, mismatched universes), 2 usage or IO error (missing files, bad
flags, busy port, unwritable state directory).
"""

from __future__ import annotations

import json
import socket
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import click

from cropboard.group import (
    GroupError,
    ballots_from_document,
    borda_scores,
    compare_rankings,
    comparison_to_document,
    rank_by_points,
    ranking_from_document,
    ranking_to_document,
)
from cropboard.model import ModelError, ObjectiveTriple
from cropboard.pareto import ParetoError, front_to_document, generate_front
from cropboard.report import (
    render_comparison,
    render_front,
    render_ranking,
    write_comparison_csv,
    write_front_csv,
    write_ranking_csv,
)
from cropboard.scenario import ScenarioError, parse_scenario
from cropboard.service import (
    ServiceError,
    SessionStore,
    create_app,
    parse_alternatives_document,
)
from cropboard.solver import NodeLimitExceeded, SolverError

_DOMAIN_ERRORS = (
    ScenarioError,
    ModelError,
    ParetoError,
    SolverError,
    NodeLimitExceeded,
    GroupError,
    ServiceError,
)


@dataclass(frozen=True)
class RunReport:
    solve_count: int
    skipped_cells: int
    wall_time: float
    front_size: int

    def lines(self) -> list[str]:
        return [
            f"front size: {self.front_size}",
            f"solve count: {self.solve_count}",
            f"skipped cells: {self.skipped_cells}",
            f"wall time: {self.wall_time:.2f}s",
        ]


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot read {path}: {exc.strerror or exc}", 2)
        raise AssertionError("unreachable")


def _read_json(path: Path) -> dict:
    text = _read_text(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"{path} is not valid JSON: {exc}", 1)
    if not isinstance(doc, dict):
        _fail(f"{path} must contain a JSON object", 1)
    return doc


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _load_alternative_records(path: Path) -> list[dict]:
    try:
        return parse_alternatives_document(_read_json(path))
    except ServiceError as exc:
        _fail(f"{path}: {exc.message}", 1)
        raise AssertionError("unreachable")


def _objectives_of(records: list[dict]) -> dict[str, ObjectiveTriple]:
    return {r["id"]: ObjectiveTriple(**r["objectives"]) for r in records}


@click.group()
def main() -> None:
    """Generate crop-plan fronts and run weighted group decisions."""


@main.command("solve")
@click.option(
    "--scenario",
    "scenario_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Scenario description (TOML).",
)
@click.option("--grid-size", default=10, show_default=True, type=click.IntRange(min=1))
@click.option(
    "--mode",
    default="diagonal",
    show_default=True,
    type=click.Choice(["diagonal", "full"]),
)
@click.option(
    "--out",
    "out_dir",
    required=True,
    type=click.Path(file_okay=False, path_type=Path),
    help="Output directory for front.json, front.csv, front.png.",
)
def solve_command(scenario_path: Path, grid_size: int, mode: str, out_dir: Path) -> None:
    """Generate the non-dominated solution set for a scenario."""
    text = _read_text(scenario_path)
    started = time.perf_counter()
    try:
        s = parse_scenario(text)
        front, front_report = generate_front(s, grid_size=grid_size, mode=mode)
        document = front_to_document(s, front)
    except _DOMAIN_ERRORS as exc:
        _fail(str(exc), 1)
        raise AssertionError("unreachable")
    report = RunReport(
        solve_count=front_report.solve_count,
        skipped_cells=len(front_report.skipped_cells),
        wall_time=time.perf_counter() - started,
        front_size=len(front),
    )

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_json(out_dir / "front.json", document)
        write_front_csv(front, out_dir / "front.csv")
        render_front(front, out_dir / "front.png")
    except OSError as exc:
        _fail(f"cannot write to {out_dir}: {exc.strerror or exc}", 2)
    for line in report.lines():
        click.echo(line)
    click.echo(f"wrote: {out_dir / 'front.json'}, front.csv, front.png")


@main.command("rank")
@click.option(
    "--ballots",
    "ballots_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Ballot-set document (JSON).",
)
@click.option(
    "--alternatives",
    "alternatives_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Front export or alternative-set document (JSON).",
)
@click.option(
    "--out",
    "out_dir",
    required=True,
    type=click.Path(file_okay=False, path_type=Path),
)
def rank_command(ballots_path: Path, alternatives_path: Path, out_dir: Path) -> None:
    """Aggregate weighted ballots into a group ranking."""
    try:
        ballots = ballots_from_document(_read_json(ballots_path))
    except GroupError as exc:
        _fail(str(exc), 1)
        raise AssertionError("unreachable")
    if not ballots:
        _fail(f"NO_BALLOTS: {ballots_path} contains no ballots", 1)
    records = _load_alternative_records(alternatives_path)
    try:
        scores = borda_scores({r["id"] for r in records}, ballots)
    except GroupError as exc:
        _fail(str(exc), 1)
        raise AssertionError("unreachable")
    ranking = rank_by_points(scores)

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_json(out_dir / "ranking.json", ranking_to_document(ranking))
        write_ranking_csv(ranking, out_dir / "ranking.csv")
        render_ranking(ranking, out_dir / "ranking.png")
    except OSError as exc:
        _fail(f"cannot write to {out_dir}: {exc.strerror or exc}", 2)
    click.echo(f"alternatives: {len(records)}")
    click.echo(f"ballots: {len(ballots)}")
    leaders = [e.alternative for e in ranking.entries if e.rank == 1]
    click.echo(f"leading: {', '.join(leaders)}")
    click.echo(f"wrote: {out_dir / 'ranking.json'}, ranking.csv, ranking.png")


@main.command("compare")
@click.argument(
    "ranking1", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
@click.argument(
    "ranking2", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
@click.option(
    "--alternatives",
    "alternatives_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Document providing objective values for every ranked id.",
)
@click.option(
    "--out",
    "out_dir",
    required=True,
    type=click.Path(file_okay=False, path_type=Path),
)
def compare_command(
    ranking1: Path, ranking2: Path, alternatives_path: Path, out_dir: Path
) -> None:
    """Position-by-position objective differences between two rankings."""
    records = _load_alternative_records(alternatives_path)
    try:
        first = ranking_from_document(_read_json(ranking1))
        second = ranking_from_document(_read_json(ranking2))
        comparison = compare_rankings(first, second, _objectives_of(records))
    except GroupError as exc:
        _fail(str(exc), 1)
        raise AssertionError("unreachable")

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_json(out_dir / "comparison.json", comparison_to_document(comparison))
        write_comparison_csv(comparison, out_dir / "comparison.csv")
        render_comparison(comparison, out_dir / "comparison.png")
    except OSError as exc:
        _fail(f"cannot write to {out_dir}: {exc.strerror or exc}", 2)
    click.echo(f"positions: {len(comparison.rows)}")
    click.echo(f"wrote: {out_dir / 'comparison.json'}, comparison.csv, comparison.png")


def _parse_listen(listen: str) -> tuple[str, int]:
    host, sep, raw_port = listen.rpartition(":")
    if not sep or not host:
        raise click.UsageError(f"--listen must be host:port, got {listen!r}")
    try:
        port = int(raw_port)
    except ValueError:
        raise click.UsageError(f"--listen port must be an integer, got {raw_port!r}")
    if not 0 < port < 65536:
        raise click.UsageError(f"--listen port out of range: {port}")
    return host, port


@main.command("serve")
@click.option(
    "--state-dir",
    "state_dir",
    required=True,
    type=click.Path(file_okay=False, path_type=Path),
)
@click.option("--listen", default="127.0.0.1:8000", show_default=True)
def serve_command(state_dir: Path, listen: str) -> None:
    """Run the group-decision session service until interrupted."""
    host, port = _parse_listen(listen)
    try:
        store = SessionStore(state_dir)
    except ServiceError as exc:
        _fail(exc.message, 2)
        raise AssertionError("unreachable")
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        _fail(f"cannot listen on {listen}: {exc.strerror or exc}", 2)
    finally:
        probe.close()

    import uvicorn

    click.echo(f"session state: {state_dir}")
    click.echo(f"listening on http://{host}:{port}")
    uvicorn.run(create_app(store), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
