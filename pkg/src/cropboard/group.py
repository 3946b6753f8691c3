"""Weighted Borda aggregation over complete strict rankings.

Each ballot ranks every alternative exactly once, best first, and carries
a positive voter weight.  An alternative at 1-based position k on a ballot
earns weight * (n - k) points; group rank is by total points descending
with dense ranks, so a tie at rank 7 is followed by rank 8.
"""

from __future__ import annotations

from dataclasses import dataclass

from cropboard.model import ObjectiveTriple


class GroupError(Exception):
    pass


@dataclass(frozen=True)
class Ballot:
    voter_id: str
    weight: float
    ranking: tuple[str, ...]


@dataclass(frozen=True)
class BallotIssue:
    code: str
    message: str


@dataclass(frozen=True)
class RankedEntry:
    alternative: str
    points: float
    rank: int


@dataclass(frozen=True)
class GroupRanking:
    entries: tuple[RankedEntry, ...]

    def position_order(self) -> list[str]:
        return [e.alternative for e in self.entries]

    def rank_of(self, alternative: str) -> int:
        for e in self.entries:
            if e.alternative == alternative:
                return e.rank
        raise GroupError(f"unknown alternative {alternative!r}")


@dataclass(frozen=True)
class ComparisonRow:
    position: int
    first: str
    second: str
    delta_profit: float
    delta_waste: float
    delta_unmet: float


@dataclass(frozen=True)
class RankingComparison:
    rows: tuple[ComparisonRow, ...]


def validate_ballot(ballot: Ballot, alternatives: set[str]) -> list[BallotIssue]:
    """Issues for an incomplete, repeating, unknown, or non-positive ballot.

    An empty list means the ballot is a valid weighted strict order over
    the alternative set.
    """
    issues: list[BallotIssue] = []
    if not ballot.weight > 0:
        issues.append(
            BallotIssue("NONPOSITIVE_WEIGHT", f"weight {ballot.weight!r} must be > 0")
        )
    seen: set[str] = set()
    repeated: set[str] = set()
    unknown: set[str] = set()
    for alt in ballot.ranking:
        if alt in seen and alt not in repeated:
            repeated.add(alt)
            issues.append(BallotIssue("REPEATED", f"alternative {alt!r} ranked twice"))
        seen.add(alt)
        if alt not in alternatives and alt not in unknown:
            unknown.add(alt)
            issues.append(BallotIssue("UNKNOWN", f"alternative {alt!r} not offered"))
    for alt in sorted(alternatives - seen):
        issues.append(BallotIssue("INCOMPLETE", f"alternative {alt!r} not ranked"))
    return issues


def borda_scores(alternatives: set[str], ballots: list[Ballot]) -> dict[str, float]:
    """Total weighted points per alternative over all ballots."""
    if not alternatives:
        raise GroupError("no alternatives to score")
    for ballot in ballots:
        issues = validate_ballot(ballot, alternatives)
        if issues:
            detail = "; ".join(f"{i.code}: {i.message}" for i in issues)
            raise GroupError(f"invalid ballot from {ballot.voter_id!r}: {detail}")
    n = len(alternatives)
    points = {alt: 0.0 for alt in sorted(alternatives)}
    for ballot in ballots:
        for k, alt in enumerate(ballot.ranking, start=1):
            points[alt] += ballot.weight * (n - k)
    return points


def rank_by_points(points: dict[str, float]) -> GroupRanking:
    """Dense ranking by points descending, ties broken by id for display only."""
    ordered = sorted(points.items(), key=lambda item: (-item[1], item[0]))
    entries: list[RankedEntry] = []
    rank = 0
    previous: float | None = None
    for alt, score in ordered:
        if previous is None or score != previous:
            rank += 1
            previous = score
        entries.append(RankedEntry(alternative=alt, points=score, rank=rank))
    return GroupRanking(entries=tuple(entries))


def compare_rankings(
    r1: GroupRanking,
    r2: GroupRanking,
    objectives: dict[str, ObjectiveTriple],
) -> RankingComparison:
    """Position-by-position objective differences, first ranking minus second.

    Tie groups are expanded in their listed order, so row p pairs the p-th
    entry of each ranking.
    """
    ids1 = r1.position_order()
    ids2 = r2.position_order()
    if set(ids1) != set(ids2):
        raise GroupError("rankings cover different alternative sets")
    missing = set(ids1) - set(objectives)
    if missing:
        raise GroupError(f"no objective values for {sorted(missing)}")
    rows = []
    for position, (a, b) in enumerate(zip(ids1, ids2), start=1):
        oa, ob = objectives[a], objectives[b]
        rows.append(
            ComparisonRow(
                position=position,
                first=a,
                second=b,
                delta_profit=oa.profit - ob.profit,
                delta_waste=oa.waste - ob.waste,
                delta_unmet=oa.unmet - ob.unmet,
            )
        )
    return RankingComparison(rows=tuple(rows))


def ranking_to_document(ranking: GroupRanking) -> dict:
    return {
        "schema_version": 1,
        "kind": "group-ranking",
        "entries": [
            {"alternative": e.alternative, "points": float(e.points), "rank": e.rank}
            for e in ranking.entries
        ],
    }


def ranking_from_document(doc: dict) -> GroupRanking:
    if doc.get("kind") != "group-ranking":
        raise GroupError(f"expected a group-ranking document, got {doc.get('kind')!r}")
    entries = []
    for idx, raw in enumerate(doc.get("entries", [])):
        where = f"entries[{idx}]"
        alt = raw.get("alternative")
        points = raw.get("points")
        rank = raw.get("rank")
        if not isinstance(alt, str) or not alt:
            raise GroupError(f"{where}: alternative must be a non-empty string")
        if not isinstance(points, (int, float)) or isinstance(points, bool):
            raise GroupError(f"{where}: points must be a number")
        if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
            raise GroupError(f"{where}: rank must be a positive integer")
        entries.append(RankedEntry(alternative=alt, points=float(points), rank=rank))
    return GroupRanking(entries=tuple(entries))


def comparison_to_document(comparison: RankingComparison) -> dict:
    return {
        "schema_version": 1,
        "kind": "ranking-comparison",
        "rows": [
            {
                "position": r.position,
                "first": r.first,
                "second": r.second,
                "delta_profit": float(r.delta_profit),
                "delta_waste": float(r.delta_waste),
                "delta_unmet": float(r.delta_unmet),
            }
            for r in comparison.rows
        ],
    }


def ballots_to_document(ballots: list[Ballot]) -> dict:
    return {
        "schema_version": 1,
        "kind": "ballot-set",
        "ballots": [
            {
                "voter_id": b.voter_id,
                "weight": float(b.weight),
                "ranking": list(b.ranking),
            }
            for b in ballots
        ],
    }


def ballots_from_document(doc: dict) -> list[Ballot]:
    if doc.get("kind") != "ballot-set":
        raise GroupError(f"expected a ballot-set document, got {doc.get('kind')!r}")
    ballots = []
    for idx, raw in enumerate(doc.get("ballots", [])):
        where = f"ballots[{idx}]"
        voter = raw.get("voter_id")
        weight = raw.get("weight")
        ranking = raw.get("ranking")
        if not isinstance(voter, str) or not voter:
            raise GroupError(f"{where}: voter_id must be a non-empty string")
        if not isinstance(weight, (int, float)) or isinstance(weight, bool):
            raise GroupError(f"{where}: weight must be a number")
        if not isinstance(ranking, list) or not all(
            isinstance(alt, str) for alt in ranking
        ):
            raise GroupError(f"{where}: ranking must be a list of ids")
        ballots.append(Ballot(voter_id=voter, weight=float(weight), ranking=tuple(ranking)))
    return ballots
