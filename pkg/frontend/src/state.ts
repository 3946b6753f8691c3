/** Derived view state. Points and ranks are never computed here; they
 * arrive from the service and are only annotated for display.
 */

import type {
  AlternativeCard,
  ObjectiveValues,
  RankingDocument,
  SessionSummary,
} from "./api.js";

export function canOpenVoting(session: SessionSummary): boolean {
  return (
    session.state === "draft" &&
    session.alternatives.length >= 2 &&
    session.voters.length >= 1
  );
}

export function openBlockedReason(session: SessionSummary): string | null {
  if (session.state !== "draft") {
    return "voting can only be opened from a draft session";
  }
  if (session.alternatives.length < 2) {
    return "import at least two alternatives first";
  }
  if (session.voters.length < 1) {
    return "register at least one voter first";
  }
  return null;
}

export function closeBlockedReason(session: SessionSummary): string | null {
  if (session.state !== "voting") {
    return "only a voting session can be closed";
  }
  if (session.missing_voters.length > 0) {
    return `still waiting for ballots from: ${session.missing_voters.join(", ")}`;
  }
  return null;
}

/** "3 of 5 ballots in" - arrival counts only, never ballot contents. */
export function arrivalLine(session: SessionSummary): string {
  return `${session.ballot_count} of ${session.voters.length} ballots in`;
}

export interface ResultRow {
  alternative: string;
  points: number;
  rank: number;
  exAequo: boolean;
}

/** Annotate service entries with tie badges; order stays as served. */
export function resultRows(result: RankingDocument): ResultRow[] {
  const byRank = new Map<number, number>();
  for (const entry of result.entries) {
    byRank.set(entry.rank, (byRank.get(entry.rank) ?? 0) + 1);
  }
  return result.entries.map((entry) => ({
    alternative: entry.alternative,
    points: entry.points,
    rank: entry.rank,
    exAequo: (byRank.get(entry.rank) ?? 0) > 1,
  }));
}

export interface ComparisonRow {
  position: number;
  first: string;
  second: string;
  deltaProfit: number;
  deltaWaste: number;
  deltaUnmet: number;
}

/** Position-wise objective differences, first ranking minus second.
 *
 * Both rankings must cover the same alternatives and every alternative
 * must have objective values. Entries are compared in served order.
 */
export function comparisonRows(
  first: RankingDocument,
  second: RankingDocument,
  objectives: ReadonlyMap<string, ObjectiveValues>,
): ComparisonRow[] {
  const firstIds = first.entries.map((e) => e.alternative).sort();
  const secondIds = second.entries.map((e) => e.alternative).sort();
  if (
    firstIds.length !== secondIds.length ||
    firstIds.some((id, i) => id !== secondIds[i])
  ) {
    throw new Error("rankings cover different alternative sets");
  }
  for (const id of firstIds) {
    if (!objectives.has(id)) {
      throw new Error(`no objective values for alternative ${id}`);
    }
  }
  return first.entries.map((entry, i) => {
    const other = second.entries[i]!;
    const a = objectives.get(entry.alternative)!;
    const b = objectives.get(other.alternative)!;
    return {
      position: i + 1,
      first: entry.alternative,
      second: other.alternative,
      deltaProfit: a.profit - b.profit,
      deltaWaste: a.waste - b.waste,
      deltaUnmet: a.unmet - b.unmet,
    };
  });
}

export type ObjectiveName = "profit" | "waste" | "unmet";

/** Is this delta good news for the first ranking's pick?
 * Profit is better larger, waste and unmet better smaller.
 */
export function favorable(delta: number, objective: ObjectiveName): boolean {
  if (delta === 0) {
    return false;
  }
  return objective === "profit" ? delta > 0 : delta < 0;
}

export function objectivesByAlternative(
  cards: readonly AlternativeCard[],
): Map<string, ObjectiveValues> {
  return new Map(cards.map((card) => [card.id, card.objectives]));
}

/** Repeatedly refresh a session summary; callers stop it on teardown. */
export class SummaryPoller {
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly load: () => Promise<void>,
    private readonly intervalMs = 2000,
  ) {}

  start(): void {
    if (this.timer !== null) {
      return;
    }
    this.timer = setInterval(() => {
      void this.load();
    }, this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  get running(): boolean {
    return this.timer !== null;
  }
}
