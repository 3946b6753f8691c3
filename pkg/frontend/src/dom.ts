/** DOM builders. Pure data in, elements out; event wiring via callbacks. */

import type { AlternativeCard, RankingDocument, SessionSummary, VoterRow } from "./api.js";
import type { BallotEditor } from "./ballot.js";
import { formatDelta, formatNumber, formatWeight, rankLabel } from "./format.js";
import { favorable, resultRows, type ComparisonRow } from "./state.js";

type Child = Node | string;

export function el(
  tag: string,
  attrs: Record<string, string> = {},
  children: Child[] = [],
): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function errorBox(message: string): HTMLElement {
  return el("div", { class: "error-box", role: "alert" }, [message]);
}

export function alternativeCardView(card: AlternativeCard): HTMLElement {
  const objectives = el("dl", { class: "objectives" }, [
    el("dt", {}, ["profit"]),
    el("dd", { "data-objective": "profit" }, [formatNumber(card.objectives.profit)]),
    el("dt", {}, ["waste"]),
    el("dd", { "data-objective": "waste" }, [formatNumber(card.objectives.waste)]),
    el("dt", {}, ["unmet"]),
    el("dd", { "data-objective": "unmet" }, [formatNumber(card.objectives.unmet)]),
  ]);
  const pieces: Child[] = [el("h3", { class: "card-label" }, [card.id]), objectives];
  if (card.planted_summary && card.planted_summary.by_farmer.length > 0) {
    const rows = card.planted_summary.by_farmer.map((entry) =>
      el("li", { "data-farmer": entry.farmer }, [
        `${entry.farmer}: ${formatNumber(entry.area)} ha`,
      ]),
    );
    pieces.push(
      el("div", { class: "planted" }, [
        el("h4", {}, ["planted area by farmer"]),
        el("ul", {}, rows),
        el("p", { class: "planted-total" }, [
          `total: ${formatNumber(card.planted_summary.total)} ha`,
        ]),
      ]),
    );
  }
  return el("article", { class: "alternative-card", "data-alternative": card.id }, pieces);
}

export function voterTable(voters: readonly VoterRow[]): HTMLElement {
  const rows = voters.map((voter) =>
    el("tr", {}, [
      el("td", {}, [voter.voter_id]),
      el("td", {}, [formatWeight(voter.weight)]),
    ]),
  );
  return el("table", { class: "voter-table" }, [
    el("thead", {}, [el("tr", {}, [el("th", {}, ["voter"]), el("th", {}, ["weight"])])]),
    el("tbody", {}, rows),
  ]);
}

export interface BallotEditorHandlers {
  onMoveUp(id: string): void;
  onMoveDown(id: string): void;
  onDrop(draggedId: string, targetId: string): void;
}

/** The drag-ordered ballot list. Rows can only change places. */
export function ballotEditorView(
  editor: BallotEditor,
  handlers: BallotEditorHandlers,
): HTMLElement {
  const rows = editor.order.map((id, index) => {
    const up = el("button", { type: "button", class: "move-up" }, ["▲"]);
    up.addEventListener("click", () => handlers.onMoveUp(id));
    const down = el("button", { type: "button", class: "move-down" }, ["▼"]);
    down.addEventListener("click", () => handlers.onMoveDown(id));

    const row = el(
      "li",
      { class: "ballot-row", draggable: "true", "data-alternative": id },
      [el("span", { class: "position" }, [String(index + 1)]), el("span", { class: "label" }, [id]), up, down],
    );
    row.addEventListener("dragstart", (event) => {
      (event as DragEvent).dataTransfer?.setData("text/plain", id);
    });
    row.addEventListener("dragover", (event) => {
      event.preventDefault();
    });
    row.addEventListener("drop", (event) => {
      event.preventDefault();
      const dragged = (event as DragEvent).dataTransfer?.getData("text/plain");
      if (dragged) {
        handlers.onDrop(dragged, id);
      }
    });
    return row;
  });
  return el("ol", { class: "ballot-editor" }, rows);
}

export function resultTable(result: RankingDocument): HTMLElement {
  const rows = resultRows(result).map((row) =>
    el("tr", { "data-alternative": row.alternative }, [
      el("td", { class: "rank" }, [
        rankLabel(row.rank, row.exAequo),
      ]),
      el("td", { class: "alternative" }, [row.alternative]),
      el("td", { class: "points" }, [formatNumber(row.points)]),
    ]),
  );
  return el("table", { class: "result-table" }, [
    el("thead", {}, [
      el("tr", {}, [el("th", {}, ["rank"]), el("th", {}, ["solution"]), el("th", {}, ["points"])]),
    ]),
    el("tbody", {}, rows),
  ]);
}

export function comparisonTable(rows: readonly ComparisonRow[]): HTMLElement {
  const body = rows.map((row) => {
    const cells = [
      el("td", {}, [String(row.position)]),
      el("td", {}, [row.first]),
      el("td", {}, [row.second]),
    ];
    const deltas: Array<[number, "profit" | "waste" | "unmet"]> = [
      [row.deltaProfit, "profit"],
      [row.deltaWaste, "waste"],
      [row.deltaUnmet, "unmet"],
    ];
    for (const [delta, objective] of deltas) {
      cells.push(
        el(
          "td",
          {
            class: favorable(delta, objective) ? "delta favorable" : "delta",
            "data-delta": objective,
          },
          [formatDelta(delta)],
        ),
      );
    }
    return el("tr", {}, cells);
  });
  return el("table", { class: "comparison-table" }, [
    el("thead", {}, [
      el("tr", {}, [
        el("th", {}, ["position"]),
        el("th", {}, ["first"]),
        el("th", {}, ["second"]),
        el("th", {}, ["Δ profit"]),
        el("th", {}, ["Δ waste"]),
        el("th", {}, ["Δ unmet"]),
      ]),
    ]),
    el("tbody", {}, body),
  ]);
}

export function stateBadge(session: SessionSummary): HTMLElement {
  return el("span", { class: `state-badge state-${session.state}` }, [session.state]);
}
