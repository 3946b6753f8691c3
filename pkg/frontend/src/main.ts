/** Application shell: hash routing, facilitator dashboard, voter screen. */

import {
  ApiError,
  ServiceClient,
  type RankingDocument,
  type SessionSummary,
} from "./api.js";
import { coversExactly, createEditor, dropOn, moveDown, moveUp, type BallotEditor } from "./ballot.js";
import {
  alternativeCardView,
  ballotEditorView,
  comparisonTable,
  el,
  errorBox,
  resultTable,
  stateBadge,
  voterTable,
} from "./dom.js";
import {
  arrivalLine,
  closeBlockedReason,
  comparisonRows,
  objectivesByAlternative,
  openBlockedReason,
  SummaryPoller,
} from "./state.js";

const SERVICE_URL_KEY = "cropboard-service-url";
const DEFAULT_SERVICE_URL = "http://127.0.0.1:8000";

function serviceUrl(): string {
  try {
    return localStorage.getItem(SERVICE_URL_KEY) ?? DEFAULT_SERVICE_URL;
  } catch {
    return DEFAULT_SERVICE_URL;
  }
}

function rememberServiceUrl(url: string): void {
  try {
    localStorage.setItem(SERVICE_URL_KEY, url);
  } catch {
    // per-browser convenience only
  }
}

function client(): ServiceClient {
  return new ServiceClient(serviceUrl());
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return `${error.code}: ${error.message}`;
  }
  return String(error);
}

function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

let activePoller: SummaryPoller | null = null;

function setPoller(poller: SummaryPoller | null): void {
  if (activePoller) {
    activePoller.stop();
  }
  activePoller = poller;
  if (activePoller) {
    activePoller.start();
  }
}

// --- home screen ---

function renderHome(root: HTMLElement): void {
  setPoller(null);
  clear(root);

  const urlInput = el("input", {
    type: "text",
    value: serviceUrl(),
    class: "service-url",
  }) as HTMLInputElement;
  urlInput.addEventListener("change", () => rememberServiceUrl(urlInput.value.trim()));

  const status = el("div", { class: "status" });
  const sessionList = el("ul", { class: "session-list" });

  const createButton = el("button", { type: "button" }, ["create session"]);
  createButton.addEventListener("click", async () => {
    clear(status);
    try {
      const session = await client().createSession();
      location.hash = `#/session/${session.id}`;
    } catch (error) {
      status.append(errorBox(describe(error)));
    }
  });

  const refreshButton = el("button", { type: "button" }, ["refresh list"]);
  const loadSessions = async () => {
    clear(status);
    clear(sessionList);
    try {
      const listing = await client().listSessions();
      if (listing.sessions.length === 0) {
        sessionList.append(el("li", { class: "empty" }, ["no sessions yet"]));
      }
      for (const id of listing.sessions) {
        const link = el("a", { href: `#/session/${id}` }, [id]);
        sessionList.append(el("li", {}, [link]));
      }
    } catch (error) {
      status.append(errorBox(describe(error)));
    }
  };
  refreshButton.addEventListener("click", () => {
    void loadSessions();
  });

  root.append(
    el("h1", {}, ["crop plan voting"]),
    el("section", { class: "panel" }, [
      el("label", {}, ["service URL ", urlInput]),
      createButton,
      refreshButton,
      status,
      sessionList,
    ]),
  );
  void loadSessions();
}

// --- facilitator dashboard ---

function renderDashboard(root: HTMLElement, sessionId: string): void {
  setPoller(null);
  clear(root);

  const api = client();
  const header = el("div", { class: "session-header" });
  const status = el("div", { class: "status" });
  const cards = el("div", { class: "card-grid" });
  const controls = el("div", { class: "controls" });
  const liveRegion = el("div", { class: "live" });
  const resultRegion = el("div", { class: "result" });
  const compareRegion = el("div", { class: "compare" });

  root.append(
    el("p", {}, [el("a", { href: "#/" }, ["← all sessions"])]),
    header,
    status,
    controls,
    liveRegion,
    resultRegion,
    cards,
    compareRegion,
  );

  let lastRendered = "";

  const refresh = async () => {
    let session: SessionSummary;
    try {
      session = await api.getSession(sessionId);
    } catch (error) {
      clear(status);
      status.append(errorBox(describe(error)));
      return;
    }
    const fingerprint = JSON.stringify(session);
    if (fingerprint === lastRendered) {
      return;
    }
    lastRendered = fingerprint;

    clear(header);
    header.append(el("h1", {}, [`session ${session.id} `, stateBadge(session)]));

    clear(cards);
    if (session.alternatives.length > 0) {
      cards.append(el("h2", {}, ["alternatives"]));
      for (const card of session.alternatives) {
        cards.append(alternativeCardView(card));
      }
    }

    clear(liveRegion);
    if (session.voters.length > 0) {
      liveRegion.append(el("h2", {}, ["voters"]), voterTable(session.voters));
    }
    if (session.state === "voting") {
      liveRegion.append(el("p", { class: "arrival" }, [arrivalLine(session)]));
    }

    clear(resultRegion);
    if (session.result) {
      resultRegion.append(el("h2", {}, ["group ranking"]), resultTable(session.result));
      const exportLink = el(
        "a",
        { href: api.exportUrl(session.id), target: "_blank" },
        ["download session export"],
      );
      resultRegion.append(el("p", {}, [exportLink]));
    }

    renderControls(session);
  };

  const act = async (action: () => Promise<unknown>, retry: () => void) => {
    clear(status);
    try {
      await action();
      lastRendered = "";
      await refresh();
    } catch (error) {
      const box = errorBox(describe(error));
      const retryButton = el("button", { type: "button", class: "retry" }, ["retry"]);
      retryButton.addEventListener("click", retry);
      box.append(" ", retryButton);
      status.append(box);
    }
  };

  const renderControls = (session: SessionSummary) => {
    clear(controls);

    if (session.state === "draft") {
      const importArea = el("textarea", {
        rows: "6",
        placeholder: "paste a front export or alternative-set document",
      }) as HTMLTextAreaElement;
      const importButton = el("button", { type: "button" }, ["import alternatives"]);
      const doImport = () =>
        void act(async () => {
          const document = JSON.parse(importArea.value) as unknown;
          await api.importAlternatives(session.id, document);
          importArea.value = "";
        }, doImport);
      importButton.addEventListener("click", doImport);
      controls.append(
        el("section", { class: "panel import-panel" }, [
          el("h2", {}, ["import alternatives"]),
          importArea,
          importButton,
        ]),
      );
    }

    if (session.state === "draft" || session.state === "voting") {
      const voterInput = el("input", { type: "text", placeholder: "voter id" }) as HTMLInputElement;
      const weightInput = el("input", {
        type: "number",
        value: "1",
        min: "0",
        step: "any",
      }) as HTMLInputElement;
      const registerButton = el("button", { type: "button" }, ["register voter"]);
      const tokenList = el("ul", { class: "token-list" });
      const doRegister = () =>
        void act(async () => {
          const grant = await api.registerVoter(
            session.id,
            voterInput.value.trim(),
            Number(weightInput.value),
          );
          const ballotLink = `#/vote/${session.id}/${grant.token}`;
          tokenList.append(
            el("li", {}, [
              `${grant.voter_id}: `,
              el("code", {}, [grant.token]),
              " ",
              el("a", { href: ballotLink }, ["ballot link"]),
            ]),
          );
          voterInput.value = "";
        }, doRegister);
      registerButton.addEventListener("click", doRegister);
      controls.append(
        el("section", { class: "panel voter-panel" }, [
          el("h2", {}, ["register voter"]),
          voterInput,
          weightInput,
          registerButton,
          el("p", { class: "hint" }, ["tokens appear once; hand them to the voters"]),
          tokenList,
        ]),
      );
    }

    if (session.state === "draft") {
      const openButton = el("button", { type: "button" }, ["open voting"]);
      const reason = openBlockedReason(session);
      if (reason) {
        openButton.setAttribute("disabled", "disabled");
        controls.append(el("p", { class: "hint" }, [reason]));
      }
      const doOpen = () => void act(() => api.openVoting(session.id), doOpen);
      openButton.addEventListener("click", doOpen);
      controls.append(openButton);
    }

    if (session.state === "voting") {
      const closeButton = el("button", { type: "button" }, ["close voting"]);
      const reason = closeBlockedReason(session);
      const doClose = () => void act(() => api.closeSession(session.id, false), doClose);
      closeButton.addEventListener("click", doClose);
      controls.append(closeButton);
      if (reason) {
        const forceButton = el("button", { type: "button", class: "danger" }, [
          "close without missing ballots",
        ]);
        const doForce = () => void act(() => api.closeSession(session.id, true), doForce);
        forceButton.addEventListener("click", doForce);
        controls.append(el("p", { class: "hint" }, [reason]), forceButton);
      }
    }

    clear(compareRegion);
    if (session.state === "closed" && session.result) {
      const otherInput = el("input", {
        type: "text",
        placeholder: "other closed session id",
      }) as HTMLInputElement;
      const compareButton = el("button", { type: "button" }, ["compare"]);
      const output = el("div", { class: "compare-output" });
      const doCompare = async () => {
        clear(output);
        try {
          const otherId = otherInput.value.trim();
          const [mine, theirs] = await Promise.all([
            api.getResult(session.id),
            api.getResult(otherId),
          ]);
          const rows = comparisonRows(
            mine,
            theirs,
            objectivesByAlternative(session.alternatives),
          );
          output.append(comparisonTable(rows));
        } catch (error) {
          output.append(errorBox(describe(error)));
        }
      };
      compareButton.addEventListener("click", () => {
        void doCompare();
      });
      compareRegion.append(
        el("section", { class: "panel" }, [
          el("h2", {}, ["compare with another session"]),
          otherInput,
          compareButton,
          output,
        ]),
      );
    }
  };

  void refresh();
  setPoller(new SummaryPoller(refresh));
}

// --- voter screen ---

function renderVoter(root: HTMLElement, sessionId: string, token: string): void {
  setPoller(null);
  clear(root);

  const api = client();
  const header = el("div", { class: "session-header" });
  const status = el("div", { class: "status" });
  const editorRegion = el("div", { class: "editor-region" });
  const cards = el("div", { class: "card-grid" });
  root.append(header, status, editorRegion, cards);

  let editor: BallotEditor | null = null;
  let submitted = false;

  const renderEditor = () => {
    if (!editor) {
      return;
    }
    const current = editor;
    clear(editorRegion);
    const list = ballotEditorView(current, {
      onMoveUp(id) {
        editor = moveUp(current, id);
        renderEditor();
      },
      onMoveDown(id) {
        editor = moveDown(current, id);
        renderEditor();
      },
      onDrop(draggedId, targetId) {
        editor = dropOn(current, draggedId, targetId);
        renderEditor();
      },
    });
    const submitButton = el("button", { type: "button" }, [
      submitted ? "resubmit ballot" : "submit ballot",
    ]);
    submitButton.addEventListener("click", async () => {
      clear(status);
      try {
        await api.submitBallot(sessionId, token, [...current.order]);
        submitted = true;
        status.append(
          el("p", { class: "confirmation" }, [
            "ballot stored; you can reorder and resubmit until the session closes",
          ]),
        );
        renderEditor();
      } catch (error) {
        if (error instanceof ApiError && error.code === "BAD_TOKEN") {
          accessDenied(root, "this ballot link is not valid for the session");
          return;
        }
        status.append(errorBox(describe(error)));
      }
    });
    editorRegion.append(
      el("h2", {}, ["your ranking, best first"]),
      el("p", { class: "hint" }, ["drag rows or use the arrows; the list always holds every solution"]),
      list,
      submitButton,
    );
  };

  const load = async () => {
    let session: SessionSummary;
    try {
      session = await api.getSession(sessionId);
    } catch (error) {
      clear(status);
      status.append(errorBox(describe(error)));
      return;
    }

    clear(header);
    header.append(el("h1", {}, [`ballot for session ${session.id} `, stateBadge(session)]));

    clear(cards);
    for (const card of session.alternatives) {
      cards.append(alternativeCardView(card));
    }

    if (session.state === "closed") {
      setPoller(null);
      clear(editorRegion);
      if (session.result) {
        editorRegion.append(
          el("h2", {}, ["voting has closed - group ranking"]),
          resultTable(session.result),
        );
      } else {
        editorRegion.append(el("p", {}, ["voting has closed"]));
      }
      return;
    }

    if (session.state !== "voting") {
      clear(editorRegion);
      editorRegion.append(el("p", {}, ["voting has not opened yet"]));
      return;
    }

    const ids = session.alternatives.map((card) => card.id);
    if (!editor || !coversExactly(editor, ids)) {
      editor = createEditor(ids);
      renderEditor();
    }
  };

  void load();
  setPoller(new SummaryPoller(load));
}

function accessDenied(root: HTMLElement, message: string): void {
  setPoller(null);
  clear(root);
  root.append(el("h1", {}, ["access denied"]), errorBox(message));
}

// --- routing ---

export function route(): void {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  const hash = location.hash || "#/";
  const voteMatch = /^#\/vote\/([^/]+)\/(.+)$/.exec(hash);
  if (voteMatch) {
    renderVoter(root, decodeURIComponent(voteMatch[1]!), decodeURIComponent(voteMatch[2]!));
    return;
  }
  const sessionMatch = /^#\/session\/([^/]+)$/.exec(hash);
  if (sessionMatch) {
    renderDashboard(root, decodeURIComponent(sessionMatch[1]!));
    return;
  }
  if (hash !== "#/" && hash !== "#") {
    accessDenied(root, `unknown page: ${hash}`);
    return;
  }
  renderHome(root);
}

window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", route);
