/** End-to-end: drive a real session service through the typed client and
 * the ballot editor, then cross-check the group ranking against the
 * command-line aggregator on the same ballots.
 */
import { execFile, spawn, type ChildProcess } from "node:child_process";
import { mkdtemp, readFile, rm, writeFile } from "node:fs/promises";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiError, ServiceClient, type SessionSummary } from "../src/api.js";
import { createEditor, moveItem, type BallotEditor } from "../src/ballot.js";
import { closeBlockedReason, resultRows } from "../src/state.js";

const run = promisify(execFile);

// frozen three-objective values shared with the backend test suite
const TRIPLES: Record<string, [number, number, number]> = {
  A: [148334625, 5316020, 207317999],
  B: [148302280, 5315998, 201749612],
  C: [148003481, 6417520, 195841392],
  D: [146849751, 11193326, 189933239],
  E: [145326260, 14017213, 184025050],
  F: [142518888, 11213768, 178116854],
  G: [136863913, 8410330, 172208666],
  H: [146572577, 0, 204769167],
  I: [135083010, 0, 182724221],
  J: [129129328, 25230996, 154484078],
};

const VOTERS: [string, number, string[]][] = [
  ["facilitator", 1, [..."AIGBHDCFEJ"]],
  ["buyer-1", 5, [..."AGIHBDFCEJ"]],
  ["buyer-2", 5, [..."AIGBDHEFCJ"]],
  ["grower-1", 3, [..."AIGBHDCEFJ"]],
  ["grower-2", 3, [..."IGAHBDCFEJ"]],
];

// hand tally: each ballot position beats 9 - i others, times the weight
const EXPECTED_ORDER = [..."AIGBHDCFEJ"];
const EXPECTED_POINTS = [147, 134, 127, 94, 88, 73, 36, 36, 30, 0];
const EXPECTED_RANKS = [1, 2, 3, 4, 5, 6, 7, 7, 8, 9];

function frontDoc(): unknown {
  return {
    schema_version: 1,
    kind: "pareto-front",
    solutions: Object.entries(TRIPLES).map(([label, [profit, waste, unmet]], index) => ({
      label,
      objectives: { profit, waste, unmet },
      plan: {
        planted: [
          { farmer: "north-coop", variety: "round", area: 1.5 + index },
          { farmer: "river-coop", variety: "plum", area: 0.25 },
        ],
      },
    })),
  };
}

/** Reorder with editor ops only: put `target[i]` at slot i, left to right. */
function arrangeBallot(ids: string[], target: string[]): BallotEditor {
  let editor = createEditor(ids);
  target.forEach((id, position) => {
    editor = moveItem(editor, editor.order.indexOf(id), position);
  });
  expect([...editor.order]).toEqual(target);
  return editor;
}

async function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

let workDir = "";
let server: ChildProcess | null = null;
let serverLog = "";
let client: ServiceClient;

beforeAll(async () => {
  workDir = await mkdtemp(join(tmpdir(), "webui-e2e-"));
  const port = await freePort();
  server = spawn(
    "python3",
    ["-m", "cropboard.cli", "serve", "--state-dir", join(workDir, "state"), "--listen", `127.0.0.1:${port}`],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  server.stdout?.on("data", (chunk: Buffer) => {
    serverLog += chunk.toString();
  });
  server.stderr?.on("data", (chunk: Buffer) => {
    serverLog += chunk.toString();
  });
  client = new ServiceClient(`http://127.0.0.1:${port}`);
  const deadline = Date.now() + 60_000;
  for (;;) {
    if (server.exitCode !== null) {
      throw new Error(`server exited early (${server.exitCode}): ${serverLog}`);
    }
    try {
      await client.listSessions();
      break;
    } catch {
      if (Date.now() > deadline) {
        throw new Error(`server never came up: ${serverLog}`);
      }
      await new Promise((r) => setTimeout(r, 250));
    }
  }
});

afterAll(async () => {
  if (server && server.exitCode === null) {
    server.kill("SIGTERM");
    await new Promise((resolve) => {
      server!.once("exit", resolve);
      setTimeout(resolve, 5000);
    });
  }
  if (workDir) {
    await rm(workDir, { recursive: true, force: true });
  }
});

describe("full session lifecycle", () => {
  let sessionId = "";
  const tokens = new Map<string, string>();

  it("creates a draft session", async () => {
    const session = await client.createSession();
    sessionId = session.id;
    expect(session.state).toBe("draft");
    expect(session.alternatives).toEqual([]);
    const listing = await client.listSessions();
    expect(listing.sessions).toContain(sessionId);
  });

  it("imports a ten-solution front with objectives served verbatim", async () => {
    const session = await client.importAlternatives(sessionId, frontDoc());
    expect(session.alternatives.map((a) => a.id)).toEqual(Object.keys(TRIPLES));
    session.alternatives.forEach((card, index) => {
      const [profit, waste, unmet] = TRIPLES[card.id]!;
      expect(card.objectives).toEqual({ profit, waste, unmet });
      expect(card.planted_summary).toEqual({
        by_farmer: [
          { farmer: "north-coop", area: 1.5 + index },
          { farmer: "river-coop", area: 0.25 },
        ],
        by_variety: [
          { variety: "plum", area: 0.25 },
          { variety: "round", area: 1.5 + index },
        ],
        total: 1.75 + index,
      });
    });
  });

  it("registers five weighted voters and hands out tokens", async () => {
    for (const [voterId, weight] of VOTERS) {
      const grant = await client.registerVoter(sessionId, voterId, weight);
      expect(grant.voter_id).toBe(voterId);
      expect(grant.token.length).toBeGreaterThan(8);
      tokens.set(voterId, grant.token);
    }
    const session = await client.getSession(sessionId);
    expect(session.voters).toEqual(
      VOTERS.map(([voter_id, weight]) => ({ voter_id, weight })),
    );
    expect(new Set(tokens.values()).size).toBe(VOTERS.length);
  });

  it("refuses a result before voting closes", async () => {
    await client.openVoting(sessionId);
    const failure = await client.getResult(sessionId).catch((e: unknown) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).code).toBe("WRONG_STATE");
    expect((failure as ApiError).status).toBe(409);
  });

  it("rejects a made-up token", async () => {
    const failure = await client
      .submitBallot(sessionId, "not-a-token", EXPECTED_ORDER)
      .catch((e: unknown) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).code).toBe("BAD_TOKEN");
  });

  it("collects ballots built through the reorder-only editor", async () => {
    const session = await client.getSession(sessionId);
    const ids = session.alternatives.map((a) => a.id);

    // the first voter submits a throwaway order, then replaces it below
    const decoy = arrangeBallot(ids, [...ids].reverse());
    await client.submitBallot(sessionId, tokens.get("facilitator")!, [...decoy.order]);

    let mid: SessionSummary = await client.getSession(sessionId);
    expect(mid.ballot_count).toBe(1);
    expect(mid.missing_voters).toEqual(["buyer-1", "buyer-2", "grower-1", "grower-2"]);
    expect(closeBlockedReason(mid)).toMatch(/still waiting/);

    for (const [voterId, , order] of VOTERS) {
      const editor = arrangeBallot(ids, order);
      await client.submitBallot(sessionId, tokens.get(voterId)!, [...editor.order]);
    }
    mid = await client.getSession(sessionId);
    expect(mid.ballot_count).toBe(VOTERS.length);
    expect(mid.missing_voters).toEqual([]);
    expect(closeBlockedReason(mid)).toBeNull();
  });

  it("closes and serves the frozen weighted ranking", async () => {
    const closed = await client.closeSession(sessionId, false);
    expect(closed.state).toBe("closed");
    const result = await client.getResult(sessionId);
    expect(result.kind).toBe("group-ranking");
    expect(result.entries.map((e) => e.alternative)).toEqual(EXPECTED_ORDER);
    expect(result.entries.map((e) => e.points)).toEqual(EXPECTED_POINTS);
    expect(result.entries.map((e) => e.rank)).toEqual(EXPECTED_RANKS);
    // the replaced first ballot must not leak into the tally: points for
    // the decoy's winner J stay at the bottom
    expect(result.entries[9]!.alternative).toBe("J");

    const rows = resultRows(result);
    expect(rows.filter((r) => r.exAequo).map((r) => r.alternative)).toEqual(["C", "F"]);
  });

  it("matches the command-line aggregation of the same ballots", async () => {
    const ballotsDoc = {
      schema_version: 1,
      kind: "ballot-set",
      ballots: VOTERS.map(([voter_id, weight, ranking]) => ({
        voter_id,
        weight,
        ranking,
      })),
    };
    const ballotsPath = join(workDir, "ballots.json");
    const alternativesPath = join(workDir, "alternatives.json");
    const outDir = join(workDir, "rank-out");
    await writeFile(ballotsPath, JSON.stringify(ballotsDoc, null, 2));
    await writeFile(alternativesPath, JSON.stringify(frontDoc(), null, 2));
    await run("python3", [
      "-m",
      "cropboard.cli",
      "rank",
      "--ballots",
      ballotsPath,
      "--alternatives",
      alternativesPath,
      "--out",
      outDir,
    ]);
    const fromCli = JSON.parse(await readFile(join(outDir, "ranking.json"), "utf8")) as {
      entries: unknown;
    };
    const fromService = await client.getResult(sessionId);
    expect(fromService.entries).toEqual(fromCli.entries);
  });

  it("exports a closed-session snapshot", async () => {
    const response = await fetch(client.exportUrl(sessionId));
    expect(response.status).toBe(200);
    const snapshot = JSON.parse(await response.text()) as { kind: string; state: string };
    expect(snapshot.kind).toBe("session-export");
    expect(snapshot.state).toBe("closed");
  });
});
