/** End-to-end: boot the real annotation server, drive three scripted annotators
 * through the UI's session machine over a 12-item queue, then check that the
 * label store is complete and the dashboard's kappa matches the service's
 * (and an independent direct-formula oracle) to two decimals.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Api } from "../src/api.js";
import { dashboardView } from "../src/dashboard.js";
import { AnnotationSession } from "../src/session.js";
import { CATEGORY_LABELS, LABELS, type Label } from "../src/types.js";

const ANNOTATORS = ["ann1", "ann2", "ann3"] as const;

/** Who says what about each item: unanimous, 2-1 splits, and 3-way scatter. */
const PLAN: Record<string, readonly [Label, Label, Label]> = {
  q01: ["Comparison", "Comparison", "Comparison"],
  q02: ["Transactional", "Transactional", "Transactional"],
  q03: ["Informational", "Informational", "Informational"],
  q04: ["Navigational", "Navigational", "Navigational"],
  q05: ["Comparison", "Comparison", "Transactional"],
  q06: ["Transactional", "Transactional", "Comparison"],
  q07: ["Informational", "Informational", "Support"],
  q08: ["Navigational", "Navigational", "Transactional"],
  q09: ["Support", "Support", "NotProduct"],
  q10: ["Comparison", "Informational", "Transactional"],
  q11: ["Navigational", "Support", "Transactional"],
  q12: ["Informational", "NotProduct", "Transactional"],
};

/** Fleiss kappa straight from the definition, independent of the service. */
function fleissOracle(plan: Record<string, readonly Label[]>): number {
  const rows = Object.values(plan).map((labels) =>
    CATEGORY_LABELS.map((category) => labels.filter((label) => label === category).length),
  );
  const nItems = rows.length;
  const nRaters = rows[0]!.reduce((a, b) => a + b, 0);
  const total = nItems * nRaters;
  const shares = CATEGORY_LABELS.map(
    (_, j) => rows.reduce((sum, row) => sum + row[j]!, 0) / total,
  );
  const expected = shares.reduce((sum, share) => sum + share * share, 0);
  const observed =
    rows.reduce(
      (sum, row) =>
        sum + (row.reduce((s, count) => s + count * count, 0) - nRaters) / (nRaters * (nRaters - 1)),
      0,
    ) / nItems;
  return (observed - expected) / (1 - expected);
}

function logLine(qid: string, minute: number, query: string): string {
  return JSON.stringify({
    query_id: qid,
    session_id: `s${Math.ceil(minute / 4)}`,
    timestamp: `2024-03-01T10:${String(minute).padStart(2, "0")}:00Z`,
    query,
    ads_shown: minute % 3,
    clicks: [
      {
        url: `https://example.com/${qid}`,
        snippet: `result for ${query}`,
        dwell_seconds: 20.5 + minute,
        order: 1,
      },
    ],
  });
}

const QUERIES: Record<string, string> = {
  q01: "acme x1 vs zenith z3",
  q02: "buy acme x1 online",
  q03: "acme x1 battery life",
  q04: "acme official store",
  q05: "best budget phone comparison",
  q06: "zenith z3 checkout",
  q07: "how to reset zenith z3",
  q08: "zenith support portal",
  q09: "acme x1 warranty claim",
  q10: "phone deals this week",
  q11: "zenith z3 account login",
  q12: "weather in springfield",
};

let workDir: string;
let server: ChildProcess | null = null;
let serverLog = "";
let baseUrl = "";
let api: Api;
const storePath = () => join(workDir, "labels.jsonl");

async function waitForServer(base: string): Promise<void> {
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      await new Api(base).labelChoices();
      return;
    } catch {
      if (Date.now() > deadline) {
        throw new Error(`annotation server did not come up; output:\n${serverLog}`);
      }
      await new Promise((resolve) => setTimeout(resolve, 250));
    }
  }
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "annotation-e2e-"));
  const qids = Object.keys(PLAN);
  writeFileSync(
    join(workDir, "log.jsonl"),
    qids.map((qid, i) => logLine(qid, i + 1, QUERIES[qid]!)).join("\n") + "\n",
  );
  writeFileSync(
    join(workDir, "sample.tsv"),
    qids.map((qid, i) => `${qid}\t${i % 4}`).join("\n") + "\n",
  );

  const port = 8900 + (process.pid % 500);
  const distDir = fileURLToPath(new URL("../dist", import.meta.url));
  server = spawn(
    "queryintent",
    [
      "serve-annotation",
      "--log", join(workDir, "log.jsonl"),
      "--sample", join(workDir, "sample.tsv"),
      "--store", storePath(),
      "--annotators", ANNOTATORS.join(","),
      "--port", String(port),
      "--ui", distDir,
    ],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  server.stdout?.on("data", (chunk: Buffer) => (serverLog += chunk.toString()));
  server.stderr?.on("data", (chunk: Buffer) => (serverLog += chunk.toString()));

  baseUrl = `http://127.0.0.1:${port}`;
  api = new Api(baseUrl);
  await waitForServer(baseUrl);
});

afterAll(async () => {
  if (server) {
    server.kill("SIGTERM");
    await new Promise((resolve) => server!.once("exit", resolve));
  }
  rmSync(workDir, { recursive: true, force: true });
});

describe("annotation end to end", () => {
  it("serves the built single-page UI", async () => {
    const page = await fetch(`${baseUrl}/`);
    const html = await page.text();
    expect(page.status).toBe(200);
    expect(html).toContain('<div id="app">');
    expect(html).toContain('src="./main.js"');
  });

  it("offers the seven fixed label choices, Skip last", async () => {
    const { labels } = await api.labelChoices();
    expect(labels).toEqual([...LABELS]);
    expect(labels[labels.length - 1]).toBe("Skip");
  });

  it("reports insufficient data before anyone labels", async () => {
    const [agreement, progress] = [await api.agreement(), await api.progress()];
    expect(agreement.kappa).toBeNull();
    expect(dashboardView(agreement, progress).kappaDisplay).toBe("insufficient data");
    expect(progress.statuses["pending"]).toBe(12);
  });

  it("three scripted annotators work their queues to completion", async () => {
    for (const [index, annotator] of ANNOTATORS.entries()) {
      const session = new AnnotationSession(api, annotator);
      await session.start();
      let guard = 0;
      while (session.getState().phase !== "done") {
        const state = session.getState();
        expect(state.phase).toBe("labeling");
        expect(state.error).toBeNull();
        const qid = state.item!.query_id;
        await session.choose(PLAN[qid]![index]);
        guard += 1;
        if (guard > 20) throw new Error(`annotator ${annotator} never finished`);
      }
      expect(session.getState().labeled).toBe(12);
      expect(session.getState().remaining).toBe(0);
    }
  });

  it("leaves a complete label store", async () => {
    const progress = await api.progress();
    expect(progress.n_items).toBe(12);
    expect(progress.statuses).toEqual({ pending: 0, partially_labeled: 0, complete: 12 });
    for (const annotator of ANNOTATORS) {
      expect(progress.annotators[annotator]).toEqual({ labeled: 12, total: 12 });
    }

    // The store on disk holds one event per (item, annotator) pair, all from the plan.
    const events = readFileSync(storePath(), "utf-8")
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line) as { query_id: string; annotator_id: string; label: string });
    expect(events).toHaveLength(36);
    for (const event of events) {
      const annIndex = ANNOTATORS.indexOf(event.annotator_id as (typeof ANNOTATORS)[number]);
      expect(annIndex).toBeGreaterThanOrEqual(0);
      expect(event.label).toBe(PLAN[event.query_id]![annIndex]);
    }
  });

  it("dashboard kappa equals the service kappa and the direct-formula oracle to 2 decimals", async () => {
    const [agreement, progress] = [await api.agreement(), await api.progress()];
    const oracle = fleissOracle(PLAN);

    // Service value (rounded to 6 places on the wire) against the oracle.
    expect(agreement.kappa).not.toBeNull();
    expect(Math.abs(agreement.kappa! - oracle)).toBeLessThan(1e-6);

    // What the dashboard renders, against both.
    const view = dashboardView(agreement, progress);
    expect(view.kappaDisplay).toBe(agreement.kappa!.toFixed(2));
    expect(view.kappaDisplay).toBe(oracle.toFixed(2));

    // Label tallies come straight from the plan.
    const expectedCounts = new Map<string, number>();
    for (const labels of Object.values(PLAN)) {
      for (const label of labels) {
        expectedCounts.set(label, (expectedCounts.get(label) ?? 0) + 1);
      }
    }
    for (const row of view.labels) {
      expect(row.count).toBe(expectedCounts.get(row.label) ?? 0);
    }

    // Consensus keeps majority items and drops three-way ties.
    expect(agreement.consensus).toEqual({
      q01: "Comparison",
      q02: "Transactional",
      q03: "Informational",
      q04: "Navigational",
      q05: "Comparison",
      q06: "Transactional",
      q07: "Informational",
      q08: "Navigational",
      q09: "Support",
    });
  });
});
