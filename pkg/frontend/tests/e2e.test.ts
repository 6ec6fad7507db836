// End-to-end: spawn the real backend, play a full HAW match as Bob against
// the countable-set-avoiding Alice, and check the UI-side contracts: server
// rejections surface verbatim and replays build identical scene graphs.

import { spawn, ChildProcess, execSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { buildScene } from "../src/scene.js";
import { checkBobDraft } from "../src/validate.js";
import { rejectionBanner } from "../src/state.js";
import type { SessionView } from "../src/types.js";

const PORT = 8900 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;

function havePython(): boolean {
  try {
    execSync("python3 -c 'import quadlab'", { stdio: "ignore" });
    return true;
  } catch {
    return false;
  }
}

const enabled = havePython();
let server: ChildProcess | null = null;
let dataDir = "";

async function waitReady(timeoutMs = 20000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const r = await fetch(`${BASE}/jobs/none`);
      if (r.status === 404) return;
    } catch {
      // not up yet
    }
    await new Promise((res) => setTimeout(res, 150));
  }
  throw new Error("backend did not come up");
}

beforeAll(async () => {
  if (!enabled) return;
  dataDir = mkdtempSync(join(tmpdir(), "quadlab-ui-"));
  server = spawn("python3", ["-m", "quadlab.cli", "serve", "--port", String(PORT),
                             "--data-dir", dataDir], { stdio: "ignore" });
  await waitReady();
}, 30000);

afterAll(() => {
  server?.kill();
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

describe.skipIf(!enabled)("full match against the live backend", () => {
  const api = new ApiClient(BASE);
  let view: SessionView;

  it("creates a session; engine Alice moves first", async () => {
    view = await api.createSession({
      kind: { variant: "haw", dimension: 1, beta: 0.1 },
      initial_ball: { center: [0], radius: 1 },
      engine_side: "alice",
      engine_strategy: {
        kind: "avoid_countable",
        targets: [...Array(40)].map((_, i) => [(i - 20) / 20]),
      },
    });
    expect(view.turn).toBe("bob");
    expect(view.pending_slabs).toHaveLength(1);
  });

  it("surfaces the server rejection verbatim", async () => {
    const draft = { center: [0.5], radius: 0.05 };
    // local advisory check already warns...
    expect(checkBobDraft(view, draft).map((w) => w.rule)).toContain("radius-ratio");
    // ...and the server verdict text is shown untouched
    const outcome = await api.postMove(view.id, { type: "ball", ...draft });
    expect(outcome.ok).toBe(false);
    if (!outcome.ok) {
      expect(outcome.error.rule).toBe("radius-ratio");
      const direct = await fetch(`${BASE}/sessions/${view.id}/moves`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ move: { type: "ball", ...draft } }),
      });
      const raw = await direct.json();
      expect(rejectionBanner(outcome.error))
        .toBe(`rejected (${raw.rule}): ${raw.message}`);
    }
  });

  it("plays a full match as Bob", async () => {
    for (let round = 0; round < 25; round++) {
      const slab = view.pending_slabs[0];
      const B = view.current_ball;
      const r = 0.1 * B.radius;
      // place the ball on the far side of the slab from the target
      let c = B.center[0] + 0.6 * (B.radius - r);
      const gap = Math.abs(c - slab.offset / slab.normal[0]);
      if (gap < slab.halfwidth + r) c = B.center[0] - 0.6 * (B.radius - r);
      expect(checkBobDraft(view, { center: [c], radius: r })).toEqual([]);
      const outcome = await api.postMove(view.id, { type: "ball", center: [c], radius: r });
      expect(outcome.ok).toBe(true);
      if (outcome.ok) view = outcome.view;
      expect(view.turn).toBe("bob"); // engine Alice already replied
    }
    expect(view.index).toBe(26);
  }, 30000);

  it("alice mode: human slabs against the engine Bob", async () => {
    let v = await api.createSession({
      kind: { variant: "haw", dimension: 1, beta: 0.1 },
      initial_ball: { center: [0], radius: 1 },
      engine_side: "bob",
      engine_strategy: { kind: "random", seed: 5 },
    });
    expect(v.turn).toBe("alice");
    for (let round = 0; round < 5; round++) {
      const hw = 0.1 * v.current_ball.radius;
      const outcome = await api.postMove(v.id, {
        type: "slab", normal: [1], offset: v.current_ball.center[0], halfwidth: hw,
      });
      expect(outcome.ok).toBe(true);
      if (outcome.ok) v = outcome.view;
      expect(v.turn).toBe("alice"); // engine Bob already answered
    }
    const scene = buildScene(v);
    expect(scene.nodes.filter((n) => n.kind === "interval").length).toBe(6);
  });

  it("replay renders a structurally identical scene graph", async () => {
    const again = await api.getSession(view.id);
    expect(again.transcript).toEqual(view.transcript);
    for (let frame = 0; frame <= again.transcript.length - 1; frame += 7) {
      expect(buildScene(again, frame)).toEqual(buildScene(view, frame));
    }
    expect(buildScene(again)).toEqual(buildScene(view));
    const scene = buildScene(again);
    expect(scene.badge).toBe("bob to move");
    expect(scene.nodes.filter((n) => n.kind === "interval").length).toBe(26);
  });
});
