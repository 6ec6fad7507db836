import { describe, expect, it } from "vitest";

import { buildScene } from "../src/scene.js";
import type { SessionView, TranscriptRow } from "../src/types.js";

function makeView(partial: Partial<SessionView> & { transcript: TranscriptRow[] }): SessionView {
  return {
    id: "s1",
    kind: { variant: "haw", dimension: 2, beta: 0.1 },
    engine_side: "alice",
    turn: "alice",
    index: 1,
    finished: false,
    current_ball: { center: [0, 0], radius: 1 },
    pending_ball: null,
    pending_slabs: [],
    stage_data: null,
    base_radius: 1,
    ...partial,
  };
}

const header: TranscriptRow = {
  header: true,
  kind: { variant: "haw", dimension: 2, beta: 0.1 },
  initial: { center: [0, 0], radius: 1 },
};

describe("buildScene", () => {
  it("fresh session: one ball, alice-to-move badge", () => {
    const scene = buildScene(makeView({ transcript: [header] }));
    expect(scene.badge).toBe("alice to move");
    expect(scene.nodes).toEqual([
      { kind: "disk", center: [0, 0], radius: 1, role: "current" },
    ]);
  });

  it("hpw alice move with three slabs: three strips and the avoid-2 quota", () => {
    const hpwHeader: TranscriptRow = {
      header: true,
      kind: { variant: "hpw", dimension: 2, beta: 0.05 },
      initial: { center: [0, 0], radius: 1 },
    };
    const slabs = [0, 1, 2].map((k) => ({
      normal: [1, 0], offset: 0.1 * k, halfwidth: 0.01,
    }));
    const view = makeView({
      kind: { variant: "hpw", dimension: 2, beta: 0.05 },
      transcript: [hpwHeader, {
        turn: 1, player: "alice", verdict: "accepted",
        move: { type: "slabs", slabs,
                stage: { j: 1, i_j: 1, r_ij: 1, window: [0, 1, 2], emitted: 3 } },
        radii: { before: 1, after: 1 },
      }],
    });
    const scene = buildScene(view);
    expect(scene.quota).toBe("avoid ≥ 2");
    expect(scene.nodes.filter((n) => n.kind === "strip")).toHaveLength(3);
    expect(scene.panel).toEqual({ stage: 1, window: [0, 1, 2], emitted: 3, surviving: null });
    expect(scene.badge).toBe("bob to move");
  });

  it("1d balls render as intervals with removed gaps", () => {
    const h: TranscriptRow = {
      header: true,
      kind: { variant: "haw", dimension: 1, beta: 0.1 },
      initial: { center: [0], radius: 1 },
    };
    const view = makeView({
      kind: { variant: "haw", dimension: 1, beta: 0.1 },
      transcript: [h, {
        turn: 1, player: "alice", verdict: "accepted",
        move: { type: "slab", normal: [1], offset: 0.5, halfwidth: 0.1 },
        radii: { before: 1, after: 1 },
      }],
    });
    const scene = buildScene(view);
    expect(scene.mode).toBe("line");
    expect(scene.nodes).toContainEqual({ kind: "interval", lo: -1, hi: 1, role: "current" });
    expect(scene.nodes).toContainEqual({ kind: "gap", lo: 0.4, hi: 0.6, live: true });
  });

  it("finished replay places the limit marker and is frame-scrubbable", () => {
    const rows: TranscriptRow[] = [header,
      { turn: 1, player: "alice", verdict: "accepted",
        move: { type: "slab", normal: [1, 0], offset: 0.5, halfwidth: 0.05 },
        radii: { before: 1, after: 1 } },
      { turn: 1, player: "bob", verdict: "accepted",
        move: { type: "ball", center: [-0.2, 0.1], radius: 0.2 },
        radii: { before: 1, after: 0.2 } },
    ];
    const view = makeView({ transcript: rows, finished: true,
                            current_ball: { center: [-0.2, 0.1], radius: 0.2 } });
    const full = buildScene(view);
    expect(full.nodes).toContainEqual({ kind: "marker", point: [-0.2, 0.1], label: "limit" });
    const mid = buildScene(view, 1);
    expect(mid.nodes.some((n) => n.kind === "marker")).toBe(false);
    expect(mid.nodes.filter((n) => n.kind === "strip")).toHaveLength(1);
    expect(full.nodes.filter((n) => n.kind === "strip")).toHaveLength(0); // consumed
  });

  it("replaying the same transcript yields structurally identical scenes", () => {
    const rows: TranscriptRow[] = [header,
      { turn: 1, player: "alice", verdict: "accepted",
        move: { type: "slab", normal: [0.6, 0.8], offset: 0.25, halfwidth: 0.04 },
        radii: { before: 1, after: 1 } },
      { turn: 1, player: "bob", verdict: "accepted",
        move: { type: "ball", center: [0.3, -0.4], radius: 0.15 },
        radii: { before: 1, after: 0.15 }, surviving_slabs: 0 },
    ];
    const view = makeView({ transcript: rows });
    for (let frame = 0; frame <= 2; frame++) {
      expect(buildScene(view, frame)).toEqual(buildScene(view, frame));
    }
    expect(buildScene(view)).toEqual(buildScene(makeView({ transcript: [...rows] })));
  });

  it("dimension > 2 falls back to the table view", () => {
    const h: TranscriptRow = {
      header: true,
      kind: { variant: "hpw", dimension: 5, beta: 0.05 },
      initial: { center: [0, 0, 0, 0, 0], radius: 1 },
    };
    const view = makeView({
      kind: { variant: "hpw", dimension: 5, beta: 0.05 },
      transcript: [h, {
        turn: 1, player: "alice", verdict: "accepted",
        move: { type: "slabs", slabs: [{ normal: [1, 0, 0, 0, 0], offset: 0, halfwidth: 0.01 }] },
        radii: { before: 1, after: 1 },
      }],
    });
    const scene = buildScene(view);
    expect(scene.mode).toBe("table");
    expect(scene.nodes[0]).toEqual({ kind: "row", cells: ["turn", "player", "move", "radius"] });
    expect(scene.nodes).toHaveLength(2);
  });

  it("rejected rows do not advance the geometry", () => {
    const rows: TranscriptRow[] = [header,
      { turn: 1, player: "alice", verdict: "accepted",
        move: { type: "slab", normal: [1, 0], offset: 0.5, halfwidth: 0.05 },
        radii: { before: 1, after: 1 } },
      { turn: 1, player: "bob", verdict: "rejected:radius-ratio",
        move: { type: "ball", center: [0, 0], radius: 0.01 } },
    ];
    const scene = buildScene(makeView({ transcript: rows }));
    expect(scene.nodes.filter((n) => n.kind === "disk")).toHaveLength(1);
    expect(scene.badge).toBe("bob to move");
  });
});
