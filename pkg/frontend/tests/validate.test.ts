import { describe, expect, it } from "vitest";

import { checkBobDraft } from "../src/validate.js";
import type { SessionView } from "../src/types.js";

function hawView(): SessionView {
  return {
    id: "s", kind: { variant: "haw", dimension: 2, beta: 0.1 },
    engine_side: "alice", turn: "bob", index: 1, finished: false,
    current_ball: { center: [0, 0], radius: 1 },
    pending_ball: null,
    pending_slabs: [{ normal: [1, 0], offset: 0.5, halfwidth: 0.1 }],
    stage_data: null, base_radius: 1, transcript: [],
  };
}

describe("checkBobDraft", () => {
  it("warns before submission when the radius is below beta*r_i", () => {
    const warnings = checkBobDraft(hawView(), { center: [0.2, 0], radius: 0.05 });
    expect(warnings.map((w) => w.rule)).toEqual(["radius-ratio"]);
  });

  it("warns when the draft leaves the current ball", () => {
    const warnings = checkBobDraft(hawView(), { center: [0.95, 0], radius: 0.2 });
    expect(warnings.map((w) => w.rule)).toEqual(["containment"]);
  });

  it("accepts a legal draft silently", () => {
    expect(checkBobDraft(hawView(), { center: [-0.3, 0.2], radius: 0.1 })).toEqual([]);
  });

  it("classical drafts must match beta * r_i' exactly", () => {
    const view = hawView();
    view.kind = { variant: "classical", dimension: 2, beta: 0.5, alpha: 0.5 };
    view.pending_ball = { center: [0.1, 0], radius: 0.5 };
    expect(checkBobDraft(view, { center: [0.1, 0], radius: 0.2 })
      .map((w) => w.rule)).toEqual(["radius-ratio"]);
    expect(checkBobDraft(view, { center: [0.1, 0], radius: 0.25 })).toEqual([]);
  });

  it("flags dimension mismatches", () => {
    expect(checkBobDraft(hawView(), { center: [0.1], radius: 0.1 })
      .map((w) => w.rule)).toEqual(["dimension-mismatch"]);
  });
});
