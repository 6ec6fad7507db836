// Optimistic local checks for instant feedback while drafting a move.
// Advisory only: the server's referee is authoritative and its verdicts
// replace anything concluded here.

import type { BallJson, GameKindJson, SessionView } from "./types.js";

export interface DraftWarning {
  rule: string;
  message: string;
}

function dist(a: number[], b: number[]): number {
  let s = 0;
  for (let i = 0; i < a.length; i++) s += (a[i] - b[i]) ** 2;
  return Math.sqrt(s);
}

export function checkBobDraft(view: SessionView, draft: BallJson): DraftWarning[] {
  const warnings: DraftWarning[] = [];
  const kind: GameKindJson = view.kind;
  if (draft.center.length !== kind.dimension) {
    return [{ rule: "dimension-mismatch", message: "draft has the wrong dimension" }];
  }
  if (kind.variant === "classical") {
    const A = view.pending_ball;
    if (A) {
      const expect = kind.beta * A.radius;
      if (Math.abs(draft.radius - expect) > 1e-9 * expect) {
        warnings.push({
          rule: "radius-ratio",
          message: `radius must equal beta*r_i' = ${expect}`,
        });
      }
      if (dist(draft.center, A.center) + draft.radius > A.radius * (1 + 1e-9)) {
        warnings.push({ rule: "containment", message: "ball leaves Alice's ball" });
      }
    }
    return warnings;
  }
  const B = view.current_ball;
  const floor = kind.beta * B.radius;
  if (draft.radius < floor * (1 - 1e-9)) {
    warnings.push({
      rule: "radius-ratio",
      message: `radius ${draft.radius} below beta*r_i = ${floor}`,
    });
  }
  if (dist(draft.center, B.center) + draft.radius > B.radius * (1 + 1e-9)) {
    warnings.push({ rule: "containment", message: "ball leaves the current ball" });
  }
  return warnings;
}
