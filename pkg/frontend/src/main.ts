// Browser entry point: create or join a session, draft Bob moves by
// clicking the board, submit, and scrub through the recorded match.

import { ApiClient } from "./api.js";
import { buildScene } from "./scene.js";
import { drawScene, fitViewport } from "./render.js";
import {
  applyRejection, applyServerView, initialState, setDraft, setFrame, ViewState,
} from "./state.js";
import type { BallJson, MoveJson, SessionView } from "./types.js";

const canvas = document.getElementById("board") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const banner = document.getElementById("banner")!;
const warnings = document.getElementById("warnings")!;
const scrubber = document.getElementById("scrubber") as HTMLInputElement;
const radiusInput = document.getElementById("draft-radius") as HTMLInputElement;

const api = new ApiClient("");
let state: ViewState = initialState();

function update(next: ViewState): void {
  state = next;
  const view = state.session;
  banner.textContent = state.banner ?? "";
  warnings.textContent = state.draftWarnings
    .map((w) => `${w.rule}: ${w.message}`).join("\n");
  if (!view) return;
  const frame = state.frame === "live" ? undefined : state.frame;
  const scene = buildScene(view, frame);
  scrubber.max = String(scene.frames);
  if (state.frame === "live") scrubber.value = String(scene.frames);
  drawScene(ctx, scene, canvas.width, canvas.height);
  if (state.draft) {
    const vp = fitViewport(scene, canvas.width, canvas.height);
    ctx.strokeStyle = "#06c";
    ctx.setLineDash([4, 3]);
    ctx.beginPath();
    const [x, y] = state.draft.center;
    ctx.arc(vp.cx + x * vp.scale,
            view.kind.dimension === 1 ? vp.cy : vp.cy - y * vp.scale,
            state.draft.radius * vp.scale, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.setLineDash([]);
  }
}

async function newSession(): Promise<void> {
  const variant = (document.getElementById("variant") as HTMLSelectElement).value;
  const dim = Number((document.getElementById("dim") as HTMLSelectElement).value);
  const beta = Number((document.getElementById("beta") as HTMLInputElement).value);
  const strategy = (document.getElementById("strategy") as HTMLSelectElement).value;
  const playAlice = strategy === "engine_bob";
  const engine_strategy = playAlice
    ? { kind: "random", seed: Math.floor(Math.random() * 1e6) }
    : strategy === "stage_window"
      ? { kind: "stage_window", tau: 1.0, oracle: { kind: "through_center" } }
      : strategy === "avoid_countable"
        ? { kind: "avoid_countable",
            targets: [...Array(32)].map((_, i) => Array(dim).fill((i - 16) / 16)) }
        : { kind: "dummy" };
  try {
    const view = await api.createSession({
      kind: { variant, dimension: dim, beta },
      initial_ball: { center: Array(dim).fill(0), radius: 1.0 },
      engine_side: playAlice ? "bob" : "alice",
      engine_strategy,
    });
    update({ ...applyServerView(state, view), banner: `session ${view.id}` });
  } catch (err) {
    update({ ...state, banner: String(err) });
  }
}

async function submitDraft(): Promise<void> {
  const view = state.session;
  if (!view || state.pendingRequest) return;
  const humanIsAlice = view.engine_side === "bob";
  const move = humanIsAlice ? draftSlabMove(view) : draftBallMove();
  if (!move) return;
  update({ ...state, pendingRequest: true });
  let outcome;
  try {
    outcome = await api.postMove(view.id, move);
  } catch (err) {
    // network failure: keep the draft, offer a retry, never fork state
    update({ ...state, pendingRequest: false,
             banner: `request failed, retry: ${String(err)}` });
    return;
  }
  if (outcome.ok) {
    update({ ...applyServerView(state, outcome.view), banner: "accepted" });
  } else {
    update(applyRejection(state, outcome.error));
  }
}

function draftBallMove(): MoveJson | null {
  return state.draft ? { type: "ball", ...state.draft } : null;
}

function draftSlabMove(view: SessionView): MoveJson | null {
  // Alice mode: the draft center is the slab's foot point along the chosen axis
  if (!state.draft) return null;
  const axis = Number((document.getElementById("slab-axis") as HTMLSelectElement).value);
  const normal = Array(view.kind.dimension).fill(0);
  normal[axis] = 1;
  const offset = state.draft.center[axis];
  const halfwidth = Math.min(Number(radiusInput.value),
                             view.kind.beta * view.current_ball.radius);
  const slab = { normal, offset, halfwidth };
  return view.kind.variant === "hpw"
    ? { type: "slabs", slabs: [slab] }
    : { type: "slab", ...slab };
}

canvas.addEventListener("click", (ev) => {
  const view = state.session;
  if (!view || view.finished) return;
  const scene = buildScene(view);
  const vp = fitViewport(scene, canvas.width, canvas.height);
  const x = (ev.offsetX - vp.cx) / vp.scale;
  const y = (vp.cy - ev.offsetY) / vp.scale;
  const center = view.kind.dimension === 1 ? [x] : [x, y];
  const draft: BallJson = { center, radius: Number(radiusInput.value) };
  update(setDraft(state, draft));
});

document.getElementById("new-session")!.addEventListener("click", newSession);
document.getElementById("submit")!.addEventListener("click", submitDraft);
scrubber.addEventListener("input", () => {
  const v = Number(scrubber.value);
  const live = state.session && v >= state.session.transcript.length - 1;
  update(setFrame(state, live ? "live" : v));
});

update(state);
