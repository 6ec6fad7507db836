// Pure scene-graph construction from a session transcript.  The transcript
// is the single source of truth: nothing here re-derives legality, it only
// lays out what the server recorded.  Renderers draw the returned structure;
// tests compare it structurally.

import {
  isHeader, MoveJson, SessionView, SlabJson, StageInfo, TranscriptMoveRow,
  TranscriptRow,
} from "./types.js";

export type SceneNode =
  | { kind: "disk"; center: number[]; radius: number; role: BallRole }
  | { kind: "strip"; normal: number[]; offset: number; halfwidth: number; live: boolean }
  | { kind: "interval"; lo: number; hi: number; role: BallRole }
  | { kind: "gap"; lo: number; hi: number; live: boolean }
  | { kind: "marker"; point: number[]; label: string }
  | { kind: "row"; cells: string[] };

export type BallRole = "current" | "history" | "alice";

export interface WindowPanel {
  stage: number;
  window: number[];
  emitted: number;
  surviving: number | null;
}

export interface Scene {
  mode: "line" | "plane" | "table";
  frame: number;
  frames: number;
  badge: string;
  quota: string | null;
  panel: WindowPanel | null;
  nodes: SceneNode[];
}

interface Replayed {
  balls: { center: number[]; radius: number; player: "alice" | "bob" }[];
  liveSlabs: SlabJson[];
  turn: "alice" | "bob";
  stage: StageInfo | null;
  surviving: number | null;
}

function slabsOf(move: MoveJson): SlabJson[] {
  if (move.type === "slab") return [move];
  if (move.type === "slabs") return move.slabs;
  return [];
}

function replayTo(rows: TranscriptRow[], frame: number): Replayed {
  const header = rows[0];
  if (!isHeader(header)) throw new Error("transcript must start with its header");
  const out: Replayed = {
    balls: [{ center: header.initial.center, radius: header.initial.radius, player: "bob" }],
    liveSlabs: [],
    turn: "alice",
    stage: null,
    surviving: null,
  };
  const moves = rows.slice(1, frame + 1) as TranscriptMoveRow[];
  for (const row of moves) {
    if (!row.verdict.startsWith("accepted")) continue;
    if (row.player === "alice") {
      if (row.move.type === "ball") {
        out.balls.push({ center: row.move.center, radius: row.move.radius, player: "alice" });
      } else {
        out.liveSlabs = slabsOf(row.move);
        if (row.move.type === "slabs" && row.move.stage) out.stage = row.move.stage;
      }
      out.turn = "bob";
    } else {
      if (row.move.type === "ball") {
        out.balls.push({ center: row.move.center, radius: row.move.radius, player: "bob" });
      }
      out.liveSlabs = [];
      out.surviving = row.surviving_slabs ?? null;
      out.turn = "alice";
    }
  }
  return out;
}

function quotaLabel(variant: string, n: number): string | null {
  if (n === 0) return null;
  if (variant === "hpw") return `avoid ≥ ${Math.ceil(n / 2)}`;
  if (variant === "haw") return "avoid 1";
  return null;
}

const fmt = (x: number) => Number(x.toPrecision(6)).toString();

/** Build the scene for one frame of the transcript (frame = number of move
 *  rows applied; defaults to the whole recording). */
export function buildScene(view: SessionView, frame?: number): Scene {
  const rows = view.transcript;
  const frames = rows.length - 1;
  const at = frame === undefined ? frames : Math.max(0, Math.min(frame, frames));
  const replayed = replayTo(rows, at);
  const dim = view.kind.dimension;
  const finished = view.finished && at === frames;

  const badge = finished
    ? "finished"
    : `${replayed.turn} to move`;
  const quota = replayed.liveSlabs.length
    ? quotaLabel(view.kind.variant, replayed.liveSlabs.length)
    : null;
  const panel: WindowPanel | null = replayed.stage
    ? {
        stage: replayed.stage.j,
        window: replayed.stage.window,
        emitted: replayed.stage.emitted,
        surviving: replayed.surviving,
      }
    : null;

  const nodes: SceneNode[] = [];
  if (dim === 1) {
    replayed.balls.forEach((b, i) => {
      nodes.push({
        kind: "interval",
        lo: b.center[0] - b.radius,
        hi: b.center[0] + b.radius,
        role: roleOf(b.player, i, replayed.balls.length),
      });
    });
    for (const s of replayed.liveSlabs) {
      const c = s.offset / s.normal[0];
      nodes.push({ kind: "gap", lo: c - s.halfwidth, hi: c + s.halfwidth, live: true });
    }
  } else if (dim === 2) {
    replayed.balls.forEach((b, i) => {
      nodes.push({
        kind: "disk",
        center: b.center,
        radius: b.radius,
        role: roleOf(b.player, i, replayed.balls.length),
      });
    });
    for (const s of replayed.liveSlabs) {
      nodes.push({
        kind: "strip",
        normal: s.normal,
        offset: s.offset,
        halfwidth: s.halfwidth,
        live: true,
      });
    }
  } else {
    nodes.push({ kind: "row", cells: ["turn", "player", "move", "radius"] });
    const moves = rows.slice(1, at + 1) as TranscriptMoveRow[];
    for (const row of moves) {
      nodes.push({
        kind: "row",
        cells: [
          String(row.turn),
          row.player,
          row.move.type,
          row.move.type === "ball" ? fmt(row.move.radius) : "-",
        ],
      });
    }
  }
  if (finished) {
    const last = replayed.balls[replayed.balls.length - 1];
    nodes.push({ kind: "marker", point: last.center, label: "limit" });
  }
  return {
    mode: dim === 1 ? "line" : dim === 2 ? "plane" : "table",
    frame: at,
    frames,
    badge,
    quota,
    panel,
    nodes,
  };
}

function roleOf(player: "alice" | "bob", i: number, total: number): BallRole {
  if (i === total - 1 && player === "bob") return "current";
  return player === "alice" ? "alice" : "history";
}
