// Wire types mirroring the service's JSON bodies.

export interface BallJson {
  center: number[];
  radius: number;
}

export interface SlabJson {
  normal: number[];
  offset: number;
  halfwidth: number;
}

export interface GameKindJson {
  variant: "classical" | "haw" | "hpw";
  dimension: number;
  beta: number;
  alpha?: number | null;
  beta0?: number | null;
}

export interface StageInfo {
  j: number;
  i_j: number;
  r_ij: number;
  window: number[];
  emitted: number;
}

export type MoveJson =
  | ({ type: "ball" } & BallJson)
  | ({ type: "slab" } & SlabJson)
  | { type: "slabs"; slabs: SlabJson[]; stage?: StageInfo };

export interface TranscriptHeader {
  header: true;
  kind: GameKindJson;
  initial: BallJson;
  engine_side?: string;
}

export interface TranscriptMoveRow {
  turn: number;
  player: "alice" | "bob";
  move: MoveJson;
  verdict: string;
  radii?: { before: number; after: number };
  surviving_slabs?: number | null;
  detail?: string;
}

export type TranscriptRow = TranscriptHeader | TranscriptMoveRow;

export function isHeader(row: TranscriptRow): row is TranscriptHeader {
  return (row as TranscriptHeader).header === true;
}

export interface SessionView {
  id: string;
  kind: GameKindJson;
  engine_side: string;
  turn: "alice" | "bob";
  index: number;
  finished: boolean;
  current_ball: BallJson;
  pending_ball: BallJson | null;
  pending_slabs: SlabJson[];
  stage_data: StageInfo | null;
  base_radius: number;
  transcript: TranscriptRow[];
  engine_moves?: MoveJson[];
}

export interface ApiErrorBody {
  rule: string;
  message: string;
  detail?: unknown;
}
