// View-state container.  The session snapshot is replaced only by server
// responses (server authority); drafts and banners are local affordances.

import type { ApiErrorBody, BallJson, SessionView } from "./types.js";
import { checkBobDraft, DraftWarning } from "./validate.js";

export interface ViewState {
  session: SessionView | null;
  draft: BallJson | null;
  draftWarnings: DraftWarning[];
  banner: string | null;
  frame: number | "live";
  pendingRequest: boolean;
}

export function initialState(): ViewState {
  return {
    session: null,
    draft: null,
    draftWarnings: [],
    banner: null,
    frame: "live",
    pendingRequest: false,
  };
}

export function applyServerView(state: ViewState, view: SessionView): ViewState {
  return { ...state, session: view, draft: null, draftWarnings: [], pendingRequest: false };
}

export function setDraft(state: ViewState, draft: BallJson | null): ViewState {
  const warnings = state.session && draft ? checkBobDraft(state.session, draft) : [];
  return { ...state, draft, draftWarnings: warnings };
}

export function rejectionBanner(error: ApiErrorBody): string {
  // the server's reason is shown verbatim
  return `rejected (${error.rule}): ${error.message}`;
}

export function applyRejection(state: ViewState, error: ApiErrorBody): ViewState {
  return { ...state, banner: rejectionBanner(error), pendingRequest: false };
}

export function setFrame(state: ViewState, frame: number | "live"): ViewState {
  return { ...state, frame };
}
