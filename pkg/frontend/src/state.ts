// Pure view-state helpers: what the current session state allows, and how
// comments group into the fixed critic roster.

import type { CommentView, SessionStateName, SessionView } from "./types.js";

export interface ActionAvailability {
  canRunTest: boolean;
  canComment: boolean;
  canReflect: boolean;
  canFinalize: boolean;
}

export function actionAvailability(state: SessionStateName): ActionAvailability {
  return {
    canRunTest: state === "drafted",
    canComment: state === "awaiting_user" || state === "tested",
    // reflection needs the comment step done (or skipped) first
    canReflect: state === "tested",
    canFinalize: state === "finalized",
  };
}

export interface CommentatorCards {
  critical: CommentView[];
  favorable: CommentView[];
  neutral: CommentView[];
}

/** The five critic comments of the latest test pass, grouped by stance. */
export function latestCommentatorCards(view: SessionView): CommentatorCards {
  const agents = view.comments.filter((c) => c.stance !== "user");
  const latest = agents.slice(-5);
  return {
    critical: latest.filter((c) => c.stance === "critical"),
    favorable: latest.filter((c) => c.stance === "favorable"),
    neutral: latest.filter((c) => c.stance === "neutral"),
  };
}

export function userComments(view: SessionView): CommentView[] {
  return view.comments.filter((c) => c.stance === "user");
}

/** Module panels flagged as changed by the service's module-level diff. */
export function isChanged(view: SessionView, moduleKind: string): boolean {
  return view.changed_modules.includes(moduleKind);
}
