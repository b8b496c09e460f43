// Dashboard rendering: pure HTML-string builders so they test without a DOM.

import { actionAvailability, isChanged, latestCommentatorCards } from "./state.js";
import type { CommentView, SessionView } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderModulePanels(view: SessionView): string {
  const draft = view.current_draft;
  if (!draft) {
    return `<p class="empty">No draft yet.</p>`;
  }
  return draft.modules
    .map((module) => {
      const changed = isChanged(view, module.kind);
      return (
        `<section class="module-panel${changed ? " changed" : ""}" data-kind="${escapeHtml(module.kind)}">` +
        `<h3>${escapeHtml(module.kind)}${changed ? ` <span class="badge">changed</span>` : ""}</h3>` +
        `<pre>${escapeHtml(module.text)}</pre>` +
        `</section>`
      );
    })
    .join("\n");
}

export function renderTranscript(view: SessionView): string {
  if (view.transcript.length === 0) {
    return `<p class="empty">No test dialogue yet.</p>`;
  }
  return view.transcript
    .map(
      (message) =>
        `<div class="chat-message ${message.role}">` +
        `<span class="who">${message.role}</span>` +
        `<p>${escapeHtml(message.content)}</p></div>`,
    )
    .join("\n");
}

function renderCard(comment: CommentView): string {
  const issues = comment.issues
    .map(
      (issue) =>
        `<li>${issue.module ? `<b>${escapeHtml(issue.module)}</b>: ` : ""}${escapeHtml(issue.text)}</li>`,
    )
    .join("");
  return (
    `<article class="commentator-card ${comment.stance}">` +
    `<header>${escapeHtml(comment.stance)} &middot; score ${comment.score ?? "-"}</header>` +
    `<ul>${issues || "<li>no issues raised</li>"}</ul></article>`
  );
}

/** Commentator cards in the fixed stance grouping: 2 critical, 2 favorable, 1 neutral. */
export function renderCommentatorCards(view: SessionView): string {
  const cards = latestCommentatorCards(view);
  if (
    cards.critical.length + cards.favorable.length + cards.neutral.length === 0
  ) {
    return `<p class="empty">No commentator feedback yet.</p>`;
  }
  return (
    `<div class="stance-group critical">${cards.critical.map(renderCard).join("")}</div>` +
    `<div class="stance-group favorable">${cards.favorable.map(renderCard).join("")}</div>` +
    `<div class="stance-group neutral">${cards.neutral.map(renderCard).join("")}</div>`
  );
}

export function renderActions(view: SessionView): string {
  const allowed = actionAvailability(view.state);
  const disabled = (ok: boolean) => (ok ? "" : " disabled");
  return (
    `<div class="actions" data-state="${view.state}">` +
    `<button id="run-test"${disabled(allowed.canRunTest)}>Run test pass</button>` +
    `<textarea id="comment-box" placeholder="Your comments on the latest test"${disabled(allowed.canComment)}></textarea>` +
    `<button id="submit-reflect"${disabled(allowed.canComment)}>Submit comments &amp; reflect</button>` +
    `<button id="finalize"${disabled(allowed.canFinalize)}>Finalize</button>` +
    `</div>`
  );
}

export function renderStatus(view: SessionView): string {
  const failure = view.failure_reason
    ? `<p class="banner error">${escapeHtml(view.failure_reason)}</p>`
    : "";
  return (
    `<header class="status">` +
    `<h2>${escapeHtml(view.brief.task_text)}</h2>` +
    `<p>session <code>${escapeHtml(view.session_id)}</code> &middot; state <b>${view.state}</b>` +
    ` &middot; iteration ${view.iteration} &middot; test passes ${view.test_passes}</p>` +
    failure +
    `</header>`
  );
}

export function renderDashboard(view: SessionView): string {
  return (
    renderStatus(view) +
    `<main class="dashboard">` +
    `<div class="col drafts">${renderModulePanels(view)}</div>` +
    `<div class="col transcript">${renderTranscript(view)}</div>` +
    `<div class="col feedback">${renderCommentatorCards(view)}${renderActions(view)}</div>` +
    `</main>`
  );
}

export function renderApiErrorBanner(code: string, message: string): string {
  return `<p class="banner error" data-code="${escapeHtml(code)}">${escapeHtml(code)}: ${escapeHtml(message)}</p>`;
}
