// Prompt library rendering: versioned listing plus a read-only canonical
// view. The displayed and copied text is the API's rendering, verbatim;
// nothing is re-rendered client-side.

import { escapeHtml } from "./dashboard.js";
import type { PromptListing, PromptRecord } from "./types.js";

export function renderLibraryList(prompts: PromptListing[]): string {
  if (prompts.length === 0) {
    return `<p class="empty">No stored prompts yet. Save one with the CLI or the API.</p>`;
  }
  return (
    `<ul class="prompt-list">` +
    prompts
      .map(
        (prompt) =>
          `<li data-id="${escapeHtml(prompt.id)}">` +
          `<a href="#/library/${escapeHtml(prompt.id)}">${escapeHtml(prompt.role_name)}</a>` +
          ` <span class="version">v${escapeHtml(prompt.latest_version)}</span></li>`,
      )
      .join("") +
    `</ul>`
  );
}

export function renderVersionPicker(listing: PromptListing, selected: string): string {
  return (
    `<select id="version-picker">` +
    listing.versions
      .map(
        (version) =>
          `<option value="${escapeHtml(version)}"${version === selected ? " selected" : ""}>` +
          `${escapeHtml(version)}</option>`,
      )
      .join("") +
    `</select>`
  );
}

/** The exact text shown in the viewer and placed on the clipboard. */
export function promptClipboardText(record: PromptRecord): string {
  return record.text;
}

export function renderPromptView(record: PromptRecord): string {
  return (
    `<section class="prompt-view" data-id="${escapeHtml(record.id)}" data-version="${escapeHtml(record.version)}">` +
    `<h2>${escapeHtml(record.role_name)}</h2>` +
    `<button id="copy-prompt">Copy to clipboard</button>` +
    `<pre id="prompt-text">${escapeHtml(promptClipboardText(record))}</pre>` +
    `</section>`
  );
}

export function renderLibraryEmptyState(code: string): string {
  return `<p class="empty" data-code="${escapeHtml(code)}">Nothing here: the store has no such prompt.</p>`;
}
