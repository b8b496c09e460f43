// Browser entry point: hash routing between the session dashboard and the
// prompt library, with DOM wiring around the pure render functions.

import { ApiClient, ApiError } from "./api.js";
import { StudioController } from "./controller.js";
import { renderApiErrorBanner, renderDashboard } from "./dashboard.js";
import {
  renderLibraryEmptyState,
  renderLibraryList,
  renderPromptView,
  renderVersionPicker,
  promptClipboardText,
} from "./library.js";
import type { SessionView } from "./types.js";

const api = new ApiClient("");
const root = document.getElementById("app") as HTMLElement;

function banner(code: string, message: string): void {
  const holder = document.createElement("div");
  holder.innerHTML = renderApiErrorBanner(code, message);
  root.prepend(holder.firstElementChild as HTMLElement);
}

// -- dashboard ---------------------------------------------------------------

function wireDashboard(controller: StudioController, view: SessionView): void {
  root.innerHTML = renderDashboard(view);
  const testButton = document.getElementById("run-test") as HTMLButtonElement | null;
  const reflectButton = document.getElementById("submit-reflect") as HTMLButtonElement | null;
  const finalizeButton = document.getElementById("finalize") as HTMLButtonElement | null;
  const commentBox = document.getElementById("comment-box") as HTMLTextAreaElement | null;

  testButton?.addEventListener("click", () => void controller.runTestPass());
  reflectButton?.addEventListener("click", () =>
    void controller.submitCommentsAndReflect(commentBox?.value ?? ""),
  );
  finalizeButton?.addEventListener("click", () => void controller.finalize());
}

async function showDashboard(sessionId: string): Promise<void> {
  const controller = new StudioController(api, sessionId, {
    onView: (view) => wireDashboard(controller, view),
    onError: banner,
    onFinalized: (document_) => {
      const pre = document.createElement("pre");
      pre.className = "final-document";
      pre.textContent = document_;
      root.append(pre);
    },
  });
  await controller.refresh();
}

// -- library ------------------------------------------------------------------

async function showLibrary(): Promise<void> {
  try {
    const prompts = await api.listPrompts();
    root.innerHTML = `<h1>Prompt library</h1>` + renderLibraryList(prompts);
  } catch (error) {
    if (error instanceof ApiError) {
      root.innerHTML = renderLibraryEmptyState(error.code);
      return;
    }
    throw error;
  }
}

async function showPrompt(id: string, version?: string): Promise<void> {
  try {
    const [listing, record] = await Promise.all([
      api.listPrompts(),
      api.getPrompt(id, version),
    ]);
    const entry = listing.find((p) => p.id === id);
    root.innerHTML =
      renderPromptView(record) +
      (entry ? renderVersionPicker(entry, record.version) : "");
    document.getElementById("copy-prompt")?.addEventListener("click", () => {
      void navigator.clipboard.writeText(promptClipboardText(record));
    });
    document.getElementById("version-picker")?.addEventListener("change", (event) => {
      const picked = (event.target as HTMLSelectElement).value;
      location.hash = `#/library/${id}/${picked}`;
    });
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      root.innerHTML = renderLibraryEmptyState(error.code);
      return;
    }
    throw error;
  }
}

// -- routing -------------------------------------------------------------------

function route(): void {
  const hash = location.hash.replace(/^#\/?/, "");
  const parts = hash.split("/").filter(Boolean);
  if (parts[0] === "sessions" && parts[1]) {
    void showDashboard(parts[1]);
  } else if (parts[0] === "library" && parts[1]) {
    void showPrompt(parts[1], parts[2]);
  } else {
    void showLibrary();
  }
}

window.addEventListener("hashchange", route);
route();
