// The dashboard controller: holds nothing but the active session id and
// re-fetches the view after every mutation (polling-style refresh, so a
// reload reproduces exactly the same page from the API).

import { ApiClient, ApiError } from "./api.js";
import type { SessionView } from "./types.js";

export interface ControllerHooks {
  onView: (view: SessionView) => void;
  onError: (code: string, message: string) => void;
  onFinalized?: (document: string) => void;
}

export class StudioController {
  constructor(
    private api: ApiClient,
    public sessionId: string,
    private hooks: ControllerHooks,
  ) {}

  private async guard<T>(work: () => Promise<T>): Promise<T | undefined> {
    try {
      return await work();
    } catch (error) {
      if (error instanceof ApiError) {
        this.hooks.onError(error.code, error.message);
        return undefined;
      }
      throw error;
    }
  }

  async refresh(): Promise<void> {
    await this.guard(async () => {
      this.hooks.onView(await this.api.getSession(this.sessionId));
    });
  }

  async runTestPass(): Promise<void> {
    await this.guard(async () => {
      await this.api.runTestPass(this.sessionId);
      this.hooks.onView(await this.api.getSession(this.sessionId));
    });
  }

  /** The dashboard's main action: post the comments, reflect, refresh. */
  async submitCommentsAndReflect(commentText: string, moduleHint?: string): Promise<void> {
    await this.guard(async () => {
      const comments = commentText.trim()
        ? [{ text: commentText.trim(), module_hint: moduleHint ?? null }]
        : [];
      await this.api.submitComments(this.sessionId, comments);
      await this.api.reflect(this.sessionId);
      this.hooks.onView(await this.api.getSession(this.sessionId));
    });
  }

  async finalize(): Promise<void> {
    await this.guard(async () => {
      const result = await this.api.finalize(this.sessionId);
      this.hooks.onFinalized?.(result.document);
      this.hooks.onView(await this.api.getSession(this.sessionId));
    });
  }
}
