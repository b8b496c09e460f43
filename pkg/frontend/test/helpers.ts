// Shared test scaffolding: canned session views and a recording fetch.

import type { CommentView, SessionView } from "../src/types.js";
import type { FetchLike } from "../src/api.js";

export function agentComments(scores: number[] = [4, 5, 8, 7, 6]): CommentView[] {
  const stances: CommentView["stance"][] = [
    "critical",
    "critical",
    "favorable",
    "favorable",
    "neutral",
  ];
  return stances.map((stance, index) => ({
    author: `commentator:${stance}#${index + 1}`,
    stance,
    score: scores[index] ?? 5,
    issues:
      index === 0
        ? [{ module: "Style", text: "the tone drifts casual" }]
        : [],
  }));
}

export function sampleView(overrides: Partial<SessionView> = {}): SessionView {
  const base: SessionView = {
    session_id: "s1",
    state: "awaiting_user",
    brief: { task_text: "Write headline titles.", domain_hint: null, language: "English" },
    config: { max_reflections: 2, test_turns: 1, interactive: true },
    iteration: 0,
    test_passes: 1,
    drafts: [
      {
        text: "# Role: Title Writer\n\n## Goals\n- Write one title.\n\n## Style\n- The style of the title should be formal.\n",
        modules: [
          { kind: "Role", title: null, text: "# Role: Title Writer\n" },
          { kind: "Goals", title: null, text: "## Goals\n- Write one title.\n" },
          { kind: "Style", title: null, text: "## Style\n- The style of the title should be formal.\n" },
        ],
      },
    ],
    current_draft: null,
    transcript: [
      { role: "user", content: "Please title my article." },
      { role: "assistant", content: "Title: Shared Soil" },
    ],
    comments: agentComments(),
    directives_history: [],
    changed_modules: [],
    failure_reason: null,
  };
  const view = { ...base, ...overrides };
  view.current_draft = overrides.current_draft ?? view.drafts[view.drafts.length - 1] ?? null;
  return view;
}

export interface RecordedCall {
  method: string;
  path: string;
  body?: unknown;
}

export function recordingFetch(
  responder: (method: string, path: string, body?: unknown) => unknown,
): { fetch: FetchLike; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    calls.push({ method, path: url, body });
    const payload = responder(method, url, body);
    if (payload instanceof ApiFailure) {
      return new Response(JSON.stringify(payload.body), { status: payload.status });
    }
    return new Response(JSON.stringify(payload), { status: 200 });
  };
  return { fetch: fetchImpl, calls };
}

export class ApiFailure {
  constructor(
    public status: number,
    public body: { error: { code: string; message: string } },
  ) {}
}
