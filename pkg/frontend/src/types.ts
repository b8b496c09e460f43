// Mirrors of the service's JSON views. The UI is a read-only projection;
// every mutation goes through the HTTP API.

export interface ChatMessage {
  role: "system" | "user" | "assistant";
  content: string;
}

export interface ModulePanel {
  kind: string;
  title: string | null;
  text: string;
}

export interface DraftView {
  text: string;
  modules: ModulePanel[];
}

export interface CommentIssue {
  module: string | null;
  text: string;
}

export interface CommentView {
  author: string;
  stance: "critical" | "favorable" | "neutral" | "user";
  score: number | null;
  issues: CommentIssue[];
}

export type SessionStateName =
  | "created"
  | "analyzed"
  | "drafted"
  | "tested"
  | "awaiting_user"
  | "reflected"
  | "finalized"
  | "failed";

export interface SessionView {
  session_id: string;
  state: SessionStateName;
  brief: { task_text: string; domain_hint: string | null; language: string };
  config: { max_reflections: number; test_turns: number; interactive: boolean };
  iteration: number;
  test_passes: number;
  drafts: DraftView[];
  current_draft: DraftView | null;
  transcript: ChatMessage[];
  comments: CommentView[];
  directives_history: Record<string, string>[];
  changed_modules: string[];
  failure_reason: string | null;
}

export interface PromptListing {
  id: string;
  latest_version: string;
  role_name: string;
  versions: string[];
}

export interface PromptRecord {
  id: string;
  version: string;
  role_name: string;
  text: string;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
