"""HTTP session/library API consumed by the studio UI and scripts.

Sessions live in memory (short-lived working objects); prompts persist in
the file store. Every mutation here is also reachable from the CLI; the
parity table below is asserted by tests.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .agents import TaskBrief, user_comment
from .agents.errors import AgentError
from .compare import Variant, compare_prompts
from .gateway import ChatGateway, GatewayError
from .langgpt import ParseError, lint, parse, render, resolve_module_name
from .orchestrator import (
    AgentRoster,
    Session,
    SessionConfig,
    SessionFailedError,
    SessionState,
    SessionStateError,
    finalize,
    last_diff,
    run_reflection_pass,
    run_test_pass,
    start_session,
    submit_user_comments,
)
from .store import PromptStore, StoreError, NotFoundError

# Every state-changing operation, reachable both over HTTP and from the CLI.
MUTATION_PARITY = {
    "create_session": {"api": ("POST", "/sessions"), "cli": "generate"},
    "run_test_pass": {"api": ("POST", "/sessions/{session_id}/test"), "cli": "generate"},
    "submit_comments": {"api": ("POST", "/sessions/{session_id}/comments"), "cli": "refine"},
    "run_reflection": {"api": ("POST", "/sessions/{session_id}/reflect"), "cli": "refine"},
    "finalize": {"api": ("POST", "/sessions/{session_id}/finalize"), "cli": "generate"},
    "save_prompt": {"api": ("POST", "/prompts"), "cli": "generate"},
    "lint": {"api": ("POST", "/lint"), "cli": "lint"},
    "compare": {"api": ("POST", "/compare"), "cli": "compare"},
}

API_ERROR_STATUS = {
    "MissingRole": 400,
    "DuplicateModule": 400,
    "MalformedHeading": 400,
    "LintErrors": 400,
    "Validation": 400,
    "NotFound": 404,
    "SessionState": 409,
    "SessionNotAwaitingInput": 409,
    "NotFinalized": 409,
    "VersionConflict": 409,
    "SessionFailed": 502,
    "GatewayError": 502,
}


class BriefBody(BaseModel):
    task_text: str
    domain_hint: str | None = None
    language: str = "English"


class ConfigBody(BaseModel):
    max_reflections: int = 2
    test_turns: int = 3
    interactive: bool = False
    min_mean_score: float | None = None


class CreateSessionBody(BaseModel):
    brief: BriefBody
    config: ConfigBody = Field(default_factory=ConfigBody)


class CommentBody(BaseModel):
    text: str
    module_hint: str | None = None


class CommentsBody(BaseModel):
    comments: list[CommentBody] = Field(default_factory=list)


class PromptBody(BaseModel):
    text: str


class LintBody(BaseModel):
    text: str


class VariantBody(BaseModel):
    label: str
    kind: str = "document"
    text: str | None = None


class CompareBody(BaseModel):
    brief: BriefBody
    variants: list[VariantBody]
    probes: list[str]


def _error_response(code: str, message: str) -> JSONResponse:
    status = API_ERROR_STATUS.get(code, 500)
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


def session_view(session: Session) -> dict:
    drafts = [
        {
            "text": render(draft),
            "modules": [
                {
                    "kind": block.kind.name,
                    "title": block.title,
                    "text": _module_text(draft, block),
                }
                for block in draft.canonical_blocks()
            ],
        }
        for draft in session.drafts
    ]
    return {
        "session_id": session.session_id,
        "state": session.state.value,
        "brief": session.brief.to_dict(),
        "config": session.config.to_dict(),
        "iteration": session.reflections_done,
        "test_passes": session.test_passes_run(),
        "activation": session.activation.to_dict() if session.activation else None,
        "drafts": drafts,
        "current_draft": drafts[-1] if drafts else None,
        "transcript": [m.to_dict() for m in session.transcripts[-1]] if session.transcripts else [],
        "comments": [c.to_dict() for c in session.comments],
        "directives_history": [d.to_dict() for d in session.directives_history],
        "changed_modules": sorted(k.name for k in last_diff(session)),
        "failure_reason": session.failure_reason,
    }


def _module_text(draft, block) -> str:
    from .langgpt import render_block

    return render_block(draft, block)


class SessionTable:
    """In-memory session registry; each session keeps its own gateway."""

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[str, tuple[Session, ChatGateway]] = {}
        self._counter = 0

    def next_id(self) -> str:
        with self._lock:
            self._counter += 1
            return f"s{self._counter}"

    def put(self, session: Session, gateway: ChatGateway) -> None:
        with self._lock:
            self._entries[session.session_id] = (session, gateway)

    def get(self, session_id: str) -> tuple[Session, ChatGateway]:
        with self._lock:
            entry = self._entries.get(session_id)
        if entry is None:
            raise NotFoundError(f"no session with id {session_id!r}")
        return entry


def create_app(
    store: PromptStore,
    gateway_factory: Callable[[], ChatGateway],
    roster: AgentRoster | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="minstrel", version="0.1.0")
    sessions = SessionTable()
    app.state.sessions = sessions
    app.state.store = store

    async def handle_domain_error(request: Request, exc: Exception):
        if isinstance(exc, SessionFailedError):
            return _error_response(exc.code, str(exc.cause))
        if isinstance(exc, ValueError):
            return _error_response("Validation", str(exc))
        return _error_response(getattr(exc, "code", "Error"), str(exc))

    for error_type in (
        ParseError,
        StoreError,
        SessionStateError,
        GatewayError,
        AgentError,
        SessionFailedError,
        ValueError,
    ):
        app.add_exception_handler(error_type, handle_domain_error)

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return _error_response("Validation", str(exc.errors()[:3]))

    # -- sessions ----------------------------------------------------------

    @app.post("/sessions")
    def create_session_route(body: CreateSessionBody):
        brief = TaskBrief(
            task_text=body.brief.task_text,
            domain_hint=body.brief.domain_hint,
            language=body.brief.language,
        )
        config = SessionConfig(**body.config.model_dump())
        gateway = gateway_factory()
        session_id = sessions.next_id()
        try:
            session = start_session(
                brief, config, gateway, roster=roster, session_id=session_id
            )
        except SessionFailedError as exc:
            sessions.put(exc.session, gateway)
            raise
        sessions.put(session, gateway)
        return {"session": session_view(session)}

    @app.get("/sessions/{session_id}")
    def get_session_route(session_id: str):
        session, _ = sessions.get(session_id)
        return {"session": session_view(session)}

    @app.get("/sessions/{session_id}/export")
    def export_session_route(session_id: str):
        session, _ = sessions.get(session_id)
        return JSONResponse(content=session.to_dict())

    @app.post("/sessions/{session_id}/test")
    def test_route(session_id: str):
        session, gateway = sessions.get(session_id)
        run_test_pass(session, gateway)
        return {"session": session_view(session)}

    @app.post("/sessions/{session_id}/comments")
    def comments_route(session_id: str, body: CommentsBody):
        session, _ = sessions.get(session_id)
        comments = [
            user_comment(
                c.text,
                module_hint=resolve_module_name(c.module_hint) if c.module_hint else None,
            )
            for c in body.comments
        ]
        submit_user_comments(session, comments)
        return {"session": session_view(session)}

    @app.post("/sessions/{session_id}/reflect")
    def reflect_route(session_id: str):
        session, gateway = sessions.get(session_id)
        run_reflection_pass(session, gateway)
        return {"session": session_view(session)}

    @app.post("/sessions/{session_id}/finalize")
    def finalize_route(session_id: str):
        session, _ = sessions.get(session_id)
        document = finalize(session)
        return {
            "session_id": session.session_id,
            "document": render(document),
            "role_name": document.role_name,
        }

    # -- prompt store --------------------------------------------------------

    @app.get("/prompts")
    def list_prompts_route(filter: str | None = None):
        return {"prompts": store.list(filter=filter)}

    @app.post("/prompts")
    def save_prompt_route(body: PromptBody):
        document = parse(body.text)
        record = store.save(document)
        return {
            "id": record.id,
            "version": record.version,
            "role_name": record.role_name,
        }

    @app.get("/prompts/{prompt_id}")
    def get_prompt_route(prompt_id: str, version: str | None = None):
        record = store.get(prompt_id, version)
        return {
            "id": record.id,
            "version": record.version,
            "role_name": record.role_name,
            "parent_version": record.parent_version,
            "created_at": record.created_at,
            "text": render(record.document),
        }

    # -- tools ---------------------------------------------------------------

    @app.post("/lint")
    def lint_route(body: LintBody):
        document = parse(body.text)
        return lint(document).to_dict()

    @app.post("/compare")
    def compare_route(body: CompareBody):
        brief = TaskBrief(
            task_text=body.brief.task_text,
            domain_hint=body.brief.domain_hint,
            language=body.brief.language,
        )
        variants = [
            Variant(
                label=v.label,
                kind=v.kind,
                document=parse(v.text) if v.kind == "document" else None,
            )
            for v in body.variants
        ]
        gateway = gateway_factory()
        return compare_prompts(brief, variants, body.probes, gateway)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
