"""Session state machine: design pass, test pass, reflection loop.

One session drafts a prompt from a task brief, tests it in simulated
dialogue, collects critic and user comments, and revises exactly the
modules the reflection directs, until the directives run dry or the
reflection bound is hit. All history is append-only and replayable.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .agents import (
    ActivationState,
    AgentError,
    AgentSpec,
    Comment,
    ReflectionDirectives,
    TaskBrief,
    analyzer_spec,
    commentator_specs,
    designer_spec,
    questioner_spec,
    reflector_spec,
    run_analyzer,
    run_commentators,
    run_designer,
    run_reflector,
    run_simulator_dialogue,
    simulator_spec,
    user_comment,
)
from .agents.errors import SchemaViolationError
from .gateway import ChatGateway, ChatMessage, GatewayError
from .langgpt import (
    ROLE,
    Freeform,
    ModuleBlock,
    ModuleKind,
    PromptDocument,
    diff,
    lint,
    render,
    parse,
)


class SessionState(str, Enum):
    CREATED = "created"
    ANALYZED = "analyzed"
    DRAFTED = "drafted"
    TESTED = "tested"
    AWAITING_USER = "awaiting_user"
    REFLECTED = "reflected"
    FINALIZED = "finalized"
    FAILED = "failed"


class SessionStateError(Exception):
    """An operation was attempted in a state that does not allow it."""

    code = "SessionState"


class SessionNotAwaitingInputError(SessionStateError):
    code = "SessionNotAwaitingInput"


class NotFinalizedError(SessionStateError):
    code = "NotFinalized"


class SessionFailedError(Exception):
    """An agent or gateway failure aborted a pass; carries the session."""

    code = "SessionFailed"

    def __init__(self, session: Session, cause: Exception):
        super().__init__(f"session {session.session_id} failed: {cause}")
        self.session = session
        self.cause = cause


@dataclass(frozen=True)
class SessionConfig:
    max_reflections: int = 2
    test_turns: int = 3
    interactive: bool = False
    min_mean_score: float | None = None

    def __post_init__(self):
        if self.max_reflections < 0:
            raise ValueError("max_reflections must be >= 0")
        if self.test_turns < 1:
            raise ValueError("test_turns must be >= 1")

    def to_dict(self) -> dict:
        return {
            "max_reflections": self.max_reflections,
            "test_turns": self.test_turns,
            "interactive": self.interactive,
            "min_mean_score": self.min_mean_score,
        }

    @classmethod
    def from_dict(cls, data: dict) -> SessionConfig:
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})


@dataclass
class AgentRoster:
    """The agent team a session runs with."""

    analyzer: AgentSpec
    reflector: AgentSpec
    simulator: AgentSpec
    questioner: AgentSpec
    commentators: list[AgentSpec]
    designer_factory: Callable[[ModuleKind], AgentSpec]

    @classmethod
    def default(cls) -> AgentRoster:
        return cls(
            analyzer=analyzer_spec(),
            reflector=reflector_spec(),
            simulator=simulator_spec(),
            questioner=questioner_spec(),
            commentators=commentator_specs(),
            designer_factory=designer_spec,
        )


def derive_session_id(brief: TaskBrief, config: SessionConfig) -> str:
    """Deterministic id: the same brief and config always replay alike."""
    payload = json.dumps(
        {"brief": brief.to_dict(), "config": config.to_dict()}, sort_keys=True
    )
    return "s-" + hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]


@dataclass
class Session:
    """One generate-test-reflect run; history fields only ever grow."""

    session_id: str
    brief: TaskBrief
    config: SessionConfig
    roster: AgentRoster = field(repr=False, default_factory=AgentRoster.default)
    activation: ActivationState | None = None
    drafts: list[PromptDocument] = field(default_factory=list)
    transcripts: list[list[ChatMessage]] = field(default_factory=list)
    comments: list[Comment] = field(default_factory=list)
    directives_history: list[ReflectionDirectives] = field(default_factory=list)
    state: SessionState = SessionState.CREATED
    state_history: list[SessionState] = field(default_factory=lambda: [SessionState.CREATED])
    reflections_done: int = 0
    comments_consumed: int = 0
    failure_reason: str | None = None
    lock: threading.RLock = field(repr=False, default_factory=threading.RLock)

    # -- state plumbing -----------------------------------------------------

    def _move(self, state: SessionState):
        self.state = state
        self.state_history.append(state)

    def _require(self, *states: SessionState, error=SessionStateError):
        if self.state not in states:
            allowed = ", ".join(s.value for s in states)
            raise error(
                f"session {self.session_id} is {self.state.value}; needs {allowed}"
            )

    def _fail(self, cause: Exception):
        self.failure_reason = f"{type(cause).__name__}: {cause}"
        self._move(SessionState.FAILED)
        raise SessionFailedError(self, cause)

    def current_draft(self) -> PromptDocument:
        if not self.drafts:
            raise SessionStateError("no draft exists yet")
        return self.drafts[-1]

    def test_passes_run(self) -> int:
        return len(self.transcripts)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "brief": self.brief.to_dict(),
            "config": self.config.to_dict(),
            "activation": self.activation.to_dict() if self.activation else None,
            "drafts": [render(d) for d in self.drafts],
            "transcripts": [
                [m.to_dict() for m in transcript] for transcript in self.transcripts
            ],
            "comments": [c.to_dict() for c in self.comments],
            "directives_history": [d.to_dict() for d in self.directives_history],
            "state": self.state.value,
            "state_history": [s.value for s in self.state_history],
            "reflections_done": self.reflections_done,
            "comments_consumed": self.comments_consumed,
            "failure_reason": self.failure_reason,
        }

    @classmethod
    def from_dict(cls, data: dict, roster: AgentRoster | None = None) -> Session:
        from .langgpt import resolve_module_name

        activation = None
        if data.get("activation"):
            activation = ActivationState.of(
                [resolve_module_name(n) for n in data["activation"]["activated"]],
                {
                    resolve_module_name(k): v
                    for k, v in data["activation"].get("rationale", {}).items()
                },
            )
        session = cls(
            session_id=data["session_id"],
            brief=TaskBrief.from_dict(data["brief"]),
            config=SessionConfig.from_dict(data["config"]),
            roster=roster or AgentRoster.default(),
            activation=activation,
            drafts=[parse(text) for text in data.get("drafts", [])],
            transcripts=[
                [ChatMessage(**m) for m in transcript]
                for transcript in data.get("transcripts", [])
            ],
            comments=[Comment.from_dict(c) for c in data.get("comments", [])],
            directives_history=[
                ReflectionDirectives(
                    {resolve_module_name(k): v for k, v in entry.items()}
                )
                for entry in data.get("directives_history", [])
            ],
            state=SessionState(data["state"]),
            state_history=[SessionState(s) for s in data.get("state_history", [data["state"]])],
            reflections_done=data.get("reflections_done", 0),
            comments_consumed=data.get("comments_consumed", 0),
            failure_reason=data.get("failure_reason"),
        )
        return session


def export_session(session: Session) -> str:
    """Deterministic JSON serialization of a whole session."""
    return json.dumps(session.to_dict(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def import_session(text: str, roster: AgentRoster | None = None) -> Session:
    return Session.from_dict(json.loads(text), roster=roster)


# ---------------------------------------------------------------------------
# Design pass
# ---------------------------------------------------------------------------


def _role_block_to_designer_form(doc: PromptDocument) -> ModuleBlock:
    role = doc.block(ROLE)
    assert role is not None
    return ModuleBlock(
        kind=ROLE,
        elements=(Freeform(doc.role_name),) + role.elements,
        subsections=role.subsections,
    )


def _assemble_document(blocks_by_kind: dict[str, ModuleBlock]) -> PromptDocument:
    """Combine designed blocks into a document (Role name moves to heading)."""
    role = blocks_by_kind.get(ROLE.key())
    if role is None or not role.elements or not isinstance(role.elements[0], Freeform):
        raise SchemaViolationError(
            "the Role designer must put the role name in its first freeform element"
        )
    role_name = role.elements[0].text
    heading_role = ModuleBlock(
        kind=ROLE, elements=role.elements[1:], subsections=role.subsections
    )
    rest = [b for key, b in blocks_by_kind.items() if key != ROLE.key()]
    doc = PromptDocument(role_name=role_name, blocks=tuple([heading_role] + rest))
    # store blocks in canonical order so drafts render stably
    return PromptDocument(role_name=role_name, blocks=doc.canonical_blocks())


def create_session(
    brief: TaskBrief,
    config: SessionConfig | None = None,
    roster: AgentRoster | None = None,
    session_id: str | None = None,
) -> Session:
    config = config or SessionConfig()
    return Session(
        session_id=session_id or derive_session_id(brief, config),
        brief=brief,
        config=config,
        roster=roster or AgentRoster.default(),
    )


def start_session(
    brief: TaskBrief,
    config: SessionConfig | None = None,
    gateway: ChatGateway | None = None,
    roster: AgentRoster | None = None,
    session_id: str | None = None,
) -> Session:
    """Run the design pass: analyze the task, then design every activated
    module and assemble the first draft in canonical order.

    The pass is atomic: any agent failure leaves the session Failed with no
    half-drafts, raised as :class:`SessionFailedError` carrying the session.
    """
    if gateway is None:
        raise ValueError("a gateway is required")
    session = create_session(brief, config, roster, session_id)
    with session.lock:
        try:
            session.activation = run_analyzer(session.roster.analyzer, brief, gateway)
            session._move(SessionState.ANALYZED)

            designed: dict[str, ModuleBlock] = {}
            for kind in session.activation.activated:
                spec = session.roster.designer_factory(kind)
                designed[kind.key()] = run_designer(spec, brief, gateway)
            draft = _assemble_document(designed)
            report = lint(draft)
            if report.has_errors():
                raise SchemaViolationError(
                    "designed draft has lint errors: "
                    + "; ".join(f.message for f in report.errors())
                )
            session.drafts.append(draft)
            session._move(SessionState.DRAFTED)
        except (AgentError, GatewayError, ValueError) as exc:
            session._fail(exc)
    return session


# ---------------------------------------------------------------------------
# Test pass
# ---------------------------------------------------------------------------


def run_test_pass(session: Session, gateway: ChatGateway) -> tuple[list[ChatMessage], list[Comment]]:
    """Simulator/questioner dialogue over the latest draft, then the five
    commentators with their debate round."""
    with session.lock:
        session._require(SessionState.DRAFTED)
        try:
            transcript = run_simulator_dialogue(
                session.roster.simulator,
                session.roster.questioner,
                session.current_draft(),
                session.brief,
                session.config.test_turns,
                gateway,
            )
            agent_comments = run_commentators(
                session.roster.commentators, transcript, session.brief, gateway
            )
        except (AgentError, GatewayError, ValueError) as exc:
            session._fail(exc)
        session.transcripts.append(transcript)
        session.comments.extend(agent_comments)
        session._move(SessionState.TESTED)
        if session.config.interactive:
            session._move(SessionState.AWAITING_USER)
        return transcript, agent_comments


# ---------------------------------------------------------------------------
# User comments
# ---------------------------------------------------------------------------


def submit_user_comments(session: Session, comments: list[Comment]) -> Session:
    """Append the user's comments (author and stance forced to user)."""
    with session.lock:
        session._require(
            SessionState.AWAITING_USER,
            SessionState.TESTED,
            error=SessionNotAwaitingInputError,
        )
        for comment in comments:
            if not comment.is_user:
                comment = Comment(
                    author="user", stance="user", score=None, issues=comment.issues
                )
            session.comments.append(comment)
        if session.state == SessionState.AWAITING_USER:
            session._move(SessionState.TESTED)
        return session


# ---------------------------------------------------------------------------
# Reflection pass
# ---------------------------------------------------------------------------


def _mean_score(comments: list[Comment]) -> float | None:
    scores = [c.score for c in comments if c.score is not None]
    return sum(scores) / len(scores) if scores else None


def run_reflection_pass(session: Session, gateway: ChatGateway) -> Session:
    """Reflect over the comments gathered since the last reflection.

    Empty directives or an exhausted reflection budget finalize the session;
    otherwise exactly the directed modules are revised into a new draft.
    """
    with session.lock:
        session._require(SessionState.TESTED)
        if not session.transcripts:
            raise SessionStateError("reflection needs a completed test pass")
        fresh_comments = session.comments[session.comments_consumed :]
        try:
            directives = run_reflector(session.roster.reflector, fresh_comments, gateway)
        except (AgentError, GatewayError, ValueError) as exc:
            session._fail(exc)
        session.comments_consumed = len(session.comments)
        session._move(SessionState.REFLECTED)

        if directives.is_empty():
            threshold = session.config.min_mean_score
            if threshold is not None:
                mean = _mean_score(
                    [c for c in fresh_comments if not c.is_user]
                )
                if mean is not None and mean < threshold:
                    session._fail(
                        SessionStateError(
                            f"converged with mean score {mean:.1f} below the "
                            f"required {threshold:.1f}"
                        )
                    )
            session._move(SessionState.FINALIZED)
            return session

        if session.reflections_done >= session.config.max_reflections:
            session._move(SessionState.FINALIZED)
            return session

        draft = session.current_draft()
        try:
            revised: dict[str, ModuleBlock] = {}
            for kind in directives.kinds():
                spec = session.roster.designer_factory(kind)
                existing = draft.block(kind)
                if existing is not None and kind.key() == ROLE.key():
                    existing = _role_block_to_designer_form(draft)
                revised[kind.key()] = run_designer(
                    spec,
                    session.brief,
                    gateway,
                    existing=existing,
                    directive=directives.directives[kind] if existing is not None else None,
                )
            new_draft = _apply_revisions(draft, revised)
            report = lint(new_draft)
            if report.has_errors():
                raise SchemaViolationError(
                    "revised draft has lint errors: "
                    + "; ".join(f.message for f in report.errors())
                )
        except (AgentError, GatewayError, ValueError) as exc:
            session._fail(exc)
        session.drafts.append(new_draft)
        session.directives_history.append(directives)
        session.reflections_done += 1
        session._move(SessionState.DRAFTED)
        return session


def _apply_revisions(draft: PromptDocument, revised: dict[str, ModuleBlock]) -> PromptDocument:
    role_name = draft.role_name
    if ROLE.key() in revised:
        role_block = revised[ROLE.key()]
        if role_block.elements and isinstance(role_block.elements[0], Freeform):
            role_name = role_block.elements[0].text
            revised[ROLE.key()] = ModuleBlock(
                kind=ROLE,
                elements=role_block.elements[1:],
                subsections=role_block.subsections,
            )
    blocks = [revised.get(b.kind.key(), b) for b in draft.blocks]
    present = {b.kind.key() for b in draft.blocks}
    blocks.extend(b for key, b in revised.items() if key not in present)
    doc = PromptDocument(role_name=role_name, blocks=tuple(blocks))
    return PromptDocument(role_name=role_name, blocks=doc.canonical_blocks())


# ---------------------------------------------------------------------------
# Finalize
# ---------------------------------------------------------------------------


def finalize(session: Session) -> PromptDocument:
    """Return the final draft of a finalized session (lint-error-free)."""
    with session.lock:
        session._require(SessionState.FINALIZED, error=NotFinalizedError)
        return session.current_draft()


def run_to_completion(session: Session, gateway: ChatGateway) -> PromptDocument:
    """Drive a non-interactive session through test/reflect until it ends."""
    while session.state == SessionState.DRAFTED:
        run_test_pass(session, gateway)
        run_reflection_pass(session, gateway)
    return finalize(session)


def last_diff(session: Session) -> frozenset[ModuleKind]:
    """Modules changed between the last two drafts (empty for one draft)."""
    if len(session.drafts) < 2:
        return frozenset()
    return diff(session.drafts[-2], session.drafts[-1])


__all__ = [
    "AgentRoster",
    "NotFinalizedError",
    "Session",
    "SessionConfig",
    "SessionFailedError",
    "SessionNotAwaitingInputError",
    "SessionState",
    "SessionStateError",
    "create_session",
    "derive_session_id",
    "export_session",
    "finalize",
    "import_session",
    "last_diff",
    "run_reflection_pass",
    "run_test_pass",
    "run_to_completion",
    "start_session",
    "submit_user_comments",
    "user_comment",
]
