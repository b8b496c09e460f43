"""The agent operations: analyze, design, simulate, comment, reflect.

Each structured agent gets exactly one repair turn when its output fails
validation; after that the validation error propagates with the raw text
attached. Stances come from the AgentSpec roster, never from model output.
"""

from __future__ import annotations

from collections import Counter

from ..gateway import ChatGateway, ChatMessage, GatewayError
from ..langgpt import (
    ROLE,
    Freeform,
    ModuleBlock,
    ModuleKind,
    PromptDocument,
    lint,
    make_document,
    render,
    render_block,
)
from .errors import (
    SchemaViolationError,
    StanceMultisetViolationError,
    UnknownModuleNameError,
    WrongModuleKindError,
)
from .kinds import (
    STANCE_ROSTER,
    ActivationState,
    AgentSpec,
    Comment,
    ReflectionDirectives,
    TaskBrief,
)
from .schemas import (
    allowed_directive_targets,
    parse_activation,
    parse_comment_body,
    parse_directives_body,
    parse_module_block,
)

_REPAIRABLE = (SchemaViolationError, UnknownModuleNameError, WrongModuleKindError)


def brief_text(brief: TaskBrief) -> str:
    lines = [f"Task: {brief.task_text}"]
    if brief.domain_hint:
        lines.append(f"Domain: {brief.domain_hint}")
    lines.append(f"Language: {brief.language}")
    return "\n".join(lines)


def _system(spec: AgentSpec) -> ChatMessage:
    return ChatMessage(role="system", content=render(spec.meta_prompt))


def _complete_validated(gateway: ChatGateway, spec: AgentSpec, messages: list[ChatMessage], validator):
    """One completion plus at most one repair turn before failing."""
    raw = gateway.complete(messages, config=spec.endpoint_override)
    try:
        return validator(raw)
    except _REPAIRABLE as first:
        repair_messages = messages + [
            ChatMessage(role="assistant", content=raw),
            ChatMessage(
                role="user",
                content=(
                    f"Your last output failed validation: {first}. "
                    "Re-emit only a valid JSON body, nothing else."
                ),
            ),
        ]
        raw = gateway.complete(repair_messages, config=spec.endpoint_override)
        try:
            return validator(raw)
        except SchemaViolationError as second:
            raise SchemaViolationError(str(second), raw=raw)


# ---------------------------------------------------------------------------
# Analysis
# ---------------------------------------------------------------------------


def run_analyzer(spec: AgentSpec, brief: TaskBrief, gateway: ChatGateway) -> ActivationState:
    """Select the module set the prompt needs (Role and Goals forced in)."""
    if spec.kind.role != "analyzer":
        raise ValueError("spec is not an analyzer")
    messages = [_system(spec), ChatMessage(role="user", content=brief_text(brief))]
    return _complete_validated(gateway, spec, messages, parse_activation)


# ---------------------------------------------------------------------------
# Design
# ---------------------------------------------------------------------------


def existing_block_text(existing: ModuleBlock) -> str:
    """Canonical text of a lone block, for revision prompts.

    Designer-form Role blocks carry the role name as their first freeform
    element; it moves onto the heading here.
    """
    if existing.kind.key() == ROLE.key():
        name = "Assistant"
        elements = existing.elements
        if elements and isinstance(elements[0], Freeform):
            name = elements[0].text
            elements = elements[1:]
        host = PromptDocument(
            role_name=name,
            blocks=(
                ModuleBlock(
                    kind=ROLE, elements=elements, subsections=existing.subsections
                ),
            ),
        )
        return render_block(host, host.blocks[0])
    host = make_document("Assistant", [existing])
    return render_block(host, existing)


def run_designer(
    spec: AgentSpec,
    brief: TaskBrief,
    gateway: ChatGateway,
    existing: ModuleBlock | None = None,
    directive: str | None = None,
) -> ModuleBlock:
    """Produce (or revise) the one module block this designer owns."""
    if spec.kind.role != "designer":
        raise ValueError("spec is not a designer")
    if (existing is None) != (directive is None):
        raise ValueError("revision needs both the existing block and a directive")
    target = spec.kind.target
    assert target is not None

    request = brief_text(brief)
    if existing is not None and directive is not None:
        request += (
            f"\n\nCurrent {target.name} module:\n{existing_block_text(existing)}\n"
            f"Revision directive: {directive}"
        )
    messages = [_system(spec), ChatMessage(role="user", content=request)]
    return _complete_validated(
        gateway, spec, messages, lambda raw: parse_module_block(raw, target)
    )


# ---------------------------------------------------------------------------
# Test dialogue
# ---------------------------------------------------------------------------


def run_simulator_dialogue(
    sim: AgentSpec,
    questioner: AgentSpec,
    prompt: PromptDocument,
    brief: TaskBrief,
    turns: int,
    gateway: ChatGateway,
) -> list[ChatMessage]:
    """Alternate questioner and simulator for ``turns`` user/assistant pairs.

    The simulator's system message is the rendered prompt under test; the
    questioner adapts its user turns to the task brief and dialogue so far.
    """
    if sim.kind.role != "simulator" or questioner.kind.role != "questioner":
        raise ValueError("needs a simulator spec and a questioner spec")
    if turns < 1:
        raise ValueError("turns must be at least 1")
    report = lint(prompt)
    if report.has_errors():
        raise ValueError("the prompt under test has lint errors")

    prompt_text = render(prompt)
    transcript: list[ChatMessage] = []
    for turn in range(1, turns + 1):
        try:
            dialogue = "\n".join(f"{m.role}: {m.content}" for m in transcript) or "(none)"
            question = gateway.complete(
                [
                    _system(questioner),
                    ChatMessage(
                        role="user",
                        content=(
                            f"{brief_text(brief)}\n\nDialogue so far:\n{dialogue}\n\n"
                            f"Write user turn {turn} of {turns}."
                        ),
                    ),
                ],
                config=questioner.endpoint_override,
            )
            transcript.append(ChatMessage(role="user", content=question))
            answer = gateway.complete(
                [ChatMessage(role="system", content=prompt_text), *transcript],
                config=sim.endpoint_override,
            )
            transcript.append(ChatMessage(role="assistant", content=answer))
        except GatewayError as exc:
            exc.turn_index = turn  # type: ignore[attr-defined]
            raise
    return transcript


# ---------------------------------------------------------------------------
# Commentary
# ---------------------------------------------------------------------------


def _transcript_text(transcript: list[ChatMessage]) -> str:
    return "\n".join(f"{m.role}: {m.content}" for m in transcript)


def _comment_summary(comments: list[Comment]) -> str:
    lines = []
    for comment in comments:
        hints = ", ".join(i.module_hint.name for i in comment.issues if i.module_hint)
        issues = " | ".join(i.text for i in comment.issues) or "(no issues)"
        lines.append(f"- [{comment.stance} score={comment.score}] ({hints or 'general'}) {issues}")
    return "\n".join(lines)


def run_commentators(
    specs: list[AgentSpec],
    transcript: list[ChatMessage],
    brief: TaskBrief,
    gateway: ChatGateway,
    debate: bool = True,
) -> list[Comment]:
    """Score a test dialogue with the five-critic roster plus one debate round.

    ``debate=False`` skips the revision round (used by prompt comparison,
    which only needs scores).
    """
    stances = [s.kind.stance for s in specs if s.kind.role == "commentator"]
    if len(specs) != 5 or len(stances) != 5 or Counter(stances) != Counter(STANCE_ROSTER):
        raise StanceMultisetViolationError(
            "commentators must be exactly {critical x2, favorable x2, neutral x1}"
        )

    context = f"{brief_text(brief)}\n\nDialogue under test:\n{_transcript_text(transcript)}"

    def ask(spec: AgentSpec, body: str, position: int) -> Comment:
        score, issues = _complete_validated(
            gateway,
            spec,
            [_system(spec), ChatMessage(role="user", content=body)],
            parse_comment_body,
        )
        return Comment(
            author=f"{spec.kind.token()}#{position}",
            stance=spec.kind.stance.value,
            score=score,
            issues=issues,
        )

    first_round = [ask(spec, context, i + 1) for i, spec in enumerate(specs)]
    if not debate:
        return first_round

    debate_context = (
        f"{context}\n\nRound 1 comments from all commentators:\n"
        f"{_comment_summary(first_round)}\n\n"
        "Debate round: revise your own comment in light of the others. "
        "Keep your stance."
    )
    return [ask(spec, debate_context, i + 1) for i, spec in enumerate(specs)]


# ---------------------------------------------------------------------------
# Reflection
# ---------------------------------------------------------------------------


def _comment_lines(comments: list[Comment]) -> str:
    lines = []
    for comment in comments:
        label = comment.stance if comment.is_user else f"{comment.stance} score={comment.score}"
        for issue in comment.issues:
            module = issue.module_hint.name if issue.module_hint else "general"
            lines.append(f"- [{label}] (module: {module}) {issue.text}")
        if not comment.issues:
            lines.append(f"- [{label}] (module: general) no issues raised")
    return "\n".join(lines)


def run_reflector(
    spec: AgentSpec, comments: list[Comment], gateway: ChatGateway
) -> ReflectionDirectives:
    """Distil comments into per-module directives; no comments, no call."""
    if spec.kind.role != "reflector":
        raise ValueError("spec is not a reflector")
    if not comments:
        return ReflectionDirectives({})

    messages = [
        _system(spec),
        ChatMessage(
            role="user",
            content=(
                "Feedback on the current prompt:\n"
                f"{_comment_lines(comments)}\n\n"
                "Produce the revision directives."
            ),
        ),
    ]
    directives: dict[ModuleKind, str] = _complete_validated(
        gateway, spec, messages, parse_directives_body
    )
    # Reflection only ever targets modules the feedback mentions.
    allowed = {k.key() for k in allowed_directive_targets(comments)}
    filtered = {kind: text for kind, text in directives.items() if kind.key() in allowed}
    return ReflectionDirectives(filtered)
