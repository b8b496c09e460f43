"""Side-by-side prompt comparison over identical probes.

Each variant becomes the simulator's system prompt; the five critics score
every variant's transcript (single round, no debate). Baseline template
renderers map a task brief mechanically onto the COSTAR and CRISPE slot
frameworks so structural prompts can be compared against them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .agents import TaskBrief, run_commentators
from .agents.kinds import AgentSpec
from .gateway import ChatGateway, ChatMessage, GatewayError
from .langgpt import PromptDocument, render

VARIANT_KINDS = ("document", "instruction", "costar", "crispe")


def instruction_prompt(brief: TaskBrief) -> str:
    """The no-framework baseline: the task text alone."""
    return brief.task_text


def costar_prompt(brief: TaskBrief) -> str:
    """Fixed slot mapping onto Context/Objective/Style/Tone/Audience/Response."""
    context = brief.domain_hint or "A user needs help with the task below."
    return (
        f"# CONTEXT\n{context}\n\n"
        f"# OBJECTIVE\n{brief.task_text}\n\n"
        f"# STYLE\nClear and direct.\n\n"
        f"# TONE\nProfessional and helpful.\n\n"
        f"# AUDIENCE\nThe user who stated the objective.\n\n"
        f"# RESPONSE\nAnswer in {brief.language}, in plain text."
    )


def crispe_prompt(brief: TaskBrief) -> str:
    """Fixed slot mapping onto Capacity/Insight/Statement/Personality/Experiment."""
    insight = brief.domain_hint or "No extra background was provided."
    return (
        f"# CAPACITY AND ROLE\nYou are an assistant who performs the user's task.\n\n"
        f"# INSIGHT\n{insight}\n\n"
        f"# STATEMENT\n{brief.task_text}\n\n"
        f"# PERSONALITY\nRespond clearly and helpfully, in {brief.language}.\n\n"
        f"# EXPERIMENT\nGive your single best answer; do not list alternatives."
    )


@dataclass(frozen=True)
class Variant:
    """One comparison arm: a label plus a prompt source."""

    label: str
    kind: str = "document"
    document: PromptDocument | None = None

    def __post_init__(self):
        if self.kind not in VARIANT_KINDS:
            raise ValueError(f"unknown variant kind: {self.kind}")
        if (self.kind == "document") != (self.document is not None):
            raise ValueError("document variants carry a document; baselines do not")

    def system_text(self, brief: TaskBrief) -> str:
        if self.kind == "document":
            return render(self.document)
        if self.kind == "instruction":
            return instruction_prompt(brief)
        if self.kind == "costar":
            return costar_prompt(brief)
        return crispe_prompt(brief)


def compare_prompts(
    brief: TaskBrief,
    variants: list[Variant],
    probes: list[str],
    gateway: ChatGateway,
    commentators: list[AgentSpec] | None = None,
) -> dict:
    """Run every variant over the same probes and rank by mean critic score.

    A gateway failure is recorded on its variant; the report still carries
    every variant that completed.
    """
    if len(variants) < 2:
        raise ValueError("comparison needs at least two variants")
    if not probes:
        raise ValueError("comparison needs at least one probe")
    labels = [v.label for v in variants]
    if len(set(labels)) != len(labels):
        raise ValueError("variant labels must be unique")

    from .agents import commentator_specs

    critics = commentators or commentator_specs()

    entries = []
    for variant in variants:
        system_text = variant.system_text(brief)
        entry: dict = {"label": variant.label, "kind": variant.kind, "prompt_text": system_text}
        try:
            transcript: list[ChatMessage] = []
            for probe in probes:
                transcript.append(ChatMessage(role="user", content=probe))
                answer = gateway.complete(
                    [ChatMessage(role="system", content=system_text), *transcript]
                )
                transcript.append(ChatMessage(role="assistant", content=answer))
            comments = run_commentators(critics, transcript, brief, gateway, debate=False)
        except GatewayError as exc:
            entry["error"] = f"{type(exc).__name__}: {exc}"
            entries.append(entry)
            continue
        scores = [c.score for c in comments if c.score is not None]
        entry["transcript"] = [m.to_dict() for m in transcript]
        entry["comments"] = [c.to_dict() for c in comments]
        entry["mean_score"] = round(sum(scores) / len(scores), 2) if scores else None
        entries.append(entry)

    ranked = sorted(
        (e for e in entries if "error" not in e),
        key=lambda e: (-(e["mean_score"] or 0), e["label"]),
    )
    return {
        "brief": brief.to_dict(),
        "probes": list(probes),
        "variants": entries,
        "ranking": [e["label"] for e in ranked],
    }
