"""Agent kinds, specs and the typed values that flow between them."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..gateway import EndpointConfig
from ..langgpt import CANONICAL_ORDER, GOALS, INITIALIZATION, ROLE, ModuleKind, PromptDocument, lint


class Stance(str, Enum):
    CRITICAL = "critical"
    FAVORABLE = "favorable"
    NEUTRAL = "neutral"


# The fixed disposition split of the five test-group critics.
STANCE_ROSTER: tuple[Stance, ...] = (
    Stance.CRITICAL,
    Stance.CRITICAL,
    Stance.FAVORABLE,
    Stance.FAVORABLE,
    Stance.NEUTRAL,
)

AGENT_ROLES = ("analyzer", "reflector", "designer", "simulator", "questioner", "commentator")

SCHEMA_BY_ROLE = {
    "analyzer": "activation.v1",
    "reflector": "directives.v1",
    "designer": "module_block.v1",
    "simulator": "text.v1",
    "questioner": "text.v1",
    "commentator": "comment.v1",
}


@dataclass(frozen=True)
class AgentKind:
    role: str
    target: ModuleKind | None = None
    stance: Stance | None = None

    def __post_init__(self):
        if self.role not in AGENT_ROLES:
            raise ValueError(f"unknown agent role: {self.role}")
        if self.role == "designer":
            if self.target is None or self.target.is_custom:
                raise ValueError("a designer targets exactly one named module kind")
        elif self.target is not None:
            raise ValueError(f"{self.role} takes no target module")
        if self.role == "commentator":
            if self.stance is None:
                raise ValueError("a commentator carries a stance")
        elif self.stance is not None:
            raise ValueError(f"{self.role} takes no stance")

    def token(self) -> str:
        if self.role == "designer":
            return f"designer:{self.target.name}"
        if self.role == "commentator":
            return f"commentator:{self.stance.value}"
        return self.role


ANALYZER = AgentKind("analyzer")
REFLECTOR = AgentKind("reflector")
SIMULATOR = AgentKind("simulator")
QUESTIONER = AgentKind("questioner")


def designer(target: ModuleKind) -> AgentKind:
    return AgentKind("designer", target=target)


def commentator(stance: Stance) -> AgentKind:
    return AgentKind("commentator", stance=stance)


@dataclass(frozen=True)
class AgentSpec:
    """One runnable agent: kind, meta prompt and expected output schema."""

    kind: AgentKind
    meta_prompt: PromptDocument
    output_schema: str = ""
    endpoint_override: EndpointConfig | None = None

    def __post_init__(self):
        expected = SCHEMA_BY_ROLE[self.kind.role]
        if not self.output_schema:
            object.__setattr__(self, "output_schema", expected)
        elif self.output_schema != expected:
            raise ValueError(
                f"{self.kind.token()} emits schema {expected}, not {self.output_schema}"
            )
        report = lint(self.meta_prompt)
        if report.has_errors():
            raise ValueError(
                f"meta prompt for {self.kind.token()} has lint errors: "
                + "; ".join(f.message for f in report.errors())
            )


@dataclass(frozen=True)
class TaskBrief:
    """The user's natural-language task description."""

    task_text: str
    domain_hint: str | None = None
    language: str = "English"

    def __post_init__(self):
        if not self.task_text.strip():
            raise ValueError("task_text must be non-empty")

    def to_dict(self) -> dict:
        return {
            "task_text": self.task_text,
            "domain_hint": self.domain_hint,
            "language": self.language,
        }

    @classmethod
    def from_dict(cls, data: dict) -> TaskBrief:
        return cls(
            task_text=data["task_text"],
            domain_hint=data.get("domain_hint"),
            language=data.get("language", "English"),
        )


def _canonical_sort(kinds: list[ModuleKind]) -> tuple[ModuleKind, ...]:
    order = {k.key(): i for i, k in enumerate(CANONICAL_ORDER)}
    last = len(order)

    def key(kind: ModuleKind):
        if kind.key() == INITIALIZATION.key():
            return (2, 0, kind.key())
        return (0, order.get(kind.key(), last), kind.key())

    return tuple(sorted(kinds, key=key))


@dataclass(frozen=True)
class ActivationState:
    """The module set an analysis step selected, with optional rationale.

    Role and Goals are always present: a prompt without them cannot pass
    lint, so the floor is forced during normalization.
    """

    activated: tuple[ModuleKind, ...]
    rationale: dict[ModuleKind, str] = field(default_factory=dict)

    def __post_init__(self):
        keys = {k.key() for k in self.activated}
        if ROLE.key() not in keys or GOALS.key() not in keys:
            raise ValueError("activation must include Role and Goals")
        for kind in self.rationale:
            if kind.key() not in keys:
                raise ValueError(f"rationale for non-activated module: {kind.name}")

    @classmethod
    def of(cls, kinds: list[ModuleKind], rationale: dict[ModuleKind, str] | None = None) -> ActivationState:
        merged: dict[str, ModuleKind] = {k.key(): k for k in kinds}
        merged.setdefault(ROLE.key(), ROLE)
        merged.setdefault(GOALS.key(), GOALS)
        ordered = _canonical_sort(list(merged.values()))
        rationale = {
            kind: text
            for kind, text in (rationale or {}).items()
            if kind.key() in merged
        }
        return cls(activated=ordered, rationale=rationale)

    def names(self) -> tuple[str, ...]:
        return tuple(k.name for k in self.activated)

    def to_dict(self) -> dict:
        return {
            "activated": list(self.names()),
            "rationale": {k.name: v for k, v in sorted(self.rationale.items(), key=lambda kv: kv[0].name)},
        }


USER_AUTHOR = "user"
USER_STANCE = "user"


@dataclass(frozen=True)
class CommentIssue:
    text: str
    module_hint: ModuleKind | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("issue text must be non-empty")

    def to_dict(self) -> dict:
        return {"module": self.module_hint.name if self.module_hint else None, "text": self.text}


@dataclass(frozen=True)
class Comment:
    """One evaluation of a test dialogue, by a critic agent or the user."""

    author: str
    stance: str
    score: int | None = None
    issues: tuple[CommentIssue, ...] = ()

    def __post_init__(self):
        valid = {s.value for s in Stance} | {USER_STANCE}
        if self.stance not in valid:
            raise ValueError(f"unknown stance: {self.stance}")
        if self.stance != USER_STANCE:
            if self.score is None:
                raise ValueError("critic comments carry a score")
            if not 1 <= self.score <= 10:
                raise ValueError("score must be within 1..10")
        object.__setattr__(self, "issues", tuple(self.issues))

    @property
    def is_user(self) -> bool:
        return self.stance == USER_STANCE

    def to_dict(self) -> dict:
        return {
            "author": self.author,
            "stance": self.stance,
            "score": self.score,
            "issues": [i.to_dict() for i in self.issues],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Comment:
        from ..langgpt import resolve_module_name

        issues = tuple(
            CommentIssue(
                text=i["text"],
                module_hint=resolve_module_name(i["module"]) if i.get("module") else None,
            )
            for i in data.get("issues", [])
        )
        return cls(
            author=data["author"],
            stance=data["stance"],
            score=data.get("score"),
            issues=issues,
        )


def user_comment(text: str, module_hint: ModuleKind | None = None) -> Comment:
    return Comment(
        author=USER_AUTHOR,
        stance=USER_STANCE,
        issues=(CommentIssue(text=text, module_hint=module_hint),),
    )


@dataclass(frozen=True)
class ReflectionDirectives:
    """Per-module revision instructions; an empty map means converged."""

    directives: dict[ModuleKind, str] = field(default_factory=dict)

    def __post_init__(self):
        for kind, text in self.directives.items():
            if not text.strip():
                raise ValueError(f"empty directive for {kind.name}")

    def is_empty(self) -> bool:
        return not self.directives

    def kinds(self) -> tuple[ModuleKind, ...]:
        return _canonical_sort(list(self.directives.keys()))

    def to_dict(self) -> dict:
        return {k.name: self.directives[k] for k in self.kinds()}
