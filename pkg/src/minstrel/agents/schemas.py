"""Strict JSON output schemas for each agent kind.

Agents emit a single JSON body, preferably inside a ```json fence. The
shapes are documented bit-exact in ``docs/schemas.md``. Validation either
returns a typed value or raises; partially parsed results never escape.
"""

from __future__ import annotations

import json
import re

from ..langgpt import (
    Action,
    Assignment,
    Element,
    Freeform,
    ModuleBlock,
    ModuleKind,
    Subsection,
    is_named_module,
    resolve_module_name,
)
from ..langgpt.model import _ALIASES
from .errors import SchemaViolationError, UnknownModuleNameError, WrongModuleKindError
from .kinds import ActivationState, Comment, CommentIssue

_FENCE_RE = re.compile(r"```(?:json)?\s*\n(.*?)```", re.DOTALL)

_WORD_RE = re.compile(r"[A-Za-z]+")


def extract_json(text: str) -> object:
    """Pull the JSON body out of an agent reply (fenced or bare)."""
    candidate = text.strip()
    fence = _FENCE_RE.search(text)
    if fence:
        candidate = fence.group(1).strip()
    try:
        return json.loads(candidate)
    except json.JSONDecodeError:
        start, end = candidate.find("{"), candidate.rfind("}")
        if start != -1 and end > start:
            try:
                return json.loads(candidate[start : end + 1])
            except json.JSONDecodeError:
                pass
    raise SchemaViolationError("reply does not contain a JSON body", raw=text)


def _named_kind(name: object) -> ModuleKind:
    if not isinstance(name, str) or not name.strip():
        raise SchemaViolationError(f"module name must be a non-empty string, got {name!r}")
    if not is_named_module(name):
        raise UnknownModuleNameError(name)
    return resolve_module_name(name)


def mentioned_modules(text: str) -> set[ModuleKind]:
    """Named modules referenced anywhere in free text, aliases included.

    Scans single words and adjacent word pairs so that multi-word aliases
    such as "output format" are caught too.
    """
    words = _WORD_RE.findall(text)
    candidates = words + [a + b for a, b in zip(words, words[1:])]
    found: set[ModuleKind] = set()
    for candidate in candidates:
        kind = _ALIASES.get(candidate.casefold())
        if kind is not None:
            found.add(kind)
    return found


# ---------------------------------------------------------------------------
# activation.v1
# ---------------------------------------------------------------------------


def parse_activation(raw: str) -> ActivationState:
    payload = extract_json(raw)
    if not isinstance(payload, dict) or "activated" not in payload:
        raise SchemaViolationError("expected {\"activated\": [...]}", raw=raw)
    names = payload["activated"]
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise SchemaViolationError("\"activated\" must be a list of module names", raw=raw)
    kinds = [_named_kind(n) for n in names]
    rationale_raw = payload.get("rationale", {})
    if not isinstance(rationale_raw, dict):
        raise SchemaViolationError("\"rationale\" must be an object", raw=raw)
    rationale = {}
    for name, why in rationale_raw.items():
        kind = _named_kind(name)
        if isinstance(why, str) and why.strip():
            rationale[kind] = why.strip()
    return ActivationState.of(kinds, rationale)


# ---------------------------------------------------------------------------
# module_block.v1
# ---------------------------------------------------------------------------


def element_from_json(data: object) -> Element:
    if not isinstance(data, dict) or "type" not in data:
        raise SchemaViolationError(f"element must be an object with a type, got {data!r}")
    kind = data["type"]
    try:
        if kind == "assignment":
            return Assignment(property=data["property"], value=data["value"])
        if kind == "action":
            return Action(
                input_property=data["input_property"],
                input_value=data["input_value"],
                actions=tuple(data["actions"]),
                result=data.get("result"),
            )
        if kind == "freeform":
            return Freeform(text=data["text"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolationError(f"bad {kind} element: {exc}")
    raise SchemaViolationError(f"unknown element type: {kind!r}")


def element_to_json(element: Element) -> dict:
    if isinstance(element, Assignment):
        return {"type": "assignment", "property": element.property, "value": element.value}
    if isinstance(element, Action):
        return {
            "type": "action",
            "input_property": element.input_property,
            "input_value": element.input_value,
            "actions": list(element.actions),
            "result": element.result,
        }
    return {"type": "freeform", "text": element.text}


def block_from_json(payload: object, expected: ModuleKind | None = None) -> ModuleBlock:
    if not isinstance(payload, dict) or "kind" not in payload:
        raise SchemaViolationError("expected a module block object with a kind")
    kind = _named_kind(payload["kind"])
    if expected is not None and kind.key() != expected.key():
        raise WrongModuleKindError(expected.name, kind.name)
    elements = tuple(element_from_json(e) for e in payload.get("elements", []))
    subsections = []
    for sub in payload.get("subsections", []):
        if not isinstance(sub, dict) or "title" not in sub:
            raise SchemaViolationError("subsection needs a title")
        try:
            subsections.append(
                Subsection(
                    title=sub["title"],
                    elements=tuple(element_from_json(e) for e in sub.get("elements", [])),
                )
            )
        except ValueError as exc:
            raise SchemaViolationError(f"bad subsection: {exc}")
    title = payload.get("title")
    try:
        block = ModuleBlock(kind=kind, title=title, elements=elements, subsections=tuple(subsections))
    except ValueError as exc:
        raise SchemaViolationError(f"bad module block: {exc}")
    if block.is_empty():
        raise SchemaViolationError(f"designed {kind.name} block is empty")
    return block


def block_to_json(block: ModuleBlock) -> dict:
    return {
        "kind": block.kind.name,
        "title": block.title,
        "elements": [element_to_json(e) for e in block.elements],
        "subsections": [
            {"title": s.title, "elements": [element_to_json(e) for e in s.elements]}
            for s in block.subsections
        ],
    }


def parse_module_block(raw: str, expected: ModuleKind) -> ModuleBlock:
    payload = extract_json(raw)
    try:
        return block_from_json(payload, expected)
    except SchemaViolationError as exc:
        raise SchemaViolationError(str(exc), raw=raw)


# ---------------------------------------------------------------------------
# comment.v1
# ---------------------------------------------------------------------------


def parse_comment_body(raw: str) -> tuple[int, tuple[CommentIssue, ...]]:
    """Validate a commentator reply; stance is never read from the model."""
    payload = extract_json(raw)
    if not isinstance(payload, dict):
        raise SchemaViolationError("expected a comment object", raw=raw)
    score = payload.get("score")
    if not isinstance(score, int) or not 1 <= score <= 10:
        raise SchemaViolationError("\"score\" must be an integer within 1..10", raw=raw)
    issues = []
    raw_issues = payload.get("issues", [])
    if not isinstance(raw_issues, list):
        raise SchemaViolationError("\"issues\" must be a list", raw=raw)
    for item in raw_issues:
        if not isinstance(item, dict) or not isinstance(item.get("text"), str) or not item["text"].strip():
            raise SchemaViolationError("each issue needs non-empty text", raw=raw)
        hint = item.get("module")
        module = _named_kind(hint) if hint else None
        issues.append(CommentIssue(text=item["text"].strip(), module_hint=module))
    return score, tuple(issues)


# ---------------------------------------------------------------------------
# directives.v1
# ---------------------------------------------------------------------------


def parse_directives_body(raw: str) -> dict[ModuleKind, str]:
    payload = extract_json(raw)
    if not isinstance(payload, dict) or not isinstance(payload.get("directives"), dict):
        raise SchemaViolationError("expected {\"directives\": {module: instruction}}", raw=raw)
    directives: dict[ModuleKind, str] = {}
    for name, instruction in payload["directives"].items():
        kind = _named_kind(name)
        if not isinstance(instruction, str) or not instruction.strip():
            raise SchemaViolationError(f"empty directive for {name}", raw=raw)
        directives[kind] = instruction.strip()
    return directives


def allowed_directive_targets(comments: list[Comment]) -> set[ModuleKind]:
    """Modules a reflection may target: hinted or named in any issue text."""
    allowed: set[ModuleKind] = set()
    for comment in comments:
        for issue in comment.issues:
            if issue.module_hint is not None:
                allowed.add(issue.module_hint)
            allowed.update(mentioned_modules(issue.text))
    return allowed


SCHEMA_IDS = ("activation.v1", "module_block.v1", "comment.v1", "directives.v1", "text.v1")
