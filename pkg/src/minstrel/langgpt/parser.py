"""Parser for the ``.lgpt.md`` structural-prompt grammar.

Grammar sketch (full reference in ``docs/grammar.md``):

    # Role: <name>            document opener, exactly one
    ## <Module>[: <title>]    module block (aliases normalize to named kinds,
                              unknown names become custom blocks)
    ### <title>               subsection inside the current block
    - <element>               element bullet, classified by template matching
      1. <step>               ordered steps of an action element
      Return the <result>.    optional action result clause

Element classification: a bullet matching ``The <property> is <value>.``
(case-insensitive template words) parses as an assignment; the opener
``For the given <p> of <v>, please execute the following actions:`` starts
an action; everything else is freeform. Plain non-bullet lines are accepted
leniently as freeform elements; ``fmt`` canonicalizes them into bullets.
"""

from __future__ import annotations

import re

from .errors import DuplicateModuleError, MalformedHeadingError, MissingRoleError
from .model import (
    ROLE,
    Action,
    Assignment,
    Element,
    Freeform,
    ModuleBlock,
    ModuleKind,
    PromptDocument,
    Subsection,
    resolve_module_name,
)

_HEADING_RE = re.compile(r"^(#+)(.*)$")
_ROLE_PAYLOAD_RE = re.compile(r"^role\s*:\s*(.+)$", re.IGNORECASE)
_ASSIGNMENT_RE = re.compile(r"^the (.+?) is (.+)\.$", re.IGNORECASE)
_ACTION_OPEN_RE = re.compile(
    r"^for the given (.+?) of (.+), please execute the following actions:$",
    re.IGNORECASE,
)
_ACTION_STEP_RE = re.compile(r"^\s+(\d+)[.)]\s+(.*)$")
_ACTION_RESULT_RE = re.compile(r"^\s+return the (.+)\.\s*$", re.IGNORECASE)


def classify_element(text: str, line: int = 0) -> Element:
    """Classify a single element line (without the bullet marker)."""
    text = text.strip()
    assignment = _ASSIGNMENT_RE.fullmatch(text)
    if assignment:
        return Assignment(assignment.group(1), assignment.group(2), source_line=line)
    return Freeform(text, source_line=line)


class _BlockBuilder:
    def __init__(self, kind: ModuleKind, title: str | None, line: int):
        self.kind = kind
        self.title = title
        self.line = line
        self.elements: list[Element] = []
        self.subsections: list[_SubsectionBuilder] = []

    def sink(self) -> list[Element]:
        if self.subsections:
            return self.subsections[-1].elements
        return self.elements

    def build(self) -> ModuleBlock:
        return ModuleBlock(
            kind=self.kind,
            title=self.title,
            elements=tuple(self.elements),
            subsections=tuple(s.build() for s in self.subsections),
            source_line=self.line,
        )


class _SubsectionBuilder:
    def __init__(self, title: str, line: int):
        self.title = title
        self.line = line
        self.elements: list[Element] = []

    def build(self) -> Subsection:
        return Subsection(self.title, tuple(self.elements), source_line=self.line)


class _ActionBuilder:
    """Collects an action opener and its continuation lines."""

    def __init__(self, opener_text: str, prop: str, value: str, line: int):
        self.opener_text = opener_text
        self.prop = prop
        self.value = value
        self.line = line
        self.steps: list[str] = []
        self.result: str | None = None

    def build(self) -> Element:
        if not self.steps:
            # Opener with no steps degrades to a verbatim freeform line.
            return Freeform(self.opener_text, source_line=self.line)
        return Action(
            input_property=self.prop,
            input_value=self.value,
            actions=tuple(self.steps),
            result=self.result,
            source_line=self.line,
        )


def parse(text: str) -> PromptDocument:
    """Parse raw document text into a :class:`PromptDocument`.

    Raises :class:`MissingRoleError`, :class:`DuplicateModuleError` or
    :class:`MalformedHeadingError`; any other input parses leniently.
    """
    normalized = text.replace("\r\n", "\n").replace("\r", "\n")
    lines = normalized.split("\n")

    blocks: list[_BlockBuilder] = []
    current: _BlockBuilder | None = None
    pending_action: _ActionBuilder | None = None
    seen_keys: set[str] = set()

    def close_action():
        nonlocal pending_action
        if pending_action is not None and current is not None:
            current.sink().append(pending_action.build())
            pending_action = None

    def add_element(element: Element):
        close_action()
        assert current is not None
        current.sink().append(element)

    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip()
        if not line.strip():
            continue

        heading = _HEADING_RE.match(line)
        if heading and not line[0].isspace():
            hashes, payload = heading.group(1), heading.group(2)
            if payload and not payload.startswith(" "):
                raise MalformedHeadingError(
                    "heading marker must be followed by a space", lineno
                )
            payload = payload.strip()
            level = len(hashes)
            close_action()

            if level == 1:
                role_match = _ROLE_PAYLOAD_RE.match(payload)
                if not role_match:
                    raise MalformedHeadingError(
                        "a level-1 heading must read '# Role: <name>'", lineno
                    )
                if any(b.kind == ROLE for b in blocks):
                    raise DuplicateModuleError("Role", lineno)
                current = _BlockBuilder(ROLE, None, lineno)
                current.role_name = role_match.group(1).strip()  # type: ignore[attr-defined]
                blocks.append(current)
                seen_keys.add(ROLE.key())
                continue

            if current is None:
                raise MissingRoleError(
                    "the document must open with a '# Role: <name>' heading", lineno
                )

            if level == 2:
                name, _, title = payload.partition(":")
                name = name.strip()
                title = title.strip() or None
                if not name:
                    raise MalformedHeadingError("module heading has no name", lineno)
                kind = resolve_module_name(name)
                if kind.key() in seen_keys:
                    raise DuplicateModuleError(kind.name, lineno)
                seen_keys.add(kind.key())
                current = _BlockBuilder(kind, title, lineno)
                blocks.append(current)
                continue

            if level == 3:
                if not payload:
                    raise MalformedHeadingError("subsection heading has no title", lineno)
                current.subsections.append(_SubsectionBuilder(payload, lineno))
                continue

            raise MalformedHeadingError(
                f"heading level {level} is deeper than the grammar allows", lineno
            )

        if current is None:
            raise MissingRoleError(
                "the document must open with a '# Role: <name>' heading", lineno
            )

        if line.startswith("- "):
            close_action()
            payload = line[2:].strip()
            if not payload:
                continue
            if payload.startswith("#"):
                raise MalformedHeadingError(
                    "element text must not begin with a heading marker", lineno
                )
            opener = _ACTION_OPEN_RE.fullmatch(payload)
            if opener:
                pending_action = _ActionBuilder(
                    payload, opener.group(1).strip(), opener.group(2).strip(), lineno
                )
                continue
            current.sink().append(classify_element(payload, lineno))
            continue

        if pending_action is not None and raw[:1].isspace():
            step = _ACTION_STEP_RE.match(raw)
            if step:
                if step.group(2).strip():
                    pending_action.steps.append(step.group(2).strip())
                continue
            result = _ACTION_RESULT_RE.match(raw)
            if result and pending_action.result is None:
                pending_action.result = result.group(1).strip()
                continue
            # fall through: the indented line is not part of the action

        # Lenient fallback: any other non-blank line is a freeform element.
        stripped = line.strip()
        if stripped.startswith("#"):
            raise MalformedHeadingError(
                "indented heading markers are not part of the grammar", lineno
            )
        add_element(Freeform(stripped, lineno))

    close_action()

    if not blocks:
        raise MissingRoleError("no level-1 Role heading found", 0)

    role_builder = blocks[0]
    role_name = getattr(role_builder, "role_name", "")
    return PromptDocument(
        role_name=role_name,
        blocks=tuple(b.build() for b in blocks),
        source=text,
    )
