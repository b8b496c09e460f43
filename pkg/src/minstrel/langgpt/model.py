"""Core document model: module kinds, elements, blocks, documents.

The model is immutable; equality is structural and ignores source line
numbers, so a parsed document compares equal to the same document built
programmatically or re-parsed from its canonical rendering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptySlotError, NoActionsError

# ---------------------------------------------------------------------------
# Module kinds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleKind:
    """One module slot of a structural prompt.

    Named kinds use their canonical spelling; custom kinds keep the name as
    written and match case-insensitively.
    """

    name: str
    is_custom: bool = False

    def key(self) -> str:
        """Case-insensitive identity used for uniqueness and diffing."""
        return self.name.casefold()

    def __str__(self) -> str:
        return self.name


ROLE = ModuleKind("Role")
PROFILE = ModuleKind("Profile")
GOALS = ModuleKind("Goals")
CONSTRAINTS = ModuleKind("Constraints")
WORKFLOW = ModuleKind("Workflow")
SKILLS = ModuleKind("Skills")
SUGGESTION = ModuleKind("Suggestion")
BACKGROUND = ModuleKind("Background")
STYLE = ModuleKind("Style")
OUTPUT_FORMAT = ModuleKind("OutputFormat")
EXAMPLES = ModuleKind("Examples")
INITIALIZATION = ModuleKind("Initialization")
COMMAND = ModuleKind("Command")

NAMED_KINDS: tuple[ModuleKind, ...] = (
    ROLE,
    PROFILE,
    GOALS,
    CONSTRAINTS,
    WORKFLOW,
    SKILLS,
    SUGGESTION,
    BACKGROUND,
    STYLE,
    OUTPUT_FORMAT,
    EXAMPLES,
    INITIALIZATION,
    COMMAND,
)

# Canonical rendering order: context before task before process; custom
# blocks keep source order after the named ones; Initialization always last.
CANONICAL_ORDER: tuple[ModuleKind, ...] = (
    ROLE,
    PROFILE,
    BACKGROUND,
    GOALS,
    CONSTRAINTS,
    SKILLS,
    STYLE,
    OUTPUT_FORMAT,
    WORKFLOW,
    EXAMPLES,
    SUGGESTION,
    COMMAND,
)

_ORDER_INDEX = {kind.key(): i for i, kind in enumerate(CANONICAL_ORDER)}

# Heading aliases: singular/plural plus community synonyms, matched after
# lowercasing and squeezing spaces/hyphens/underscores.
_ALIASES: dict[str, ModuleKind] = {}
for _kind in NAMED_KINDS:
    _ALIASES[_kind.key()] = _kind
_ALIASES.update(
    {
        "roles": ROLE,
        "profiles": PROFILE,
        "goal": GOALS,
        "constraint": CONSTRAINTS,
        "attention": CONSTRAINTS,
        "workflows": WORKFLOW,
        "skill": SKILLS,
        "suggestions": SUGGESTION,
        "backgrounds": BACKGROUND,
        "styles": STYLE,
        "outputformat": OUTPUT_FORMAT,
        "outputformats": OUTPUT_FORMAT,
        "example": EXAMPLES,
        "initialization": INITIALIZATION,
        "commands": COMMAND,
    }
)


def _squeeze(name: str) -> str:
    return "".join(ch for ch in name.casefold() if ch not in " \t-_")


def resolve_module_name(name: str) -> ModuleKind:
    """Map a heading name to a named kind via the alias table, else Custom."""
    cleaned = name.strip()
    if not cleaned:
        raise ValueError("module name is empty")
    named = _ALIASES.get(_squeeze(cleaned))
    if named is not None:
        return named
    return ModuleKind(cleaned, is_custom=True)


def is_named_module(name: str) -> bool:
    return _ALIASES.get(_squeeze(name.strip())) is not None


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


def _require_slot(label: str, value: str) -> str:
    cleaned = value.strip()
    if not cleaned:
        raise EmptySlotError(f"{label} must be non-empty")
    if "\n" in cleaned:
        raise EmptySlotError(f"{label} must be a single line")
    return cleaned


@dataclass(frozen=True, eq=False)
class Assignment:
    """Property-style instruction: renders ``The <property> is <value>.``"""

    property: str
    value: str
    source_line: int = 0

    def __post_init__(self):
        object.__setattr__(self, "property", _require_slot("property", self.property))
        object.__setattr__(self, "value", _require_slot("value", self.value))

    def identity(self) -> tuple:
        return ("assignment", self.property, self.value)

    def __eq__(self, other) -> bool:
        return isinstance(other, Assignment) and self.identity() == other.identity()

    def __hash__(self) -> int:
        return hash(self.identity())


@dataclass(frozen=True, eq=False)
class Action:
    """Function-style instruction with ordered steps and optional result."""

    input_property: str
    input_value: str
    actions: tuple[str, ...] = ()
    result: str | None = None
    source_line: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "input_property", _require_slot("input_property", self.input_property)
        )
        object.__setattr__(self, "input_value", _require_slot("input_value", self.input_value))
        steps = tuple(self.actions)
        if not steps:
            raise NoActionsError("an action element needs at least one step")
        steps = tuple(_require_slot("action step", step) for step in steps)
        object.__setattr__(self, "actions", steps)
        if self.result is not None:
            object.__setattr__(self, "result", _require_slot("result", self.result))

    def identity(self) -> tuple:
        return ("action", self.input_property, self.input_value, self.actions, self.result)

    def __eq__(self, other) -> bool:
        return isinstance(other, Action) and self.identity() == other.identity()

    def __hash__(self) -> int:
        return hash(self.identity())


@dataclass(frozen=True, eq=False)
class Freeform:
    """Any other single line of instruction text."""

    text: str
    source_line: int = 0

    def __post_init__(self):
        cleaned = _require_slot("freeform text", self.text)
        if cleaned.startswith("#"):
            raise ValueError("freeform text must not begin with a heading marker")
        object.__setattr__(self, "text", cleaned)

    def identity(self) -> tuple:
        return ("freeform", self.text)

    def __eq__(self, other) -> bool:
        return isinstance(other, Freeform) and self.identity() == other.identity()

    def __hash__(self) -> int:
        return hash(self.identity())


Element = Assignment | Action | Freeform


# ---------------------------------------------------------------------------
# Blocks and documents
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subsection:
    """A ``###`` sub-heading and its elements (e.g. one workflow phase)."""

    title: str
    elements: tuple[Element, ...] = ()
    source_line: int = 0

    def __post_init__(self):
        object.__setattr__(self, "title", _require_slot("subsection title", self.title))
        object.__setattr__(self, "elements", tuple(self.elements))

    def identity(self) -> tuple:
        return (self.title, tuple(e.identity() for e in self.elements))

    def __eq__(self, other) -> bool:
        return isinstance(other, Subsection) and self.identity() == other.identity()

    def __hash__(self) -> int:
        return hash(self.identity())


@dataclass(frozen=True, eq=False)
class ModuleBlock:
    """One module of a prompt: a kind, optional title, elements, subsections.

    Empty blocks are constructible; the linter flags them (E002) rather than
    the parser rejecting them.
    """

    kind: ModuleKind
    title: str | None = None
    elements: tuple[Element, ...] = ()
    subsections: tuple[Subsection, ...] = ()
    source_line: int = 0

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "subsections", tuple(self.subsections))
        if self.title is not None:
            object.__setattr__(self, "title", _require_slot("block title", self.title))

    def is_empty(self) -> bool:
        return not self.elements and not self.subsections

    def identity(self) -> tuple:
        return (
            self.kind.name,
            self.title,
            tuple(e.identity() for e in self.elements),
            tuple(s.identity() for s in self.subsections),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, ModuleBlock) and self.identity() == other.identity()

    def __hash__(self) -> int:
        return hash(self.identity())


@dataclass(frozen=True, eq=False)
class PromptDocument:
    """A whole structural prompt: role name plus ordered module blocks.

    ``blocks`` keeps source order; ``canonical_blocks()`` gives render order.
    Equality compares canonical structure, so parse/render round trips and
    reordered-but-identical documents compare equal.
    """

    role_name: str
    blocks: tuple[ModuleBlock, ...]
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "role_name", _require_slot("role name", self.role_name))
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        roles = [b for b in blocks if b.kind == ROLE]
        if len(roles) != 1:
            raise ValueError("a document needs exactly one Role block")
        seen: set[str] = set()
        for block in blocks:
            key = block.kind.key()
            if key in seen:
                raise ValueError(f"duplicate module: {block.kind.name}")
            seen.add(key)

    # -- lookups ----------------------------------------------------------

    def block(self, kind: ModuleKind) -> ModuleBlock | None:
        for candidate in self.blocks:
            if candidate.kind.key() == kind.key():
                return candidate
        return None

    def has(self, kind: ModuleKind) -> bool:
        return self.block(kind) is not None

    def kinds(self) -> tuple[ModuleKind, ...]:
        return tuple(b.kind for b in self.blocks)

    # -- canonical ordering -------------------------------------------------

    def canonical_blocks(self) -> tuple[ModuleBlock, ...]:
        def sort_key(indexed: tuple[int, ModuleBlock]):
            position, block = indexed
            key = block.kind.key()
            if key == INITIALIZATION.key():
                return (2, 0, position)
            if key in _ORDER_INDEX:
                return (0, _ORDER_INDEX[key], position)
            return (1, 0, position)

        return tuple(block for _, block in sorted(enumerate(self.blocks), key=sort_key))

    def identity(self) -> tuple:
        return (self.role_name, tuple(b.identity() for b in self.canonical_blocks()))

    def __eq__(self, other) -> bool:
        return isinstance(other, PromptDocument) and self.identity() == other.identity()

    def __hash__(self) -> int:
        return hash(self.identity())


def make_document(role_name: str, blocks: tuple[ModuleBlock, ...] | list[ModuleBlock] = ()) -> PromptDocument:
    """Build a document, prepending the Role block when it is not supplied."""
    blocks = tuple(blocks)
    if not any(b.kind == ROLE for b in blocks):
        blocks = (ModuleBlock(kind=ROLE),) + blocks
    return PromptDocument(role_name=role_name, blocks=blocks)
