"""LangGPT document model: grammar, parser, canonical renderer, linter."""

from .diffing import diff
from .errors import (
    DuplicateModuleError,
    EmptySlotError,
    LangGptError,
    MalformedHeadingError,
    MissingRoleError,
    NoActionsError,
    ParseError,
)
from .linter import LintFinding, LintReport, lint, profile_version
from .model import (
    BACKGROUND,
    CANONICAL_ORDER,
    COMMAND,
    CONSTRAINTS,
    EXAMPLES,
    GOALS,
    INITIALIZATION,
    NAMED_KINDS,
    OUTPUT_FORMAT,
    PROFILE,
    ROLE,
    SKILLS,
    STYLE,
    SUGGESTION,
    WORKFLOW,
    Action,
    Assignment,
    Element,
    Freeform,
    ModuleBlock,
    ModuleKind,
    PromptDocument,
    Subsection,
    is_named_module,
    make_document,
    resolve_module_name,
)
from .parser import classify_element, parse
from .renderer import render, render_block, render_element
from .templates import expand_action, expand_assignment

__all__ = [
    "Action",
    "Assignment",
    "BACKGROUND",
    "CANONICAL_ORDER",
    "COMMAND",
    "CONSTRAINTS",
    "DuplicateModuleError",
    "Element",
    "EmptySlotError",
    "EXAMPLES",
    "Freeform",
    "GOALS",
    "INITIALIZATION",
    "LangGptError",
    "LintFinding",
    "LintReport",
    "MalformedHeadingError",
    "MissingRoleError",
    "ModuleBlock",
    "ModuleKind",
    "NAMED_KINDS",
    "NoActionsError",
    "OUTPUT_FORMAT",
    "ParseError",
    "PROFILE",
    "PromptDocument",
    "ROLE",
    "SKILLS",
    "STYLE",
    "SUGGESTION",
    "Subsection",
    "WORKFLOW",
    "classify_element",
    "diff",
    "expand_action",
    "expand_assignment",
    "is_named_module",
    "lint",
    "make_document",
    "parse",
    "profile_version",
    "render",
    "render_block",
    "render_element",
    "resolve_module_name",
]
