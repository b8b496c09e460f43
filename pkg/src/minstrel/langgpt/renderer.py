"""Canonical renderer: the unique byte representation of a document.

Named blocks are emitted in the fixed canonical order, custom blocks keep
their relative source order after the named ones, and Initialization always
comes last. One blank line separates the role heading, every module heading
and every subsection heading from what precedes it. Equal documents render
to identical bytes.
"""

from __future__ import annotations

from .model import (
    ROLE,
    Action,
    Assignment,
    Element,
    Freeform,
    ModuleBlock,
    PromptDocument,
)


def render_element(element: Element) -> str:
    """Render one element as its canonical bullet (without trailing newline)."""
    if isinstance(element, Assignment):
        return f"- The {element.property} is {element.value}."
    if isinstance(element, Action):
        lines = [
            f"- For the given {element.input_property} of {element.input_value},"
            " please execute the following actions:"
        ]
        for index, step in enumerate(element.actions, start=1):
            lines.append(f"  {index}. {step}")
        if element.result is not None:
            lines.append(f"  Return the {element.result}.")
        return "\n".join(lines)
    if isinstance(element, Freeform):
        return f"- {element.text}"
    raise TypeError(f"unknown element type: {type(element)!r}")


def _block_lines(doc: PromptDocument, block: ModuleBlock) -> list[str]:
    lines: list[str] = []
    if block.kind == ROLE:
        lines.append(f"# Role: {doc.role_name}")
    else:
        heading = f"## {block.kind.name}"
        if block.title:
            heading += f": {block.title}"
        lines.append(heading)
    for element in block.elements:
        lines.append(render_element(element))
    for subsection in block.subsections:
        lines.append("")
        lines.append(f"### {subsection.title}")
        for element in subsection.elements:
            lines.append(render_element(element))
    return lines


def render_block(doc: PromptDocument, block: ModuleBlock) -> str:
    """Canonical text of a single block, heading included."""
    return "\n".join(_block_lines(doc, block)) + "\n"


def render(doc: PromptDocument) -> str:
    """Render a document to its canonical byte-deterministic text."""
    chunks: list[str] = []
    for block in doc.canonical_blocks():
        if chunks:
            chunks.append("")
        chunks.extend(_block_lines(doc, block))
    return "\n".join(chunks) + "\n"
