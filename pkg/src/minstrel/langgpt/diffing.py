"""Module-level diff between two documents.

A module counts as changed when its canonical block rendering differs,
including blocks present on only one side. Used by the orchestrator to
assert that reflection touches exactly the directed modules.
"""

from __future__ import annotations

from .model import ModuleKind, PromptDocument
from .renderer import render_block


def diff(before: PromptDocument, after: PromptDocument) -> frozenset[ModuleKind]:
    """Return the set of module kinds whose canonical rendering differs."""
    before_map = {b.kind.key(): (b.kind, render_block(before, b)) for b in before.blocks}
    after_map = {b.kind.key(): (b.kind, render_block(after, b)) for b in after.blocks}

    changed: set[ModuleKind] = set()
    for key in before_map.keys() | after_map.keys():
        before_entry = before_map.get(key)
        after_entry = after_map.get(key)
        if before_entry is None or after_entry is None:
            changed.add((after_entry or before_entry)[0])  # type: ignore[index]
        elif before_entry[1] != after_entry[1]:
            changed.add(after_entry[0])
    return frozenset(changed)
