"""Rule-based linter for prompt documents.

Rules:

====== ======== ===========================================================
 id    severity  meaning
====== ======== ===========================================================
E001   error     Goals module missing
E002   error     empty module block (no elements, no subsections)
W001   warning   Constraints module absent
W002   warning   Initialization is not the last block in source order
W003   warning   subsection under a kind other than Workflow/Examples/
                 Suggestion/Command
I001   info      Profile missing (or Profile without a version field)
====== ======== ===========================================================

Error severity means the document should not ship to a model by default.
Findings are sorted by (line, rule_id) and identical across runs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    COMMAND,
    CONSTRAINTS,
    EXAMPLES,
    GOALS,
    INITIALIZATION,
    PROFILE,
    ROLE,
    SUGGESTION,
    WORKFLOW,
    Assignment,
    Freeform,
    ModuleBlock,
    PromptDocument,
)

SUBSECTION_KINDS = (WORKFLOW, EXAMPLES, SUGGESTION, COMMAND)

_VERSION_LINE_RE = re.compile(r"^version\s*[:：]\s*(.+)$", re.IGNORECASE)


@dataclass(frozen=True)
class LintFinding:
    severity: str  # "error" | "warning" | "info"
    rule_id: str
    line: int
    message: str


@dataclass(frozen=True)
class LintReport:
    findings: tuple[LintFinding, ...]

    def errors(self) -> tuple[LintFinding, ...]:
        return tuple(f for f in self.findings if f.severity == "error")

    def has_errors(self) -> bool:
        return bool(self.errors())

    def to_dict(self) -> dict:
        return {
            "findings": [
                {
                    "severity": f.severity,
                    "rule_id": f.rule_id,
                    "line": f.line,
                    "message": f.message,
                }
                for f in self.findings
            ]
        }


def profile_version(doc: PromptDocument) -> str | None:
    """Extract the version field from the Profile module, if any.

    Accepts the assignment form (``The version is 1.2.0.``) and the plain
    ``version: 1.2.0`` freeform convention.
    """
    profile = doc.block(PROFILE)
    if profile is None:
        return None
    elements = list(profile.elements)
    for subsection in profile.subsections:
        elements.extend(subsection.elements)
    for element in elements:
        if isinstance(element, Assignment) and element.property.strip().lower() == "version":
            return element.value.strip()
        if isinstance(element, Freeform):
            match = _VERSION_LINE_RE.match(element.text)
            if match:
                return match.group(1).strip()
    return None


def _empty_blocks(doc: PromptDocument) -> list[ModuleBlock]:
    # The Role block's payload is the role name on the heading, so it is
    # allowed to carry no bullets.
    return [b for b in doc.blocks if b.kind != ROLE and b.is_empty()]


def lint(doc: PromptDocument) -> LintReport:
    """Apply the rule set; deterministic for equal documents."""
    findings: list[LintFinding] = []

    if not doc.has(GOALS):
        findings.append(LintFinding("error", "E001", 0, "the Goals module is missing"))

    for block in _empty_blocks(doc):
        findings.append(
            LintFinding(
                "error", "E002", block.source_line, f"the {block.kind.name} block is empty"
            )
        )

    if not doc.has(CONSTRAINTS):
        findings.append(
            LintFinding(
                "warning",
                "W001",
                0,
                "no Constraints module: hard requirements are unspecified",
            )
        )

    init = doc.block(INITIALIZATION)
    if init is not None and doc.blocks[-1].kind != INITIALIZATION:
        findings.append(
            LintFinding(
                "warning",
                "W002",
                init.source_line,
                "Initialization should be the last module",
            )
        )

    allowed = {k.key() for k in SUBSECTION_KINDS}
    for block in doc.blocks:
        if block.kind.key() in allowed:
            continue
        for subsection in block.subsections:
            findings.append(
                LintFinding(
                    "warning",
                    "W003",
                    subsection.source_line,
                    f"subsections are unusual under {block.kind.name}",
                )
            )

    profile = doc.block(PROFILE)
    if profile is None:
        findings.append(
            LintFinding("info", "I001", 0, "no Profile module: version defaults to 0.1.0")
        )
    elif profile_version(doc) is None:
        findings.append(
            LintFinding(
                "info",
                "I001",
                profile.source_line,
                "Profile has no version field",
            )
        )

    findings.sort(key=lambda f: (f.line, f.rule_id))
    return LintReport(findings=tuple(findings))
