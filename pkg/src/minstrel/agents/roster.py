"""Loading of agent meta prompts and the default agent roster.

Meta prompts are themselves structural prompt documents shipped with the
package (``agents/*.lgpt.md``); the framework runs on its own format. The
designer and commentator files are templates with ``{module}`` and
``{stance}`` placeholders filled per target.
"""

from __future__ import annotations

from importlib import resources

from ..gateway import EndpointConfig
from ..langgpt import (
    Action,
    Assignment,
    Freeform,
    ModuleBlock,
    ModuleKind,
    PromptDocument,
    Subsection,
    parse,
)
from .kinds import (
    ANALYZER,
    QUESTIONER,
    REFLECTOR,
    SIMULATOR,
    STANCE_ROSTER,
    AgentSpec,
    Stance,
    commentator,
    designer,
)

STANCE_INSTRUCTIONS = {
    Stance.CRITICAL: "hunt for flaws, gaps and risky behaviour; be hard to please.",
    Stance.FAVORABLE: "highlight what works and give credit generously.",
    Stance.NEUTRAL: "weigh strengths and weaknesses evenly; no leaning either way.",
}


def load_meta_prompt(name: str) -> PromptDocument:
    """Read one packaged meta-prompt file by agent name."""
    text = resources.files(__package__).joinpath(f"{name}.lgpt.md").read_text(encoding="utf-8")
    return parse(text)


def _fill(text: str, mapping: dict[str, str]) -> str:
    for key, value in mapping.items():
        text = text.replace("{" + key + "}", value)
    return text


def substitute(doc: PromptDocument, mapping: dict[str, str]) -> PromptDocument:
    """Fill ``{placeholder}`` tokens in every slot of a document."""

    def fill_element(element):
        if isinstance(element, Assignment):
            return Assignment(_fill(element.property, mapping), _fill(element.value, mapping))
        if isinstance(element, Action):
            return Action(
                input_property=_fill(element.input_property, mapping),
                input_value=_fill(element.input_value, mapping),
                actions=tuple(_fill(step, mapping) for step in element.actions),
                result=_fill(element.result, mapping) if element.result else None,
            )
        return Freeform(_fill(element.text, mapping))

    blocks = tuple(
        ModuleBlock(
            kind=block.kind,
            title=_fill(block.title, mapping) if block.title else None,
            elements=tuple(fill_element(e) for e in block.elements),
            subsections=tuple(
                Subsection(
                    title=_fill(s.title, mapping),
                    elements=tuple(fill_element(e) for e in s.elements),
                )
                for s in block.subsections
            ),
        )
        for block in doc.blocks
    )
    return PromptDocument(role_name=_fill(doc.role_name, mapping), blocks=blocks)


def analyzer_spec(endpoint: EndpointConfig | None = None) -> AgentSpec:
    return AgentSpec(ANALYZER, load_meta_prompt("analyzer"), endpoint_override=endpoint)


def reflector_spec(endpoint: EndpointConfig | None = None) -> AgentSpec:
    return AgentSpec(REFLECTOR, load_meta_prompt("reflector"), endpoint_override=endpoint)


def simulator_spec(endpoint: EndpointConfig | None = None) -> AgentSpec:
    return AgentSpec(SIMULATOR, load_meta_prompt("simulator"), endpoint_override=endpoint)


def questioner_spec(endpoint: EndpointConfig | None = None) -> AgentSpec:
    return AgentSpec(QUESTIONER, load_meta_prompt("questioner"), endpoint_override=endpoint)


def designer_spec(target: ModuleKind, endpoint: EndpointConfig | None = None) -> AgentSpec:
    template = load_meta_prompt("designer")
    meta = substitute(template, {"module": target.name})
    return AgentSpec(designer(target), meta, endpoint_override=endpoint)


def commentator_specs(endpoint: EndpointConfig | None = None) -> list[AgentSpec]:
    """The fixed five-critic roster: two critical, two favorable, one neutral."""
    template = load_meta_prompt("commentator")
    specs = []
    for stance in STANCE_ROSTER:
        meta = substitute(
            template,
            {"stance": stance.value, "stance_instruction": STANCE_INSTRUCTIONS[stance]},
        )
        specs.append(AgentSpec(commentator(stance), meta, endpoint_override=endpoint))
    return specs
