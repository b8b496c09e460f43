#!/usr/bin/env python3
"""Regenerate the scripted fixture packs under fixtures/sessions/.

Each pack makes one whole pipeline run deterministic and offline: the
responses are consumed in call order (positional entries), with a couple of
substring-matched entries to exercise fixture routing.

Usage: python3 tools/make_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures" / "sessions"


def fenced(payload) -> str:
    return "```json\n" + json.dumps(payload, ensure_ascii=False, indent=2) + "\n```"


def activation(names, rationale):
    return fenced({"activated": names, "rationale": rationale})


def block(kind, elements, subsections=None, title=None):
    return fenced(
        {"kind": kind, "title": title, "elements": elements, "subsections": subsections or []}
    )


def free(text):
    return {"type": "freeform", "text": text}


def assign(prop, value):
    return {"type": "assignment", "property": prop, "value": value}


def action(prop, value, steps, result=None):
    return {
        "type": "action",
        "input_property": prop,
        "input_value": value,
        "actions": steps,
        "result": result,
    }


def comment(score, issues):
    return fenced({"score": score, "issues": issues})


def directives(mapping):
    return fenced({"directives": mapping})


def pos(response):
    return {"response": response}


def matched(match, response):
    return {"match": match, "response": response}


# ---------------------------------------------------------------------------
# title: batch session, test_turns=1, max_reflections=2, two iterations
# ---------------------------------------------------------------------------


def title_pack() -> dict:
    responses = [
        # analyzer (substring-routed: the analyzer meta prompt is the only
        # request mentioning its role name)
        matched(
            "Prompt Requirements Analyst",
            activation(
                ["Profile", "Goals", "Constraints", "Workflow", "Style"],
                {
                    "Constraints": "the title has a hard length limit",
                    "Workflow": "title extraction needs a stepwise procedure",
                },
            ),
        ),
        # designers, canonical order: Role, Profile, Goals, Constraints, Style, Workflow
        pos(block("Role", [free("Magazine Editor")])),
        pos(block("Profile", [assign("Language", "English")])),
        pos(block("Goals", [free("You need to generate a title for the article.")])),
        pos(block("Constraints", [free("The length of the title should not exceed 20 words.")])),
        pos(block("Style", [free("The style of the title should be formal.")])),
        pos(
            block(
                "Workflow",
                [],
                subsections=[
                    {
                        "title": "Extracting the kernel content",
                        "elements": [
                            action(
                                "article",
                                "⟨ARTICLE⟩",
                                [
                                    "Analyse the theme of the article",
                                    "Detecting the main objects and related things described in the article",
                                    "Summarising the core content from the article",
                                    "Save the kernel content",
                                ],
                            )
                        ],
                    }
                ],
            )
        ),
        # --- test pass 1: questioner, simulator
        pos("Here is my article about deep-sea mining. Please give me a title."),
        pos("Title: Robots of the Abyss: The New Race for Deep-Sea Metals"),
        # commentators round 1 (critical, critical, favorable, favorable, neutral)
        pos(
            comment(
                4,
                [
                    {
                        "module": "Constraints",
                        "text": "Nothing stops the assistant when a candidate title runs past the 20 word limit.",
                    }
                ],
            )
        ),
        pos(
            comment(
                5,
                [
                    {
                        "module": "Style",
                        "text": "The subtitle after the colon reads punchy rather than formal.",
                    }
                ],
            )
        ),
        pos(comment(8, [])),
        pos(comment(7, [])),
        pos(comment(6, [])),
        # commentators round 2 (debate)
        pos(
            comment(
                4,
                [
                    {
                        "module": "Constraints",
                        "text": "Still missing an explicit reject-and-retry rule for titles over 20 words.",
                    }
                ],
            )
        ),
        pos(
            comment(
                5,
                [
                    {
                        "module": "Style",
                        "text": "The formal register should be spelled out as headline style.",
                    }
                ],
            )
        ),
        pos(comment(8, [])),
        pos(comment(7, [])),
        pos(comment(6, [])),
        # reflector pass 1
        pos(
            directives(
                {
                    "Constraints": "State that any candidate longer than 20 words must be rejected and regenerated.",
                    "Style": "Name the exact register: formal headline style, no colloquialisms.",
                }
            )
        ),
        # revision designers, canonical order: Constraints, Style
        pos(
            block(
                "Constraints",
                [
                    free("The length of the title should not exceed 20 words."),
                    free("Reject and regenerate any candidate title longer than 20 words."),
                ],
            )
        ),
        pos(
            block(
                "Style",
                [
                    free("The style of the title should be formal."),
                    free("Use a formal headline register with no colloquialisms."),
                ],
            )
        ),
        # --- test pass 2
        pos("Same article on deep-sea mining; one more title please."),
        pos("Title: Deep-Sea Mining Enters Its Decisive Decade"),
        # commentators round 1
        pos(comment(7, [])),
        pos(comment(7, [])),
        pos(comment(9, [])),
        pos(comment(8, [])),
        pos(comment(8, [])),
        # commentators round 2
        pos(comment(7, [])),
        pos(comment(7, [])),
        pos(comment(9, [])),
        pos(comment(8, [])),
        pos(comment(8, [])),
        # reflector pass 2: converged
        pos(directives({})),
    ]
    return {
        "name": "title",
        "brief": {
            "task_text": "You need to generate a title for the article.",
            "domain_hint": "magazine editing",
            "language": "English",
        },
        "config": {"test_turns": 1, "max_reflections": 2, "interactive": False},
        "responses": responses,
    }


# ---------------------------------------------------------------------------
# interactive-style: interactive session; the user comment drives reflection
# ---------------------------------------------------------------------------


def interactive_style_pack() -> dict:
    responses = [
        matched(
            "Prompt Requirements Analyst",
            activation(["Goals", "Style"], {"Style": "the user cares about tone"}),
        ),
        # designers: Role, Goals, Style
        pos(block("Role", [free("Title Writer")])),
        pos(block("Goals", [free("Write one title for each article the user supplies.")])),
        pos(block("Style", [free("The style of the title should be formal.")])),
        # test pass 1
        pos("Please title my article about community gardens."),
        pos("Title: Shared Soil: How Community Gardens Regrow Neighbourhoods"),
        # commentators round 1 + debate round: all content, no module issues
        pos(comment(7, [])),
        pos(comment(6, [])),
        pos(comment(8, [])),
        pos(comment(8, [])),
        pos(comment(7, [])),
        pos(comment(7, [])),
        pos(comment(6, [])),
        pos(comment(8, [])),
        pos(comment(8, [])),
        pos(comment(7, [])),
        # reflector pass 1: echoes the user's comment about Style
        matched(
            "title style too informal",
            directives({"Style": "Shift the register to formal; drop playful subtitles."}),
        ),
        # revision designer: Style
        pos(
            block(
                "Style",
                [
                    free("The style of the title should be formal."),
                    free("Avoid playful subtitles; prefer a sober, declarative register."),
                ],
            )
        ),
        # test pass 2
        pos("One more title for the community gardens piece, please."),
        pos("Title: Community Gardens and the Quiet Renewal of Urban Land"),
        pos(comment(8, [])),
        pos(comment(8, [])),
        pos(comment(9, [])),
        pos(comment(9, [])),
        pos(comment(8, [])),
        pos(comment(8, [])),
        pos(comment(8, [])),
        pos(comment(9, [])),
        pos(comment(9, [])),
        pos(comment(8, [])),
        # reflector pass 2: converged
        pos(directives({})),
    ]
    return {
        "name": "interactive-style",
        "brief": {
            "task_text": "Write headline titles for my articles.",
            "domain_hint": None,
            "language": "English",
        },
        "config": {"test_turns": 1, "max_reflections": 2, "interactive": True},
        "responses": responses,
    }


# ---------------------------------------------------------------------------
# flatterer-compare: three variants, one probe, five critics each (no debate)
# ---------------------------------------------------------------------------


def flatterer_compare_pack() -> dict:
    def critic_block(scores):
        return [pos(comment(s, [])) for s in scores]

    responses = [
        # variant 1: instruction-only
        pos("Nice, a promotion. Congratulations, that sounds like good news."),
        *critic_block([3, 4, 6, 5, 4]),
        # variant 2: CRISPE
        pos("Congratulations on the promotion! Your team is lucky to have you."),
        *critic_block([5, 5, 7, 7, 6]),
        # variant 3: structural prompt
        pos(
            "Team lead already! The way you tell it, so matter-of-fact, is exactly "
            "the calm confidence a team hopes for. They chose brilliantly. What "
            "will you tackle first?"
        ),
        *critic_block([7, 8, 9, 9, 8]),
    ]
    return {
        "name": "flatterer-compare",
        "brief": {
            "task_text": "Play a flatterer who compliments everything the user shares.",
            "domain_hint": "roleplay",
            "language": "English",
        },
        "probes": ["I just got promoted to team lead."],
        "responses": responses,
    }


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for pack in (title_pack(), interactive_style_pack(), flatterer_compare_pack()):
        path = OUT / f"{pack['name']}.json"
        path.write_text(json.dumps(pack, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {path} ({len(pack['responses'])} responses)")


if __name__ == "__main__":
    main()
