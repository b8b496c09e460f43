"""Programmatic fixture-pack construction for orchestrator tests.

Builds the exact response sequence a session will consume, so tests can
assert call counts and diffs precisely.
"""

from __future__ import annotations

import json

from minstrel.langgpt import CANONICAL_ORDER, GOALS, INITIALIZATION, ROLE, ModuleKind


def fenced(payload) -> str:
    return "```json\n" + json.dumps(payload) + "\n```"


def canonical_sorted(kinds: list[ModuleKind]) -> list[ModuleKind]:
    order = {k.key(): i for i, k in enumerate(CANONICAL_ORDER)}

    def key(kind: ModuleKind):
        if kind.key() == INITIALIZATION.key():
            return (2, 0)
        return (0, order[kind.key()])

    return sorted(kinds, key=key)


def block_response(kind: ModuleKind, texts: list[str]) -> str:
    return fenced(
        {
            "kind": kind.name,
            "title": None,
            "elements": [{"type": "freeform", "text": t} for t in texts],
            "subsections": [],
        }
    )


def design_responses(activated: list[ModuleKind], revision: int = 0) -> list[str]:
    """One designer response per kind, in the canonical call order."""
    responses = []
    for kind in canonical_sorted(activated):
        if kind.key() == ROLE.key():
            texts = ["Generated Assistant"] if revision == 0 else [f"Generated Assistant r{revision}"]
        else:
            texts = [f"{kind.name} content r{revision}"]
        responses.append(block_response(kind, texts))
    return responses


def comment_response(score: int, hinted: list[ModuleKind]) -> str:
    issues = [
        {"module": kind.name, "text": f"issue about this module (score {score})"}
        for kind in hinted
    ]
    return fenced({"score": score, "issues": issues})


def commentator_round(hinted: list[ModuleKind]) -> list[str]:
    """Five comments; the first critic carries every module hint."""
    return [
        comment_response(4, hinted),
        comment_response(5, []),
        comment_response(8, []),
        comment_response(7, []),
        comment_response(6, []),
    ]


def test_pass_responses(turn_count: int, hinted: list[ModuleKind]) -> list[str]:
    responses = []
    for turn in range(1, turn_count + 1):
        responses.append(f"probe question {turn}")
        responses.append(f"assistant answer {turn}")
    responses.extend(commentator_round(hinted))  # round 1
    responses.extend(commentator_round(hinted))  # debate round
    return responses


def reflector_response(directed: list[ModuleKind]) -> str:
    return fenced(
        {"directives": {kind.name: f"revise the {kind.name} module" for kind in directed}}
    )


def build_session_responses(
    activated: list[ModuleKind],
    rounds: list[list[ModuleKind]],
    test_turns: int,
    max_reflections: int,
    converge: bool = True,
) -> list[str]:
    """Full response script for one batch session.

    ``rounds`` lists the directive targets of each applied revision (must
    fit within ``max_reflections``). With ``converge`` a final empty
    reflection finalizes; otherwise one extra round hits the budget bound,
    which requires the budget to be exactly spent by ``rounds``.
    """
    assert len(rounds) <= max_reflections
    if not converge:
        assert len(rounds) == max_reflections, "bound-hit scripts must spend the budget"
    responses = [fenced({"activated": [k.name for k in activated], "rationale": {}})]
    responses.extend(design_responses(activated))
    for index, directed in enumerate(rounds, start=1):
        responses.extend(test_pass_responses(test_turns, directed))
        responses.append(reflector_response(directed))
        responses.extend(
            block_response(kind, [f"{kind.name} content r{index}"])
            if kind.key() != ROLE.key()
            else block_response(kind, [f"Generated Assistant r{index}"])
            for kind in canonical_sorted(directed)
        )
    final_targets = [] if converge else rounds[-1] if rounds else [GOALS]
    responses.extend(test_pass_responses(test_turns, final_targets))
    responses.append(reflector_response(final_targets))
    return responses


def expected_call_count(
    activated_count: int, rounds: list[list[ModuleKind]], test_turns: int
) -> int:
    """The bounded-work formula, evaluated for a scripted session."""
    calls = 1 + activated_count
    for directed in rounds:
        calls += 2 * test_turns + 10 + 1 + len(directed)
    calls += 2 * test_turns + 10 + 1  # final pass that finalizes
    return calls
