from __future__ import annotations

import pytest
from hypothesis import given, settings

from minstrel.langgpt import (
    WORKFLOW,
    Action,
    Assignment,
    EmptySlotError,
    ModuleBlock,
    NoActionsError,
    classify_element,
    expand_action,
    expand_assignment,
    make_document,
    parse,
    render,
    render_element,
)

import strategies


class TestExpandAssignment:
    def test_language_example(self):
        element = expand_assignment("Language", "English")
        assert render_element(element) == "- The Language is English."

    def test_symmetric_filler(self):
        assert render_element(expand_assignment("x", "x")) == "- The x is x."

    def test_output_length_example(self):
        element = expand_assignment("output length", "no more than 500 words")
        assert (
            render_element(element)
            == "- The output length is no more than 500 words."
        )

    @pytest.mark.parametrize("prop,value", [("", "x"), ("x", ""), ("  ", "x")])
    def test_empty_slot(self, prop, value):
        with pytest.raises(EmptySlotError):
            expand_assignment(prop, value)


class TestExpandAction:
    def test_table_workflow_body(self):
        element = expand_action(
            "article",
            "⟨ARTICLE⟩",
            [
                "Analyse the theme of the article",
                "Detecting the main objects and related things described in the article",
                "Summarising the core content from the article",
                "Save the kernel content",
            ],
        )
        assert render_element(element) == (
            "- For the given article of ⟨ARTICLE⟩, please execute the following actions:\n"
            "  1. Analyse the theme of the article\n"
            "  2. Detecting the main objects and related things described in the article\n"
            "  3. Summarising the core content from the article\n"
            "  4. Save the kernel content"
        )

    def test_single_step_with_result(self):
        element = expand_action("x", "y", ["a"], "a")
        assert render_element(element) == (
            "- For the given x of y, please execute the following actions:\n"
            "  1. a\n"
            "  Return the a."
        )

    def test_result_clause_omitted(self):
        element = expand_action("x", "y", ["a"])
        assert "Return the" not in render_element(element)

    def test_no_actions(self):
        with pytest.raises(NoActionsError):
            expand_action("x", "y", [])

    def test_roundtrip_through_workflow_block(self):
        element = expand_action("x", "y", ["first", "second"], "pair")
        doc = make_document("X", [ModuleBlock(kind=WORKFLOW, elements=(element,))])
        recovered = parse(render(doc)).block(WORKFLOW).elements[0]
        assert recovered == element


class TestTemplateInversion:
    @settings(max_examples=80)
    @given(strategies.assignments)
    def test_assignment_inversion(self, element):
        line = render_element(element)[2:]
        assert classify_element(line) == element

    @settings(max_examples=80)
    @given(strategies.actions)
    def test_action_inversion(self, element):
        doc = make_document("X", [ModuleBlock(kind=WORKFLOW, elements=(element,))])
        recovered = parse(render(doc)).block(WORKFLOW).elements[0]
        assert isinstance(recovered, Action)
        assert recovered == element

    @settings(max_examples=80)
    @given(strategies.freeforms)
    def test_freeform_stays_freeform(self, element):
        recovered = classify_element(render_element(element)[2:])
        assert recovered == element

    @settings(max_examples=80)
    @given(strategies.assignments)
    def test_assignment_never_misclassifies(self, element):
        recovered = classify_element(render_element(element)[2:])
        assert isinstance(recovered, Assignment)
