from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from minstrel.agents import TaskBrief, user_comment
from minstrel.gateway import ScriptedGateway, load_fixture_pack
from minstrel.langgpt import (
    CONSTRAINTS,
    GOALS,
    PROFILE,
    ROLE,
    SKILLS,
    STYLE,
    WORKFLOW,
    diff,
    render,
)
from minstrel.orchestrator import (
    NotFinalizedError,
    SessionConfig,
    SessionFailedError,
    SessionNotAwaitingInputError,
    SessionState,
    SessionStateError,
    export_session,
    finalize,
    import_session,
    run_reflection_pass,
    run_test_pass,
    run_to_completion,
    start_session,
    submit_user_comments,
)

import packs
from conftest import FIXTURES

BRIEF = TaskBrief(task_text="You need to generate a title for the article.")


def title_gateway():
    pack = load_fixture_pack(FIXTURES / "sessions" / "title.json")
    return (
        ScriptedGateway.from_pack(pack),
        TaskBrief.from_dict(pack["brief"]),
        SessionConfig.from_dict(pack["config"]),
    )


def scripted(responses):
    return ScriptedGateway.from_responses(responses)


class TestDesignPass:
    def test_title_fixture_matches_table_blocks(self, title_text):
        gateway, brief, config = title_gateway()
        session = start_session(brief, config, gateway)
        assert session.state == SessionState.DRAFTED
        assert len(session.drafts) == 1
        assert render(session.drafts[0]) == title_text
        kinds = {b.kind.name for b in session.drafts[0].blocks}
        assert kinds == {"Role", "Profile", "Goals", "Constraints", "Workflow", "Style"}
        # one analyzer call plus one designer per activated module
        assert gateway.call_count() == 1 + 6

    def test_floor_only_activation(self):
        responses = [packs.fenced({"activated": [], "rationale": {}})]
        responses += packs.design_responses([ROLE, GOALS])
        session = start_session(BRIEF, SessionConfig(), scripted(responses))
        assert [b.kind.name for b in session.drafts[0].blocks] == ["Role", "Goals"]

    def test_gateway_exhausted_mid_design_fails_atomically(self):
        responses = [packs.fenced({"activated": ["Profile", "Style"], "rationale": {}})]
        responses += packs.design_responses([ROLE, GOALS])[:1]  # only Role arrives
        with pytest.raises(SessionFailedError) as exc:
            start_session(BRIEF, SessionConfig(), scripted(responses))
        session = exc.value.session
        assert session.state == SessionState.FAILED
        assert session.drafts == []
        assert session.failure_reason is not None

    def test_drafts_assembled_in_canonical_order(self):
        activated = [STYLE, PROFILE, WORKFLOW]
        responses = [
            packs.fenced({"activated": [k.name for k in activated], "rationale": {}})
        ]
        responses += packs.design_responses([ROLE, GOALS, PROFILE, STYLE, WORKFLOW])
        session = start_session(BRIEF, SessionConfig(), scripted(responses))
        names = [b.kind.name for b in session.drafts[0].blocks]
        assert names == ["Role", "Profile", "Goals", "Style", "Workflow"]


class TestTestPass:
    def test_transcript_and_stance_tally(self):
        responses = [packs.fenced({"activated": [], "rationale": {}})]
        responses += packs.design_responses([ROLE, GOALS])
        responses += packs.test_pass_responses(3, [])
        gateway = scripted(responses)
        session = start_session(BRIEF, SessionConfig(test_turns=3), gateway)
        transcript, comments = run_test_pass(session, gateway)
        assert len(transcript) == 6
        assert [m.role for m in transcript] == ["user", "assistant"] * 3
        tally = {
            stance: sum(1 for c in comments if c.stance == stance)
            for stance in ("critical", "favorable", "neutral")
        }
        assert tally == {"critical": 2, "favorable": 2, "neutral": 1}
        assert session.state == SessionState.TESTED

    def test_minimal_single_turn(self):
        responses = [packs.fenced({"activated": [], "rationale": {}})]
        responses += packs.design_responses([ROLE, GOALS])
        responses += packs.test_pass_responses(1, [])
        gateway = scripted(responses)
        session = start_session(BRIEF, SessionConfig(test_turns=1), gateway)
        transcript, _ = run_test_pass(session, gateway)
        assert len(transcript) == 2

    def test_guard_rejects_wrong_state(self):
        responses = [packs.fenced({"activated": [], "rationale": {}})]
        responses += packs.design_responses([ROLE, GOALS])
        responses += packs.test_pass_responses(1, [])
        gateway = scripted(responses)
        session = start_session(BRIEF, SessionConfig(test_turns=1), gateway)
        run_test_pass(session, gateway)
        before = export_session(session)
        with pytest.raises(SessionStateError):
            run_test_pass(session, gateway)
        assert export_session(session) == before


class TestUserComments:
    def make_tested_session(self, interactive=True):
        responses = [packs.fenced({"activated": [], "rationale": {}})]
        responses += packs.design_responses([ROLE, GOALS])
        responses += packs.test_pass_responses(1, [])
        gateway = scripted(responses)
        config = SessionConfig(test_turns=1, interactive=interactive)
        session = start_session(BRIEF, config, gateway)
        run_test_pass(session, gateway)
        return session, gateway

    def test_interactive_enters_awaiting_user(self):
        session, _ = self.make_tested_session(interactive=True)
        assert session.state == SessionState.AWAITING_USER

    def test_comment_appended_and_state_returns_to_tested(self):
        session, _ = self.make_tested_session()
        submit_user_comments(session, [user_comment("title style too informal")])
        assert session.state == SessionState.TESTED
        assert session.comments[-1].is_user
        assert session.comments[-1].issues[0].text == "title style too informal"

    def test_empty_submission_is_valid(self):
        session, _ = self.make_tested_session()
        submit_user_comments(session, [])
        assert session.state == SessionState.TESTED

    def test_finalized_session_rejects_comments(self):
        gateway, brief, config = title_gateway()
        session = start_session(brief, config, gateway)
        run_to_completion(session, gateway)
        with pytest.raises(SessionNotAwaitingInputError):
            submit_user_comments(session, [user_comment("too late")])


class TestReflectionPass:
    def test_directive_locality(self):
        gateway, brief, config = title_gateway()
        session = start_session(brief, config, gateway)
        run_test_pass(session, gateway)
        run_reflection_pass(session, gateway)
        assert session.state == SessionState.DRAFTED
        assert len(session.drafts) == 2
        changed = diff(session.drafts[0], session.drafts[1])
        assert changed == frozenset({CONSTRAINTS, STYLE})
        assert set(session.directives_history[0].kinds()) == {CONSTRAINTS, STYLE}

    def test_empty_directives_finalize(self):
        responses = [packs.fenced({"activated": [], "rationale": {}})]
        responses += packs.design_responses([ROLE, GOALS])
        responses += packs.test_pass_responses(1, [])
        responses += [packs.reflector_response([])]
        gateway = scripted(responses)
        session = start_session(BRIEF, SessionConfig(test_turns=1), gateway)
        run_test_pass(session, gateway)
        run_reflection_pass(session, gateway)
        assert session.state == SessionState.FINALIZED
        assert len(session.drafts) == 1

    def test_max_reflections_zero_finalizes_despite_directives(self):
        responses = [packs.fenced({"activated": [], "rationale": {}})]
        responses += packs.design_responses([ROLE, GOALS])
        responses += packs.test_pass_responses(1, [GOALS])
        responses += [packs.reflector_response([GOALS])]
        gateway = scripted(responses)
        session = start_session(
            BRIEF, SessionConfig(test_turns=1, max_reflections=0), gateway
        )
        run_test_pass(session, gateway)
        run_reflection_pass(session, gateway)
        assert session.state == SessionState.FINALIZED
        assert session.reflections_done == 0
        assert len(session.drafts) == 1

    def test_reflection_requires_tested_state(self):
        gateway, brief, config = title_gateway()
        session = start_session(brief, config, gateway)
        with pytest.raises(SessionStateError):
            run_reflection_pass(session, gateway)

    def test_directive_for_absent_module_adds_block(self):
        responses = [packs.fenced({"activated": [], "rationale": {}})]
        responses += packs.design_responses([ROLE, GOALS])
        responses += packs.test_pass_responses(1, [SKILLS])
        responses += [packs.reflector_response([SKILLS])]
        responses += [packs.block_response(SKILLS, ["Skills content r1"])]
        gateway = scripted(responses)
        session = start_session(BRIEF, SessionConfig(test_turns=1), gateway)
        run_test_pass(session, gateway)
        run_reflection_pass(session, gateway)
        assert diff(session.drafts[0], session.drafts[1]) == frozenset({SKILLS})
        assert session.drafts[1].has(SKILLS)


class TestFinalize:
    def test_full_fixture_session(self):
        gateway, brief, config = title_gateway()
        session = start_session(brief, config, gateway)
        doc = run_to_completion(session, gateway)
        assert len(doc.blocks) == 6
        assert "Reject and regenerate" in render(doc)

    def test_floor_session_yields_two_blocks(self):
        responses = [packs.fenced({"activated": [], "rationale": {}})]
        responses += packs.design_responses([ROLE, GOALS])
        responses += packs.test_pass_responses(1, [])
        responses += [packs.reflector_response([])]
        gateway = scripted(responses)
        session = start_session(BRIEF, SessionConfig(test_turns=1), gateway)
        doc = run_to_completion(session, gateway)
        assert len(doc.blocks) == 2

    def test_not_finalized_guard(self):
        gateway, brief, config = title_gateway()
        session = start_session(brief, config, gateway)
        with pytest.raises(NotFinalizedError):
            finalize(session)

    def test_failed_session_not_finalizable(self):
        responses = [packs.fenced({"activated": [], "rationale": {}})]
        with pytest.raises(SessionFailedError) as exc:
            start_session(BRIEF, SessionConfig(), scripted(responses))
        with pytest.raises(NotFinalizedError):
            finalize(exc.value.session)


class TestBoundedWork:
    def test_exact_call_count_title_fixture(self):
        gateway, brief, config = title_gateway()
        session = start_session(brief, config, gateway)
        run_to_completion(session, gateway)
        # 1 analyzer + 6 designers
        # + (2 dialogue + 10 commentators + 1 reflector + 2 revisions)
        # + (2 dialogue + 10 commentators + 1 reflector)
        assert gateway.call_count() == 7 + 15 + 13
        assert gateway.remaining() == 0

    def test_formula_on_scripted_pack(self):
        activated = [ROLE, GOALS, PROFILE, STYLE]
        rounds = [[STYLE], [PROFILE, STYLE]]
        responses = packs.build_session_responses(
            activated, rounds, test_turns=2, max_reflections=3
        )
        gateway = scripted(responses)
        config = SessionConfig(test_turns=2, max_reflections=3)
        session = start_session(BRIEF, config, gateway)
        run_to_completion(session, gateway)
        assert gateway.call_count() == packs.expected_call_count(4, rounds, 2)


class TestDeterminism:
    def run_once(self):
        gateway, brief, config = title_gateway()
        session = start_session(brief, config, gateway)
        doc = run_to_completion(session, gateway)
        from minstrel.gateway import export_transcript

        return render(doc), export_session(session), export_transcript(gateway.exchanges.all())

    def test_two_runs_byte_identical(self):
        first = self.run_once()
        second = self.run_once()
        assert first == second

    def test_export_import_roundtrip(self):
        gateway, brief, config = title_gateway()
        session = start_session(brief, config, gateway)
        run_test_pass(session, gateway)
        dumped = export_session(session)
        loaded = import_session(dumped)
        assert export_session(loaded) == dumped
        assert loaded.state == session.state
        assert loaded.drafts == session.drafts


class TestMonotoneHistory:
    def test_history_only_grows(self):
        gateway, brief, config = title_gateway()
        session = start_session(brief, config, gateway)
        sizes = []

        def snapshot():
            sizes.append(
                (
                    len(session.drafts),
                    len(session.transcripts),
                    len(session.comments),
                    len(session.directives_history),
                )
            )

        snapshot()
        while session.state == SessionState.DRAFTED:
            run_test_pass(session, gateway)
            snapshot()
            run_reflection_pass(session, gateway)
            snapshot()
        for before, after in zip(sizes, sizes[1:]):
            assert all(b <= a for b, a in zip(before, after))


@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_termination_and_locality_property(data):
    """Randomized fixture packs always terminate within the reflection bound,
    and every revision touches exactly its directed modules."""
    optional = [PROFILE, CONSTRAINTS, STYLE, WORKFLOW, SKILLS]
    extra = data.draw(st.lists(st.sampled_from(optional), unique=True, max_size=3))
    activated = [ROLE, GOALS] + extra
    max_reflections = data.draw(st.integers(min_value=0, max_value=2))
    test_turns = data.draw(st.integers(min_value=1, max_value=2))
    converge = data.draw(st.booleans())
    # a bound-hit ending needs the whole reflection budget spent on revisions
    round_count = (
        max_reflections
        if not converge
        else data.draw(st.integers(min_value=0, max_value=max_reflections))
    )
    rounds = [
        data.draw(
            st.lists(st.sampled_from(activated[1:]), unique=True, min_size=1, max_size=2)
        )
        for _ in range(round_count)
    ]

    responses = packs.build_session_responses(
        activated, rounds, test_turns, max_reflections, converge=converge
    )
    gateway = ScriptedGateway.from_responses(responses)
    config = SessionConfig(test_turns=test_turns, max_reflections=max_reflections)
    session = start_session(BRIEF, config, gateway)
    run_to_completion(session, gateway)

    assert session.state == SessionState.FINALIZED
    assert session.test_passes_run() <= max_reflections + 1
    assert len(session.drafts) == len(session.directives_history) + 1
    for index, directives in enumerate(session.directives_history):
        changed = diff(session.drafts[index], session.drafts[index + 1])
        assert changed == frozenset(directives.kinds())
    assert gateway.call_count() == packs.expected_call_count(
        len(activated), rounds, test_turns
    )
