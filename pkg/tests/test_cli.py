from __future__ import annotations

import json
import pytest
from click.testing import CliRunner

from minstrel.cli import main
from minstrel.gateway import ScriptedGateway, load_fixture_pack
from minstrel.langgpt import parse
from minstrel.orchestrator import SessionConfig, export_session, run_test_pass, start_session
from minstrel.agents import TaskBrief

from conftest import CORPUS_VALID, FIXTURES, TITLE_FIXTURE


@pytest.fixture
def runner():
    return CliRunner()


class TestLintCommand:
    def test_clean_fixture_exits_zero(self, runner):
        result = runner.invoke(main, ["lint", str(TITLE_FIXTURE)])
        assert result.exit_code == 0, result.output

    def test_error_document_exits_one(self, runner, tmp_path):
        path = tmp_path / "bad.lgpt.md"
        path.write_text("# Role: X\n\n## Skills\n- s\n")
        result = runner.invoke(main, ["lint", str(path)])
        assert result.exit_code == 1
        assert "E001" in result.output

    def test_json_mode(self, runner):
        result = runner.invoke(main, ["lint", str(TITLE_FIXTURE), "--json"])
        assert result.exit_code == 0
        findings = json.loads(result.output)["findings"]
        assert all(f["severity"] != "error" for f in findings)


class TestFmtCommand:
    def test_fmt_is_idempotent(self, runner, tmp_path):
        messy = "# Role: X\n\n\n## Goal\n- g\n\n## attention\n- c\n"
        path = tmp_path / "messy.lgpt.md"
        path.write_text(messy)
        first = runner.invoke(main, ["fmt", str(path), "--write"])
        assert first.exit_code == 0
        once = path.read_text()
        second = runner.invoke(main, ["fmt", str(path), "--write"])
        assert second.exit_code == 0
        assert "already canonical" in second.output
        assert path.read_text() == once

    def test_check_mode(self, runner, tmp_path):
        path = tmp_path / "messy.lgpt.md"
        path.write_text("# Role: X\n\n## Goal\n- g\n")
        result = runner.invoke(main, ["fmt", str(path), "--check"])
        assert result.exit_code == 1
        result = runner.invoke(main, ["fmt", str(TITLE_FIXTURE), "--check"])
        assert result.exit_code == 0


class TestRenderCommand:
    def test_canonical_output(self, runner, title_text):
        result = runner.invoke(main, ["render", str(TITLE_FIXTURE)])
        assert result.exit_code == 0
        assert result.output == title_text


class TestGenerateCommand:
    def test_mock_pack_writes_six_block_prompt(self, runner, tmp_path):
        out = tmp_path / "generated.lgpt.md"
        result = runner.invoke(
            main,
            [
                "generate",
                "--task",
                "generate a title for the article",
                "--mock",
                str(FIXTURES / "sessions" / "title.json"),
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        doc = parse(out.read_text())
        assert len(doc.blocks) == 6
        assert doc.role_name == "Magazine Editor"

    def test_two_runs_byte_identical(self, runner, tmp_path):
        outputs = []
        for name in ("a", "b"):
            out = tmp_path / f"{name}.lgpt.md"
            session_out = tmp_path / f"{name}.session.json"
            result = runner.invoke(
                main,
                [
                    "generate",
                    "--mock",
                    str(FIXTURES / "sessions" / "title.json"),
                    "--out",
                    str(out),
                    "--session-out",
                    str(session_out),
                ],
            )
            assert result.exit_code == 0, result.output
            outputs.append((out.read_text(), session_out.read_text()))
        assert outputs[0] == outputs[1]

    def test_save_into_store(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "generate",
                "--mock",
                str(FIXTURES / "sessions" / "title.json"),
                "--save",
                "--store",
                str(tmp_path / "store"),
                "--json",
            ],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["saved"] == {"id": "magazine-editor", "version": "0.1.0"}
        assert (tmp_path / "store" / "magazine-editor" / "0.1.0.lgpt.md").exists()

    def test_interactive_mode_consumes_stdin(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "generate",
                "--mock",
                str(FIXTURES / "sessions" / "interactive-style.json"),
                "--out",
                str(tmp_path / "out.lgpt.md"),
            ],
            input="title style too informal\n\n",
        )
        assert result.exit_code == 0, result.output
        assert "Avoid playful subtitles" in (tmp_path / "out.lgpt.md").read_text()

    def test_mock_mode_opens_no_network_client(self, runner, tmp_path, monkeypatch):
        import httpx

        def forbidden(*args, **kwargs):
            raise AssertionError("network client constructed under --mock")

        monkeypatch.setattr(httpx.Client, "__init__", forbidden)
        result = runner.invoke(
            main,
            [
                "generate",
                "--mock",
                str(FIXTURES / "sessions" / "title.json"),
                "--out",
                str(tmp_path / "out.lgpt.md"),
            ],
        )
        assert result.exit_code == 0, result.output

    def test_missing_endpoint_config_fails(self, runner, monkeypatch):
        monkeypatch.delenv("MINSTREL_ENDPOINTS", raising=False)
        result = runner.invoke(main, ["generate", "--task", "x"])
        assert result.exit_code == 1
        assert "endpoint config" in result.output


class TestRefineCommand:
    def test_refine_applies_user_comment(self, runner, tmp_path):
        pack = load_fixture_pack(FIXTURES / "sessions" / "interactive-style.json")
        gateway = ScriptedGateway.from_pack(pack)
        brief = TaskBrief.from_dict(pack["brief"])
        config = SessionConfig.from_dict(pack["config"])
        session = start_session(brief, config, gateway)
        run_test_pass(session, gateway)

        session_file = tmp_path / "session.json"
        session_file.write_text(export_session(session))

        consumed = gateway.call_count()
        remainder = {"name": "remainder", "responses": pack["responses"][consumed:]}
        remainder_file = tmp_path / "remainder.json"
        remainder_file.write_text(json.dumps(remainder))

        result = runner.invoke(
            main,
            [
                "refine",
                str(session_file),
                "--comment",
                "title style too informal",
                "--module",
                "Style",
                "--mock",
                str(remainder_file),
                "--json",
            ],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["directives"] == {
            "Style": "Shift the register to formal; drop playful subtitles."
        }
        updated = json.loads(session_file.read_text())
        assert len(updated["drafts"]) == 2


class TestCompareCommand:
    def test_three_variants(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(
            main,
            [
                "compare",
                "--task",
                "Play a flatterer who compliments everything the user shares.",
                "--domain",
                "roleplay",
                "--variant",
                "instruction-only=instruction",
                "--variant",
                "crispe=crispe",
                "--variant",
                f"structural=document:{CORPUS_VALID / 'flatterer.lgpt.md'}",
                "--probe",
                "I just got promoted to team lead.",
                "--mock",
                str(FIXTURES / "sessions" / "flatterer-compare.json"),
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text())
        assert len(report["variants"]) == 3
        assert report["ranking"] == ["structural", "crispe", "instruction-only"]


class TestServeCommand:
    def test_help(self, runner):
        result = runner.invoke(main, ["serve", "--help"])
        assert result.exit_code == 0
        assert "--mock" in result.output
