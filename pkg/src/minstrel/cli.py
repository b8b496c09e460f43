"""Operator command line: lint, fmt, render, generate, refine, compare, serve.

Exit codes: 0 success; 1 the operation ran and failed (lint errors, failed
session, non-canonical file under ``fmt --check``); 2 usage errors. The
``--mock`` flag replays a fixture pack instead of calling any endpoint.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .agents import TaskBrief, user_comment
from .agents.errors import AgentError
from .compare import Variant, compare_prompts
from .gateway import (
    ChatGateway,
    EndpointConfig,
    GatewayError,
    HttpGateway,
    ScriptedGateway,
    load_fixture_pack,
)
from .langgpt import LangGptError, lint, parse, render, resolve_module_name
from .orchestrator import (
    SessionConfig,
    SessionFailedError,
    SessionState,
    SessionStateError,
    export_session,
    finalize,
    import_session,
    run_reflection_pass,
    run_test_pass,
    start_session,
    submit_user_comments,
)
from .store import PromptStore, StoreError

DEFAULT_STORE = "store"


def _fail(message: str, code: int = 1):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_doc(path: str):
    try:
        return parse(Path(path).read_text(encoding="utf-8"))
    except LangGptError as exc:
        _fail(f"{path}: {exc}")


def _make_gateway(mock: str | None, endpoints: str | None) -> tuple[ChatGateway, dict]:
    """Build the gateway; with --mock no network endpoint is ever configured."""
    if mock:
        pack = load_fixture_pack(mock)
        return ScriptedGateway.from_pack(pack), pack
    path = endpoints or os.environ.get("MINSTREL_ENDPOINTS")
    if not path:
        _fail("no endpoint config: pass --mock, --endpoints, or set MINSTREL_ENDPOINTS")
    config = EndpointConfig.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
    return HttpGateway(config), {}


def _store_from(store_dir: str | None) -> PromptStore:
    return PromptStore(store_dir or os.environ.get("MINSTREL_STORE", DEFAULT_STORE))


@click.group()
@click.version_option(package_name="minstrel")
def main():
    """Structural prompt toolkit: document tools and the generation pipeline."""


# ---------------------------------------------------------------------------
# Document tools
# ---------------------------------------------------------------------------


@main.command("lint")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="machine-readable findings")
def lint_command(file: str, as_json: bool):
    """Lint a prompt file; exit 0 iff it has no error-severity findings."""
    doc = _read_doc(file)
    report = lint(doc)
    if as_json:
        click.echo(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))
    else:
        for finding in report.findings:
            click.echo(
                f"{file}:{finding.line}: {finding.severity} {finding.rule_id} {finding.message}"
            )
        if not report.findings:
            click.echo(f"{file}: clean")
    sys.exit(1 if report.has_errors() else 0)


@main.command("fmt")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--write", "-w", is_flag=True, help="rewrite the file in place")
@click.option("--check", is_flag=True, help="exit 1 when the file is not canonical")
def fmt_command(file: str, write: bool, check: bool):
    """Canonicalize a prompt file (stdout by default)."""
    original = Path(file).read_text(encoding="utf-8")
    doc = _read_doc(file)
    canonical = render(doc)
    if check:
        if canonical != original:
            click.echo(f"{file}: not canonical")
            sys.exit(1)
        click.echo(f"{file}: canonical")
        return
    if write:
        if canonical != original:
            Path(file).write_text(canonical, encoding="utf-8")
            click.echo(f"rewrote {file}")
        else:
            click.echo(f"{file} already canonical")
    else:
        click.echo(canonical, nl=False)


@main.command("render")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def render_command(file: str):
    """Emit the flat prompt text, ready to paste as a system prompt."""
    doc = _read_doc(file)
    click.echo(render(doc), nl=False)


# ---------------------------------------------------------------------------
# Pipeline commands
# ---------------------------------------------------------------------------


def _interactive_loop(session, gateway):
    while session.state == SessionState.DRAFTED:
        run_test_pass(session, gateway)
        click.echo("\n--- test transcript ---")
        for message in session.transcripts[-1]:
            click.echo(f"{message.role}: {message.content}")
        click.echo("--- commentator scores ---")
        fresh = session.comments[session.comments_consumed :]
        for comment in fresh:
            if not comment.is_user:
                click.echo(f"[{comment.stance}] score {comment.score}")
        text = click.prompt(
            "Your comments (empty to continue)", default="", show_default=False
        )
        comments = [user_comment(text)] if text.strip() else []
        submit_user_comments(session, comments)
        run_reflection_pass(session, gateway)


@main.command("generate")
@click.option("--task", help="the task the prompt must accomplish")
@click.option("--domain", default=None, help="optional domain hint")
@click.option("--language", default="English")
@click.option("--interactive", is_flag=True, help="pause for comments after each test pass")
@click.option("--mock", type=click.Path(exists=True), help="fixture pack that scripts all agent calls")
@click.option("--endpoints", type=click.Path(exists=True), help="endpoint config JSON")
@click.option("--max-reflections", type=int, default=None)
@click.option("--test-turns", type=int, default=None)
@click.option("--out", type=click.Path(), help="write the final prompt here")
@click.option("--session-out", type=click.Path(), help="write the session export here")
@click.option("--save", is_flag=True, help="save the final prompt into the store")
@click.option("--store", "store_dir", type=click.Path(), help="store directory")
@click.option("--json", "as_json", is_flag=True)
def generate_command(
    task, domain, language, interactive, mock, endpoints,
    max_reflections, test_turns, out, session_out, save, store_dir, as_json,
):
    """Generate a structural prompt for a task via the full agent pipeline."""
    gateway, pack = _make_gateway(mock, endpoints)
    if not task:
        if pack.get("brief"):
            brief = TaskBrief.from_dict(pack["brief"])
        else:
            _fail("--task is required (the fixture pack carries no brief)", 2)
    else:
        brief = TaskBrief(task_text=task, domain_hint=domain, language=language)

    config_data = dict(pack.get("config", {}))
    if max_reflections is not None:
        config_data["max_reflections"] = max_reflections
    if test_turns is not None:
        config_data["test_turns"] = test_turns
    config_data["interactive"] = interactive or config_data.get("interactive", False)
    config = SessionConfig.from_dict(config_data)

    try:
        session = start_session(brief, config, gateway)
        if config.interactive:
            _interactive_loop(session, gateway)
        else:
            while session.state == SessionState.DRAFTED:
                run_test_pass(session, gateway)
                submit_user_comments(session, [])
                run_reflection_pass(session, gateway)
        document = finalize(session)
    except (SessionFailedError, SessionStateError, GatewayError, AgentError) as exc:
        _fail(str(exc))

    text = render(document)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    if session_out:
        Path(session_out).write_text(export_session(session), encoding="utf-8")
    saved = None
    if save:
        try:
            record = _store_from(store_dir).save(document)
            saved = {"id": record.id, "version": record.version}
        except StoreError as exc:
            _fail(str(exc))

    if as_json:
        click.echo(
            json.dumps(
                {
                    "session_id": session.session_id,
                    "state": session.state.value,
                    "drafts": len(session.drafts),
                    "prompt": text,
                    "out": out,
                    "saved": saved,
                },
                ensure_ascii=False,
                indent=2,
            )
        )
    elif not out:
        click.echo(text, nl=False)
    else:
        click.echo(f"wrote {out} ({session.state.value}, {len(session.drafts)} drafts)")


@main.command("refine")
@click.argument("session_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--comment", "comments", multiple=True, help="user comment text (repeatable)")
@click.option("--module", "module_hint", default=None, help="module the comment targets")
@click.option("--mock", type=click.Path(exists=True))
@click.option("--endpoints", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def refine_command(session_file, comments, module_hint, mock, endpoints, as_json):
    """Feed user comments into a saved session and run one reflection."""
    gateway, _ = _make_gateway(mock, endpoints)
    session = import_session(Path(session_file).read_text(encoding="utf-8"))
    hint = resolve_module_name(module_hint) if module_hint else None
    try:
        if session.state == SessionState.DRAFTED:
            run_test_pass(session, gateway)
        submit_user_comments(
            session, [user_comment(text, module_hint=hint) for text in comments]
        )
        run_reflection_pass(session, gateway)
        if session.state == SessionState.DRAFTED:
            run_test_pass(session, gateway)
    except (SessionFailedError, SessionStateError, GatewayError, AgentError) as exc:
        _fail(str(exc))
    Path(session_file).write_text(export_session(session), encoding="utf-8")
    if as_json:
        click.echo(
            json.dumps(
                {
                    "session_id": session.session_id,
                    "state": session.state.value,
                    "drafts": len(session.drafts),
                    "directives": session.directives_history[-1].to_dict()
                    if session.directives_history
                    else {},
                },
                ensure_ascii=False,
                indent=2,
            )
        )
    else:
        click.echo(f"{session.session_id}: {session.state.value}, {len(session.drafts)} drafts")


def _parse_variant(spec: str) -> Variant:
    label, _, rest = spec.partition("=")
    if not rest:
        raise click.BadParameter(f"variant {spec!r} must be label=kind[:file]")
    kind, _, path = rest.partition(":")
    if kind == "document" or kind == "langgpt":
        if not path:
            raise click.BadParameter(f"variant {spec!r} needs a document file")
        return Variant(label=label, kind="document", document=parse(Path(path).read_text(encoding="utf-8")))
    return Variant(label=label, kind=kind)


@main.command("compare")
@click.option("--task", required=True)
@click.option("--domain", default=None)
@click.option("--language", default="English")
@click.option("--variant", "--variants", "variant_specs", multiple=True, required=True,
              help="label=kind[:file], kind one of document|instruction|costar|crispe")
@click.option("--probe", "probes", multiple=True, required=True)
@click.option("--mock", type=click.Path(exists=True))
@click.option("--endpoints", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), help="write the report JSON here")
@click.option("--json", "as_json", is_flag=True)
def compare_command(task, domain, language, variant_specs, probes, mock, endpoints, out, as_json):
    """Probe several prompt variants side by side and rank them."""
    gateway, _ = _make_gateway(mock, endpoints)
    brief = TaskBrief(task_text=task, domain_hint=domain, language=language)
    variants = [_parse_variant(spec) for spec in variant_specs]
    try:
        report = compare_prompts(brief, variants, list(probes), gateway)
    except (GatewayError, AgentError, ValueError) as exc:
        _fail(str(exc))
    body = json.dumps(report, ensure_ascii=False, indent=2)
    if out:
        Path(out).write_text(body + "\n", encoding="utf-8")
        click.echo(f"wrote {out}")
    if as_json or not out:
        click.echo(body)
    if not as_json:
        click.echo("ranking: " + " > ".join(report["ranking"]), err=True)


# ---------------------------------------------------------------------------
# Service
# ---------------------------------------------------------------------------


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8008, type=int)
@click.option("--mock", type=click.Path(exists=True), help="serve with a scripted gateway")
@click.option("--endpoints", type=click.Path(exists=True))
@click.option("--store", "store_dir", type=click.Path())
@click.option("--ui", "ui_dir", type=click.Path(), default=None, help="static UI bundle directory")
def serve_command(host, port, mock, endpoints, store_dir, ui_dir):
    """Run the HTTP session/library API (and the studio UI when built)."""
    import uvicorn

    from .service import create_app

    if mock:
        pack_path = Path(mock)

        def gateway_factory() -> ChatGateway:
            return ScriptedGateway.from_pack_file(pack_path)

    else:
        path = endpoints or os.environ.get("MINSTREL_ENDPOINTS")
        if not path:
            _fail("no endpoint config: pass --mock, --endpoints, or set MINSTREL_ENDPOINTS")
        config = EndpointConfig.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

        def gateway_factory() -> ChatGateway:
            return HttpGateway(config)

    if ui_dir is None:
        default_ui = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
        ui_dir = str(default_ui) if default_ui.is_dir() else None

    app = create_app(_store_from(store_dir), gateway_factory, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
