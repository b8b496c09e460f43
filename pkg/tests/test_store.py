from __future__ import annotations

import json
import os

import pytest

from minstrel.langgpt import parse, render
from minstrel.store import (
    LintErrorsError,
    NotFoundError,
    PromptStore,
    VersionConflictError,
    slugify,
)


@pytest.fixture
def store(tmp_path):
    return PromptStore(tmp_path / "store")


def with_version(text: str, version: str) -> str:
    return text.replace(
        "## Profile\n", f"## Profile\n- The version is {version}.\n", 1
    )


class TestSave:
    def test_table_fixture_defaults(self, store, title_doc):
        record = store.save(title_doc)
        assert record.id == "magazine-editor"
        assert record.version == "0.1.0"
        assert record.parent_version is None

    def test_duplicate_save_conflicts(self, store, title_doc):
        store.save(title_doc)
        with pytest.raises(VersionConflictError):
            store.save(title_doc)

    def test_version_extracted_from_profile(self, store, title_text):
        doc = parse(with_version(title_text, "1.2.0"))
        record = store.save(doc)
        assert record.version == "1.2.0"

    def test_lint_errors_block_save(self, store):
        doc = parse("# Role: Broken\n\n## Skills\n- something\n")  # Goals missing
        with pytest.raises(LintErrorsError):
            store.save(doc)

    def test_files_hold_canonical_bytes(self, store, title_doc, tmp_path):
        store.save(title_doc)
        path = tmp_path / "store" / "magazine-editor" / "0.1.0.lgpt.md"
        assert path.read_text(encoding="utf-8") == render(title_doc)


class TestGet:
    def test_unknown_id(self, store):
        with pytest.raises(NotFoundError):
            store.get("nope")

    def test_roundtrip(self, store, title_doc):
        record = store.save(title_doc)
        assert store.get(record.id).document == title_doc

    def test_latest_wins(self, store, title_text):
        store.save(parse(with_version(title_text, "0.1.0")))
        store.save(parse(with_version(title_text, "0.2.0")))
        assert store.get("magazine-editor").version == "0.2.0"

    def test_exact_version(self, store, title_text):
        store.save(parse(with_version(title_text, "0.1.0")))
        store.save(parse(with_version(title_text, "0.2.0")))
        assert store.get("magazine-editor", "0.1.0").version == "0.1.0"

    def test_numeric_version_ordering(self, store, title_text):
        store.save(parse(with_version(title_text, "0.9.0")))
        store.save(parse(with_version(title_text, "0.10.0")))
        assert store.get("magazine-editor").version == "0.10.0"

    def test_parent_lineage(self, store, title_text):
        store.save(parse(with_version(title_text, "0.1.0")))
        store.save(parse(with_version(title_text, "0.2.0")))
        store.save(parse(with_version(title_text, "0.3.0")))
        assert store.lineage("magazine-editor") == ["0.3.0", "0.2.0", "0.1.0"]


class TestList:
    def test_empty_store(self, store):
        assert store.list() == []

    def test_filter_and_order(self, store, title_doc, flatterer_doc):
        store.save(title_doc)
        store.save(flatterer_doc)
        rows = store.list()
        assert [r["id"] for r in rows] == ["flatterer", "magazine-editor"]
        filtered = store.list(filter="editor")
        assert [r["id"] for r in filtered] == ["magazine-editor"]

    def test_listing_stable_without_writes(self, store, title_doc):
        store.save(title_doc)
        assert store.list() == store.list()


class TestAtomicity:
    def test_crash_during_save_leaves_no_partial_entry(self, store, title_doc, tmp_path, monkeypatch):
        real_replace = os.replace
        calls = {"n": 0}

        def crashing_replace(src, dst):
            calls["n"] += 1
            raise OSError("simulated crash before rename")

        monkeypatch.setattr(os, "replace", crashing_replace)
        with pytest.raises(OSError):
            store.save(title_doc)
        monkeypatch.setattr(os, "replace", real_replace)

        root = tmp_path / "store"
        leftovers = [p for p in root.rglob("*") if p.is_file()]
        assert leftovers == []
        assert store.list() == []
        # the store still works afterwards
        record = store.save(title_doc)
        assert store.get(record.id).version == "0.1.0"

    def test_index_consistent_with_files(self, store, title_doc, tmp_path):
        store.save(title_doc)
        index = json.loads((tmp_path / "store" / "index.json").read_text())
        versions = index["prompts"]["magazine-editor"]["versions"]
        assert [v["version"] for v in versions] == ["0.1.0"]


def test_slugify():
    assert slugify("Magazine Editor") == "magazine-editor"
    assert slugify("  SQL  Tutor!! ") == "sql-tutor"
    assert slugify("???") == "prompt"
