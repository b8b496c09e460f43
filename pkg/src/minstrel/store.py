"""Versioned file store for prompt documents.

Layout: ``store/<id>/<version>.lgpt.md`` plus ``store/index.json``. Files
hold the canonical rendering, so the store diffs cleanly under git. Writes
go through a temp file and an atomic rename; a crash mid-save leaves no
partial entry.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .langgpt import PromptDocument, lint, parse, profile_version, render

DEFAULT_VERSION = "0.1.0"

_SLUG_RE = re.compile(r"[^a-z0-9]+")


class StoreError(Exception):
    code = "StoreError"


class LintErrorsError(StoreError):
    """The document fails lint with error severity and cannot be saved."""

    code = "LintErrors"


class VersionConflictError(StoreError):
    code = "VersionConflict"


class NotFoundError(StoreError):
    code = "NotFound"


def slugify(role_name: str) -> str:
    slug = _SLUG_RE.sub("-", role_name.lower()).strip("-")
    return slug or "prompt"


def _version_key(version: str) -> tuple:
    parts = []
    for chunk in version.split("."):
        parts.append((0, int(chunk)) if chunk.isdigit() else (1, chunk))
    return tuple(parts)


@dataclass(frozen=True)
class StoredPrompt:
    id: str
    document: PromptDocument
    version: str
    created_at: str
    parent_version: str | None = None

    @property
    def role_name(self) -> str:
        return self.document.role_name


class PromptStore:
    """Multi-reader, single-writer per id; writes serialized process-wide."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._lock = threading.Lock()
        self.root.mkdir(parents=True, exist_ok=True)

    # -- index ---------------------------------------------------------------

    @property
    def _index_path(self) -> Path:
        return self.root / "index.json"

    def _read_index(self) -> dict:
        if not self._index_path.exists():
            return {"prompts": {}}
        return json.loads(self._index_path.read_text(encoding="utf-8"))

    def _write_index(self, index: dict) -> None:
        self._atomic_write(
            self._index_path,
            json.dumps(index, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        )

    def _atomic_write(self, path: Path, content: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(content)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # -- operations ----------------------------------------------------------

    def save(self, document: PromptDocument) -> StoredPrompt:
        """Persist a new version; id from the role name, version from Profile."""
        report = lint(document)
        if report.has_errors():
            raise LintErrorsError(
                "document has lint errors: "
                + "; ".join(f"{f.rule_id} {f.message}" for f in report.errors())
            )
        prompt_id = slugify(document.role_name)
        version = profile_version(document) or DEFAULT_VERSION

        with self._lock:
            index = self._read_index()
            entry = index["prompts"].setdefault(
                prompt_id, {"role_name": document.role_name, "versions": []}
            )
            existing = {v["version"] for v in entry["versions"]}
            if version in existing:
                raise VersionConflictError(f"{prompt_id} already has version {version}")
            parent = self._latest_version(entry)
            record = StoredPrompt(
                id=prompt_id,
                document=document,
                version=version,
                created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
                parent_version=parent,
            )
            self._atomic_write(
                self.root / prompt_id / f"{version}.lgpt.md", render(document)
            )
            entry["role_name"] = document.role_name
            entry["versions"].append(
                {
                    "version": version,
                    "created_at": record.created_at,
                    "parent_version": parent,
                }
            )
            entry["versions"].sort(key=lambda v: _version_key(v["version"]))
            self._write_index(index)
            return record

    def _latest_version(self, entry: dict) -> str | None:
        versions = entry.get("versions", [])
        if not versions:
            return None
        return max(versions, key=lambda v: _version_key(v["version"]))["version"]

    def get(self, prompt_id: str, version: str | None = None) -> StoredPrompt:
        """Fetch one version (latest when omitted)."""
        index = self._read_index()
        entry = index["prompts"].get(prompt_id)
        if entry is None:
            raise NotFoundError(f"no prompt with id {prompt_id!r}")
        if version is None:
            version = self._latest_version(entry)
        meta = next((v for v in entry["versions"] if v["version"] == version), None)
        if meta is None:
            raise NotFoundError(f"{prompt_id} has no version {version!r}")
        path = self.root / prompt_id / f"{version}.lgpt.md"
        if not path.exists():
            raise NotFoundError(f"missing file for {prompt_id}@{version}")
        return StoredPrompt(
            id=prompt_id,
            document=parse(path.read_text(encoding="utf-8")),
            version=version,
            created_at=meta["created_at"],
            parent_version=meta.get("parent_version"),
        )

    def list(self, filter: str | None = None) -> list[dict]:
        """Lexicographic id listing, optionally filtered by role substring."""
        index = self._read_index()
        rows = []
        for prompt_id in sorted(index["prompts"]):
            entry = index["prompts"][prompt_id]
            role_name = entry.get("role_name", prompt_id)
            if filter and filter.lower() not in role_name.lower() and filter.lower() not in prompt_id:
                continue
            rows.append(
                {
                    "id": prompt_id,
                    "latest_version": self._latest_version(entry),
                    "role_name": role_name,
                    "versions": [v["version"] for v in entry["versions"]],
                }
            )
        return rows

    def lineage(self, prompt_id: str) -> list[str]:
        """Follow parent links from the latest version back to the root."""
        chain = []
        current: str | None = None
        record = self.get(prompt_id)
        current = record.version
        seen = set()
        while current is not None:
            if current in seen:
                raise StoreError(f"version lineage of {prompt_id} cycles at {current}")
            seen.add(current)
            chain.append(current)
            current = self.get(prompt_id, current).parent_version
        return chain
