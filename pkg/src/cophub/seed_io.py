"""Seed-document import/export for the subject classification.

One JSON document holds the whole forest as a list of records
``{label, parent_path, id?}``: ``parent_path`` is the label path of the
parent (empty or absent for level-1 categories) and ids are auto-assigned
when missing. Import→export→import is the identity on labels and
structure, which is what the round-trip tests pin down.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import InvariantViolation, MalformedSeed
from .taxonomy import MAX_DEPTH, SEED_CREATOR, Subject, Taxonomy, normalize_label

SEED_FORMAT = "cop-taxonomy-seed/1"

TUTORING_SEED = "tutoring.json"


def tutoring_seed_doc() -> dict:
    """The shipped a-priori classification for the tutoring field."""
    raw = resources.files("cophub.seeds").joinpath(TUTORING_SEED).read_text("utf-8")
    return json.loads(raw)


def read_seed_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise MalformedSeed(f"seed file {path} does not exist")
    try:
        return json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedSeed(f"seed file {path} is not valid JSON: {exc}") from exc


def parse_seed(doc: dict, *, at: float = 0.0) -> list[Subject]:
    """Validate a seed document and materialize its subjects.

    Records may appear in any order; parents are resolved by label path.
    Shape problems raise MalformedSeed; semantic ones (depth, duplicate
    sibling, dangling parent) raise InvariantViolation naming the subject.
    """
    if not isinstance(doc, dict):
        raise MalformedSeed("seed document must be a JSON object")
    fmt = doc.get("format")
    if fmt != SEED_FORMAT:
        raise MalformedSeed(f"unsupported seed format {fmt!r} (expected {SEED_FORMAT!r})")
    records = doc.get("subjects")
    if not isinstance(records, list):
        raise MalformedSeed("seed 'subjects' must be a list")

    entries = []
    seen_paths: dict[tuple[str, ...], str] = {}
    for index, record in enumerate(records):
        if not isinstance(record, dict):
            raise MalformedSeed(f"seed record #{index} is not an object")
        label = record.get("label")
        if not isinstance(label, str) or not label.strip():
            raise MalformedSeed(f"seed record #{index} has no usable label")
        parent_path = record.get("parent_path", [])
        if parent_path is None:
            parent_path = []
        if not isinstance(parent_path, list) or not all(isinstance(p, str) for p in parent_path):
            raise MalformedSeed(f"seed record {label!r}: parent_path must be a list of labels")
        explicit_id = record.get("id")
        if explicit_id is not None and not _valid_subject_id(explicit_id):
            raise MalformedSeed(f"seed record {label!r}: id {explicit_id!r} is not of the form s<number>")
        full_path = tuple(normalize_label(p) for p in parent_path) + (normalize_label(label),)
        if len(full_path) > MAX_DEPTH:
            raise InvariantViolation(
                f"subject {label!r} sits at level {len(full_path)}; at most {MAX_DEPTH} levels are allowed"
            )
        if full_path in seen_paths:
            raise InvariantViolation(
                f"subject {label!r} duplicates sibling {seen_paths[full_path]!r} under the same parent"
            )
        seen_paths[full_path] = label
        entries.append((full_path, label, tuple(parent_path), explicit_id))

    for full_path, label, parent_path, _ in entries:
        if parent_path and full_path[:-1] not in seen_paths:
            raise InvariantViolation(
                f"subject {label!r} names a parent path {list(parent_path)!r} that is not in the seed"
            )

    # Parents first, then stable by path, so ids read naturally in exports.
    entries.sort(key=lambda e: (len(e[0]), e[0]))

    used = {e[3] for e in entries if e[3] is not None}
    if len(used) != sum(1 for e in entries if e[3] is not None):
        raise MalformedSeed("seed contains duplicate explicit ids")
    next_num = max((int(i[1:]) for i in used), default=0) + 1

    subjects: list[Subject] = []
    by_path: dict[tuple[str, ...], str] = {}
    for full_path, label, parent_path, explicit_id in entries:
        if explicit_id is None:
            sid = f"s{next_num}"
            next_num += 1
        else:
            sid = explicit_id
        by_path[full_path] = sid
        subjects.append(
            Subject(
                id=sid,
                label=label.strip(),
                parent=by_path[full_path[:-1]] if parent_path else None,
                level=len(full_path),
                created_by=SEED_CREATOR,
                created_at=at,
            )
        )
    return subjects


def load_seed(doc: dict, *, at: float = 0.0) -> Taxonomy:
    """Build a fresh taxonomy (version 1) from a seed document."""
    taxonomy = Taxonomy()
    taxonomy.install_seed(parse_seed(doc, at=at))
    return taxonomy


def export_seed(taxonomy: Taxonomy) -> dict:
    """Serialize the active classification back into the seed format."""
    records = []
    stack = [(s, []) for s in reversed(taxonomy.roots())]
    while stack:
        subject, parents = stack.pop()
        record: dict = {"id": subject.id, "label": subject.label}
        if parents:
            record["parent_path"] = list(parents)
        records.append(record)
        child_path = parents + [subject.label]
        for child in reversed(taxonomy.children(subject.id)):
            stack.append((child, child_path))
    return {"format": SEED_FORMAT, "subjects": records}


def _valid_subject_id(value) -> bool:
    return (
        isinstance(value, str)
        and value.startswith("s")
        and value[1:].isdigit()
        and len(value) > 1
    )
