"""Embedded single-directory persistence: snapshot + write-ahead log + blobs.

Layout of a data directory:

    CURRENT              text file holding the live generation number
    snapshot-<g>.json    full state document for generation <g>
    wal-<g>.jsonl        one JSON record per mutation applied after <g>
    blobs/xx/<sha256>    content-addressed attachment bodies

A save writes the next generation's snapshot, then flips CURRENT
atomically, then starts an empty log — so a crash at any point leaves the
previous generation fully readable. Log appends are fsynced before the
mutation is acknowledged; only an unacknowledged torn tail line may be
dropped on recovery.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .errors import BlobNotFound, CorruptStore, FormatVersionUnsupported

FORMAT_VERSION = 1


def _fsync_dir(path: Path) -> None:
    fd = os.open(path, os.O_RDONLY)
    try:
        os.fsync(fd)
    finally:
        os.close(fd)


def atomic_write(path: Path, data: bytes, *, fsync: bool = True) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as handle:
        handle.write(data)
        if fsync:
            handle.flush()
            os.fsync(handle.fileno())
    os.replace(tmp, path)
    if fsync:
        _fsync_dir(path.parent)


def verify_integrity(state: dict) -> None:
    """Referential and structural sweep over a state document; raises
    CorruptStore naming the first violation found (deterministic order).
    Covers dangling references plus the invariants a reachable state always
    satisfies: depth/level consistency, active-parent rule, sibling label
    uniqueness, scope disjointness, and resource non-orphanhood."""
    subjects = {s["id"]: s for s in state.get("taxonomy", {}).get("subjects", ())}
    members = {m["id"] for m in state.get("profiles", {}).get("members", ())}
    resources = {r["id"]: r for r in state.get("resources", {}).get("resources", ())}

    sibling_labels: set[tuple[str | None, str]] = set()
    for sdoc in state.get("taxonomy", {}).get("subjects", ()):
        parent = sdoc.get("parent")
        if parent is not None and parent not in subjects:
            raise CorruptStore(f"subject {sdoc['id']}: parent {parent} missing")
        expected_level = 1 if parent is None else subjects[parent]["level"] + 1
        if sdoc["level"] != expected_level or sdoc["level"] > 4:
            raise CorruptStore(f"subject {sdoc['id']}: level {sdoc['level']} is inconsistent")
        if sdoc["status"] == "active":
            if parent is not None and subjects[parent]["status"] != "active":
                raise CorruptStore(f"subject {sdoc['id']}: active under deprecated parent {parent}")
            key = (parent, " ".join(sdoc["label"].split()).casefold())
            if key in sibling_labels:
                raise CorruptStore(f"subject {sdoc['id']}: duplicate sibling label {sdoc['label']!r}")
            sibling_labels.add(key)
    for event in state.get("taxonomy", {}).get("usage_log", ()):
        if event["subject"] not in subjects:
            raise CorruptStore(f"usage event: subject {event['subject']} missing")
        if event["member"] not in members:
            raise CorruptStore(f"usage event: member {event['member']} missing")
    for mdoc in state.get("profiles", {}).get("members", ()):
        for key in ("working_context", "secondary_interests"):
            for subject_id in mdoc.get(key, ()):
                if subject_id not in subjects:
                    raise CorruptStore(f"member {mdoc['id']}: {key} subject {subject_id} missing")
        overlap = set(mdoc.get("working_context", ())) & set(mdoc.get("secondary_interests", ()))
        if overlap:
            raise CorruptStore(
                f"member {mdoc['id']}: subject {sorted(overlap)[0]} is in both scope sets"
            )
    for rdoc in state.get("resources", {}).get("resources", ()):
        if rdoc["author"] not in members:
            raise CorruptStore(f"resource {rdoc['id']}: author {rdoc['author']} missing")
    for pdoc in state.get("resources", {}).get("replies", ()):
        target = resources.get(pdoc["discussion"])
        if target is None:
            raise CorruptStore(f"reply {pdoc['id']}: discussion {pdoc['discussion']} missing")
        if target["kind"] != "discussion":
            raise CorruptStore(f"reply {pdoc['id']}: resource {pdoc['discussion']} is not a discussion")
        if pdoc["author"] not in members:
            raise CorruptStore(f"reply {pdoc['id']}: author {pdoc['author']} missing")
    tagged: set[str] = set()
    pairs: set[tuple[str, str]] = set()
    for adoc in state.get("resources", {}).get("associations", ()):
        if adoc["resource"] not in resources:
            raise CorruptStore(
                f"association {adoc['resource']}->{adoc['subject']}: resource {adoc['resource']} missing"
            )
        if adoc["subject"] not in subjects:
            raise CorruptStore(
                f"association {adoc['resource']}->{adoc['subject']}: subject {adoc['subject']} missing"
            )
        if adoc["associated_by"] not in members:
            raise CorruptStore(
                f"association {adoc['resource']}->{adoc['subject']}: member {adoc['associated_by']} missing"
            )
        pair = (adoc["resource"], adoc["subject"])
        if pair in pairs:
            raise CorruptStore(f"association {pair[0]}->{pair[1]} listed twice")
        pairs.add(pair)
        tagged.add(adoc["resource"])
    for resource_id in resources:
        if resource_id not in tagged:
            raise CorruptStore(f"resource {resource_id}: no subject associations (orphan)")


class Store:
    def __init__(self, data_dir: str | Path, *, fsync: bool = True):
        self.root = Path(data_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "blobs").mkdir(exist_ok=True)
        self.fsync = fsync
        self._generation = 0
        self._wal_handle = None
        self.wal_count = 0

    # -- paths ---------------------------------------------------------------

    @property
    def current_path(self) -> Path:
        return self.root / "CURRENT"

    def snapshot_path(self, generation: int) -> Path:
        return self.root / f"snapshot-{generation}.json"

    def wal_path(self, generation: int) -> Path:
        return self.root / f"wal-{generation}.jsonl"

    # -- load ------------------------------------------------------------------

    def load(self) -> tuple[dict | None, list[dict]]:
        """Latest snapshot (or None on a fresh directory) plus the log
        records recorded after it. The snapshot is integrity-checked."""
        snapshot = None
        if self.current_path.exists():
            raw = self.current_path.read_text("utf-8").strip()
            try:
                self._generation = int(raw)
            except ValueError:
                raise CorruptStore(f"CURRENT contains {raw!r}, not a generation number") from None
            path = self.snapshot_path(self._generation)
            if not path.exists():
                raise CorruptStore(f"CURRENT points at generation {self._generation} but {path.name} is missing")
            try:
                snapshot = json.loads(path.read_text("utf-8"))
            except json.JSONDecodeError as exc:
                raise CorruptStore(f"{path.name} is not valid JSON: {exc}") from exc
            version = snapshot.get("format_version")
            if version != FORMAT_VERSION:
                raise FormatVersionUnsupported(
                    f"snapshot format {version!r} unsupported (engine speaks {FORMAT_VERSION})"
                )
            verify_integrity(snapshot)
        records = self._read_wal(self.wal_path(self._generation))
        self.wal_count = len(records)
        return snapshot, records

    def _read_wal(self, path: Path) -> list[dict]:
        if not path.exists():
            return []
        records = []
        lines = path.read_bytes().split(b"\n")
        for index, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                tail = all(not later.strip() for later in lines[index + 1:])
                if tail:
                    # torn final record from a crash mid-append: never acknowledged
                    break
                raise CorruptStore(f"{path.name} line {index + 1} is corrupt") from None
        return records

    # -- mutation log -----------------------------------------------------------

    def append(self, record: dict) -> None:
        """Durable append of one mutation record (fsync before returning)."""
        if self._wal_handle is None:
            self._wal_handle = open(self.wal_path(self._generation), "ab")
        line = json.dumps(record, separators=(",", ":"), sort_keys=True).encode() + b"\n"
        self._wal_handle.write(line)
        self._wal_handle.flush()
        if self.fsync:
            os.fsync(self._wal_handle.fileno())
        self.wal_count += 1

    # -- snapshot ----------------------------------------------------------------

    def save(self, state: dict) -> None:
        """Fold the current state into a new generation and reset the log."""
        if state.get("format_version") != FORMAT_VERSION:
            raise FormatVersionUnsupported(
                f"refusing to save format {state.get('format_version')!r}"
            )
        verify_integrity(state)
        new_generation = self._generation + 1
        payload = json.dumps(state, sort_keys=True).encode()
        atomic_write(self.snapshot_path(new_generation), payload, fsync=self.fsync)
        atomic_write(self.current_path, str(new_generation).encode(), fsync=self.fsync)
        if self._wal_handle is not None:
            self._wal_handle.close()
            self._wal_handle = None
        old_generation = self._generation
        self._generation = new_generation
        self.wal_count = 0
        self._cleanup(old_generation)

    def _cleanup(self, old_generation: int) -> None:
        for path in (self.snapshot_path(old_generation), self.wal_path(old_generation)):
            try:
                path.unlink()
            except FileNotFoundError:
                pass

    def close(self) -> None:
        if self._wal_handle is not None:
            self._wal_handle.close()
            self._wal_handle = None

    # -- blobs ----------------------------------------------------------------------

    def put_blob(self, data: bytes) -> str:
        digest = hashlib.sha256(data).hexdigest()
        bucket = self.root / "blobs" / digest[:2]
        bucket.mkdir(parents=True, exist_ok=True)
        path = bucket / digest
        if not path.exists():
            atomic_write(path, data, fsync=self.fsync)
        return f"sha256:{digest}"

    def get_blob(self, ref: str) -> bytes:
        if not ref.startswith("sha256:"):
            raise BlobNotFound(f"malformed blob reference {ref!r}")
        digest = ref.split(":", 1)[1]
        path = self.root / "blobs" / digest[:2] / digest
        if not path.exists():
            raise BlobNotFound(f"no blob {ref!r}")
        return path.read_bytes()


def write_state_file(state: dict, path: str | Path) -> None:
    verify_integrity(state)
    atomic_write(Path(path), json.dumps(state, indent=2, sort_keys=True).encode())


def read_state_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise CorruptStore(f"state file {path} does not exist")
    try:
        state = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise CorruptStore(f"state file {path} is not valid JSON: {exc}") from exc
    if state.get("format_version") != FORMAT_VERSION:
        raise FormatVersionUnsupported(
            f"state file format {state.get('format_version')!r} unsupported"
        )
    verify_integrity(state)
    return state
