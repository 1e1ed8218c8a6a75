"""Hierarchical classification of practice subjects.

Internal subjects are categories of communities; active leaves are the
communities (CoPs) themselves. The forest is at most four levels deep,
evolves by member additions, and shrinks only by soft deprecation so that
historical references never dangle. Subject usage is recorded in an
append-only log that drives the pruning policy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from .errors import (
    DeprecatedSubject,
    DepthExceeded,
    DuplicateSibling,
    InvalidLabel,
    ParentDeprecated,
    ParentNotFound,
    PurgeRefused,
    RootCreationDisallowed,
    SubjectNotFound,
)

MAX_DEPTH = 4
SEED_CREATOR = "SEED"

STATUS_ACTIVE = "active"
STATUS_DEPRECATED = "deprecated"

USAGE_KINDS = ("profile_fill", "index", "search_select", "spread", "consult")

_WS_RUN = re.compile(r"\s+")


def normalize_label(label: str) -> str:
    """Key used for sibling-uniqueness checks: trimmed, single-spaced, casefolded."""
    return _WS_RUN.sub(" ", label.strip()).casefold()


def subject_num(subject_id: str) -> int:
    """Numeric part of a subject id, for stable ordering."""
    return int(subject_id.lstrip("s"))


@dataclass
class Subject:
    id: str
    label: str
    parent: str | None
    level: int
    status: str = STATUS_ACTIVE
    created_by: str = SEED_CREATOR
    created_at: float = 0.0

    @property
    def active(self) -> bool:
        return self.status == STATUS_ACTIVE

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "parent": self.parent,
            "level": self.level,
            "status": self.status,
            "created_by": self.created_by,
            "created_at": self.created_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Subject":
        return cls(
            id=doc["id"],
            label=doc["label"],
            parent=doc.get("parent"),
            level=doc["level"],
            status=doc.get("status", STATUS_ACTIVE),
            created_by=doc.get("created_by", SEED_CREATOR),
            created_at=doc.get("created_at", 0.0),
        )


@dataclass
class UsageEvent:
    subject: str
    member: str
    kind: str
    at: float

    def __post_init__(self):
        if self.kind not in USAGE_KINDS:
            raise ValueError(f"unknown usage kind {self.kind!r}")

    def to_doc(self) -> dict:
        return {"subject": self.subject, "member": self.member, "kind": self.kind, "at": self.at}

    @classmethod
    def from_doc(cls, doc: dict) -> "UsageEvent":
        return cls(subject=doc["subject"], member=doc["member"], kind=doc["kind"], at=doc["at"])


@dataclass
class PrunePolicy:
    """Policy for deprecating member-added subjects nobody uses.

    ``usage_window_days=None`` means the whole lifetime counts: any recorded
    use ever protects the subject.
    """

    min_age_days: float = 90.0
    usage_window_days: float | None = None


class Taxonomy:
    """The subject forest, its usage log and its structural version counter."""

    def __init__(self):
        self._subjects: dict[str, Subject] = {}
        self._children: dict[str | None, list[str]] = {}
        # active-label index per parent, for sibling uniqueness
        self._labels: dict[str | None, dict[str, str]] = {}
        self._next_num = 1
        self.version = 0
        self.usage_log: list[UsageEvent] = []

    # -- lookups ---------------------------------------------------------

    def __contains__(self, subject_id: str) -> bool:
        return subject_id in self._subjects

    def __len__(self) -> int:
        return len(self._subjects)

    def get(self, subject_id: str) -> Subject:
        try:
            return self._subjects[subject_id]
        except KeyError:
            raise SubjectNotFound(f"no subject {subject_id!r}") from None

    def require_active(self, subject_id: str) -> Subject:
        subject = self.get(subject_id)
        if not subject.active:
            raise DeprecatedSubject(f"subject {subject_id!r} ({subject.label!r}) is deprecated")
        return subject

    def all_subjects(self) -> Iterator[Subject]:
        return iter(self._subjects.values())

    def active_subjects(self) -> list[Subject]:
        return [s for s in self._subjects.values() if s.active]

    def roots(self) -> list[Subject]:
        return self._ordered_active(self._children.get(None, ()))

    def children(self, subject_id: str) -> list[Subject]:
        """Active children ordered by label then id; empty for leaves."""
        self.get(subject_id)
        return self._ordered_active(self._children.get(subject_id, ()))

    def _ordered_active(self, ids: Iterable[str]) -> list[Subject]:
        active = [self._subjects[i] for i in ids if self._subjects[i].active]
        return sorted(active, key=lambda s: (s.label.casefold(), subject_num(s.id)))

    def path(self, subject_id: str) -> list[Subject]:
        """Root-to-subject chain; its length equals the subject's level."""
        subject = self.get(subject_id)
        chain = [subject]
        while chain[-1].parent is not None:
            chain.append(self._subjects[chain[-1].parent])
        chain.reverse()
        return chain

    def label_path(self, subject_id: str) -> list[str]:
        return [s.label for s in self.path(subject_id)]

    def root_of(self, subject_id: str) -> str:
        subject = self.get(subject_id)
        while subject.parent is not None:
            subject = self._subjects[subject.parent]
        return subject.id

    def ancestors(self, subject_id: str) -> set[str]:
        subject = self.get(subject_id)
        result: set[str] = set()
        while subject.parent is not None:
            result.add(subject.parent)
            subject = self._subjects[subject.parent]
        return result

    def descendants(self, subject_id: str) -> set[str]:
        """Active transitive descendants. A deprecated branch cannot hide
        active subjects (deprecation requires no active children), so the
        walk prunes at the first inactive node."""
        self.get(subject_id)
        result: set[str] = set()
        stack = [c for c in self._children.get(subject_id, ()) if self._subjects[c].active]
        while stack:
            current = stack.pop()
            result.add(current)
            stack.extend(c for c in self._children.get(current, ()) if self._subjects[c].active)
        return result

    def is_cop(self, subject_id: str) -> bool:
        """Active leaves are communities; categories and deprecated nodes are not."""
        subject = self.get(subject_id)
        return subject.active and not self.children(subject_id)

    def find_by_label_path(self, labels: Iterable[str]) -> Subject | None:
        parent: str | None = None
        found: Subject | None = None
        for raw in labels:
            key = normalize_label(raw)
            sid = self._labels.get(parent, {}).get(key)
            if sid is None:
                return None
            found = self._subjects[sid]
            parent = sid
        return found

    # -- usage -----------------------------------------------------------

    def usage_counts(self, subject_id: str) -> dict[str, int]:
        counts = {kind: 0 for kind in USAGE_KINDS}
        for event in self.usage_log:
            if event.subject == subject_id:
                counts[event.kind] += 1
        return counts

    def usage_count(self, subject_id: str, since: float | None = None) -> int:
        return sum(
            1
            for event in self.usage_log
            if event.subject == subject_id and (since is None or event.at >= since)
        )

    def validate_usage(self, event: UsageEvent) -> None:
        self.require_active(event.subject)

    def append_usage(self, event: UsageEvent) -> None:
        """Unchecked append; validation happens on the mutation path only."""
        self.usage_log.append(event)

    # -- mutation --------------------------------------------------------

    def allocate_id(self) -> str:
        sid = f"s{self._next_num}"
        self._next_num += 1
        return sid

    def validate_new_subject(
        self,
        label: str,
        parent: str | None,
        creator: str,
        *,
        allow_member_roots: bool = False,
    ) -> int:
        """Check every add_subject precondition; returns the level the new
        subject will occupy. Raises without mutating."""
        if not label.strip():
            raise InvalidLabel("subject label must be non-empty")
        if parent is None:
            if creator != SEED_CREATOR and not allow_member_roots:
                raise RootCreationDisallowed(
                    "members may not create level-1 categories (allow_member_roots is off)"
                )
            level = 1
        else:
            if parent not in self._subjects:
                raise ParentNotFound(f"no subject {parent!r}")
            parent_subject = self._subjects[parent]
            if not parent_subject.active:
                raise ParentDeprecated(f"parent {parent!r} ({parent_subject.label!r}) is deprecated")
            level = parent_subject.level + 1
            if level > MAX_DEPTH:
                raise DepthExceeded(
                    f"subject {label!r} would sit at level {level}; the classification "
                    f"allows at most {MAX_DEPTH}"
                )
        key = normalize_label(label)
        clash = self._labels.get(parent, {}).get(key)
        if clash is not None:
            raise DuplicateSibling(
                f"label {label!r} already used by active sibling {clash!r}"
            )
        return level

    def insert(self, subject: Subject) -> None:
        """Apply-path insertion: indexes the subject and bumps the version.
        Callers are responsible for prior validation (or replay fidelity)."""
        self._subjects[subject.id] = subject
        self._children.setdefault(subject.parent, []).append(subject.id)
        if subject.active:
            self._labels.setdefault(subject.parent, {})[normalize_label(subject.label)] = subject.id
        self._next_num = max(self._next_num, subject_num(subject.id) + 1)
        self.version += 1

    def install_seed(self, subjects: list[Subject]) -> None:
        """Replace-nothing bulk install of a validated seed; version becomes 1."""
        if self._subjects:
            raise InvariantViolationGuard("install_seed requires an empty taxonomy")
        for subject in subjects:
            self._subjects[subject.id] = subject
            self._children.setdefault(subject.parent, []).append(subject.id)
            self._labels.setdefault(subject.parent, {})[normalize_label(subject.label)] = subject.id
            self._next_num = max(self._next_num, subject_num(subject.id) + 1)
        self.version = 1

    def deprecate(self, subject_ids: list[str]) -> None:
        """Apply-path deprecation of a batch; one version bump per batch."""
        for sid in subject_ids:
            subject = self._subjects[sid]
            if subject.active:
                self._labels.get(subject.parent, {}).pop(normalize_label(subject.label), None)
            self._subjects[sid] = replace(subject, status=STATUS_DEPRECATED)
        if subject_ids:
            self.version += 1

    def prune_candidates(
        self,
        now: float,
        policy: PrunePolicy,
        referenced: set[str],
    ) -> list[str]:
        """Subjects meeting every deprecation condition, ordered by id.

        ``referenced`` carries the ids pinned by associations or profiles;
        usage is judged from the taxonomy's own log. Computed to a fixed
        point: once a childless unused subject falls, an otherwise-unused
        parent it was holding up falls in the same call — that is what makes
        a second call with identical inputs return nothing.
        """
        min_age = policy.min_age_days * 86400.0
        since = None if policy.usage_window_days is None else now - policy.usage_window_days * 86400.0
        doomed: set[str] = set()
        while True:
            grew = False
            for subject in self._subjects.values():
                if subject.id in doomed or not subject.active:
                    continue
                if subject.created_by == SEED_CREATOR:
                    continue
                if now - subject.created_at <= min_age:
                    continue
                if subject.id in referenced:
                    continue
                if any(c.id not in doomed for c in self.children(subject.id)):
                    continue
                if self.usage_count(subject.id, since) > 0:
                    continue
                doomed.add(subject.id)
                grew = True
            if not grew:
                break
        return sorted(doomed, key=subject_num)

    def validate_purge(self, subject_id: str, referenced: set[str]) -> None:
        subject = self.get(subject_id)
        if subject.active:
            raise PurgeRefused(f"subject {subject_id!r} is active; deprecate it first")
        if self._children.get(subject_id):
            raise PurgeRefused(f"subject {subject_id!r} still has child subjects")
        if subject_id in referenced:
            raise PurgeRefused(f"subject {subject_id!r} is still referenced")

    def purge(self, subject_id: str) -> None:
        """Apply-path hard removal; usage telemetry for the subject is dropped.
        The id counter never rewinds, so ids are not reused."""
        subject = self._subjects.pop(subject_id)
        siblings = self._children.get(subject.parent, [])
        if subject_id in siblings:
            siblings.remove(subject_id)
        self._labels.get(subject.parent, {}).pop(normalize_label(subject.label), None)
        self.usage_log = [e for e in self.usage_log if e.subject != subject_id]
        self.version += 1

    # -- serialization ---------------------------------------------------

    def to_doc(self) -> dict:
        subjects = sorted(self._subjects.values(), key=lambda s: subject_num(s.id))
        return {
            "version": self.version,
            "next_subject_num": self._next_num,
            "subjects": [s.to_doc() for s in subjects],
            "usage_log": [e.to_doc() for e in self.usage_log],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Taxonomy":
        taxonomy = cls()
        for sdoc in doc.get("subjects", ()):
            subject = Subject.from_doc(sdoc)
            taxonomy._subjects[subject.id] = subject
            taxonomy._children.setdefault(subject.parent, []).append(subject.id)
            if subject.active:
                taxonomy._labels.setdefault(subject.parent, {})[
                    normalize_label(subject.label)
                ] = subject.id
            taxonomy._next_num = max(taxonomy._next_num, subject_num(subject.id) + 1)
        taxonomy._next_num = max(taxonomy._next_num, doc.get("next_subject_num", 1))
        taxonomy.version = doc.get("version", 0)
        taxonomy.usage_log = [UsageEvent.from_doc(e) for e in doc.get("usage_log", ())]
        return taxonomy


class InvariantViolationGuard(RuntimeError):
    """Programming error, not a domain error: a guarded internal misuse."""
