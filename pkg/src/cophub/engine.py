"""The engine: one façade over taxonomy, profiles, resources and search.

Every mutation is validated first, then applied as one or more state
deltas, then appended to the store's write-ahead log as a single record —
so a crash never leaves a half-applied operation, and replaying the log
over the last snapshot reproduces the state bit for bit. All operations
are serialized through one re-entrant lock (single writer, snapshot-
consistent readers).
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from functools import wraps
from typing import Callable

from .errors import (
    AlreadyAssociated,
    AssociationNotFound,
    BlobNotFound,
    EmptyBody,
    EmptySubjects,
    EmptyTitle,
    InvalidAttachment,
    InvalidDisplayName,
    InvalidUrl,
    InvariantViolation,
    LastAssociation,
    NotACoP,
    NotADiscussion,
    NotAMember,
    NotAuthor,
    NotVisible,
    NotYourCoP,
    SubjectOutOfScope,
)
from .profiles import SCOPE_ALL, MemberProfile, ProfileRegistry, check_scope
from .resources import (
    KIND_DISCUSSION,
    KIND_DOCUMENT,
    KIND_WEBLINK,
    ORIGIN_AUTHORED,
    ORIGIN_SPREAD,
    Reply,
    Resource,
    ResourceCatalog,
    SubjectAssociation,
)
from .search import ProfileHit, ResourceHit, SearchQuery, SearchService
from .seed_io import parse_seed
from .store import FORMAT_VERSION, Store, verify_integrity
from .taxonomy import (
    PrunePolicy,
    SEED_CREATOR,
    Subject,
    Taxonomy,
    UsageEvent,
    subject_num,
)


@dataclass
class EngineConfig:
    allow_member_roots: bool = False
    prune_min_age_days: float = 90.0
    prune_usage_window_days: float | None = None
    # fold the write-ahead log into a fresh snapshot past this many records
    compact_after_events: int = 1000


@dataclass
class ConsultView:
    resource: Resource
    replies: list[Reply]
    associations: list[SubjectAssociation]
    last_activity: float


def locked(method):
    @wraps(method)
    def wrapper(self, *args, **kwargs):
        with self._lock:
            return method(self, *args, **kwargs)

    return wrapper


class Engine:
    def __init__(
        self,
        store: Store | None = None,
        config: EngineConfig | None = None,
        clock: Callable[[], float] = time.time,
    ):
        self.config = config or EngineConfig()
        self.clock = clock
        self.store = store
        self._lock = threading.RLock()
        self.taxonomy = Taxonomy()
        self.profiles = ProfileRegistry()
        self.catalog = ResourceCatalog()
        self._memory_blobs: dict[str, bytes] = {}
        self._rebind_search()
        if store is not None:
            snapshot, records = store.load()
            if snapshot is not None:
                self._restore(snapshot)
            for record in records:
                for delta in record.get("deltas", ()):
                    self._apply(delta)

    def _rebind_search(self) -> None:
        self.searcher = SearchService(self.taxonomy, self.profiles, self.catalog)

    # ------------------------------------------------------------------
    # state plumbing
    # ------------------------------------------------------------------

    def _restore(self, state: dict) -> None:
        self.taxonomy = Taxonomy.from_doc(state.get("taxonomy", {}))
        self.profiles = ProfileRegistry.from_doc(state.get("profiles", {}))
        self.catalog = ResourceCatalog.from_doc(state.get("resources", {}))
        self._rebind_search()

    def dump_state(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "taxonomy": self.taxonomy.to_doc(),
            "profiles": self.profiles.to_doc(),
            "resources": self.catalog.to_doc(),
        }

    @locked
    def state_hash(self) -> str:
        payload = json.dumps(self.dump_state(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    @locked
    def checkpoint(self) -> None:
        if self.store is not None:
            self.store.save(self.dump_state())

    @locked
    def export_state(self) -> dict:
        return self.dump_state()

    @locked
    def import_state(self, state: dict) -> None:
        if state.get("format_version") != FORMAT_VERSION:
            raise InvariantViolation(f"state format {state.get('format_version')!r} unsupported")
        verify_integrity(state)
        self._restore(state)
        if self.store is not None:
            self.store.save(self.dump_state())

    def close(self) -> None:
        if self.store is not None:
            self.store.close()

    def now(self) -> float:
        return self.clock()

    @property
    def taxonomy_version(self) -> int:
        return self.taxonomy.version

    def _commit(self, op: str, deltas: list[dict]) -> None:
        for delta in deltas:
            self._apply(delta)
        if self.store is not None:
            self.store.append({"op": op, "deltas": deltas})
            if self.store.wal_count >= self.config.compact_after_events:
                self.store.save(self.dump_state())

    def _apply(self, delta: dict) -> None:
        kind = delta["t"]
        if kind == "seed_loaded":
            self.taxonomy.install_seed([Subject.from_doc(d) for d in delta["subjects"]])
        elif kind == "subject_added":
            self.taxonomy.insert(Subject.from_doc(delta["subject"]))
        elif kind == "usage_recorded":
            self.taxonomy.append_usage(UsageEvent.from_doc(delta["event"]))
        elif kind == "subjects_deprecated":
            self.taxonomy.deprecate(delta["subjects"])
        elif kind == "subject_purged":
            self.taxonomy.purge(delta["subject"])
        elif kind == "member_registered":
            self.profiles.insert(MemberProfile.from_doc(delta["profile"]))
        elif kind == "profile_updated":
            self.profiles.set_identity(delta["member"], **delta["fields"])
        elif kind == "membership_declared":
            self.profiles.declare(delta["member"], delta["subject"], delta["scope"])
        elif kind == "membership_revoked":
            self.profiles.revoke(delta["member"], delta["subject"])
        elif kind == "resource_created":
            self.catalog.insert_resource(Resource.from_doc(delta["resource"]))
            for adoc in delta["associations"]:
                self.catalog.insert_association(SubjectAssociation.from_doc(adoc))
        elif kind == "reply_added":
            self.catalog.insert_reply(Reply.from_doc(delta["reply"]))
        elif kind == "association_added":
            self.catalog.insert_association(SubjectAssociation.from_doc(delta["association"]))
        elif kind == "association_removed":
            self.catalog.remove_association(
                delta["resource"], delta["subject"], delta["actor"], delta["at"]
            )
        elif kind == "body_edited":
            self.catalog.set_body(delta["resource"], delta["body"])
        elif kind == "resource_deleted":
            self.catalog.delete_resource(delta["resource"])
        else:
            raise ValueError(f"unknown state delta {kind!r}")

    # ------------------------------------------------------------------
    # taxonomy
    # ------------------------------------------------------------------

    @locked
    def load_seed(self, doc: dict) -> Taxonomy:
        if len(self.taxonomy):
            raise InvariantViolation("the taxonomy is already populated; seed import needs a fresh store")
        subjects = parse_seed(doc, at=self.now())
        self._commit("load_seed", [{"t": "seed_loaded", "subjects": [s.to_doc() for s in subjects]}])
        return self.taxonomy

    @locked
    def add_subject(self, label: str, parent: str | None, creator: str) -> Subject:
        if creator != SEED_CREATOR:
            self.profiles.get(creator)
        level = self.taxonomy.validate_new_subject(
            label, parent, creator, allow_member_roots=self.config.allow_member_roots
        )
        subject = Subject(
            id=self.taxonomy.allocate_id(),
            label=label.strip(),
            parent=parent,
            level=level,
            created_by=creator,
            created_at=self.now(),
        )
        self._commit("add_subject", [{"t": "subject_added", "subject": subject.to_doc()}])
        return subject

    @locked
    def subject(self, subject_id: str) -> Subject:
        return self.taxonomy.get(subject_id)

    @locked
    def roots(self) -> list[Subject]:
        return self.taxonomy.roots()

    @locked
    def children(self, subject_id: str) -> list[Subject]:
        return self.taxonomy.children(subject_id)

    @locked
    def path(self, subject_id: str) -> list[Subject]:
        return self.taxonomy.path(subject_id)

    @locked
    def ancestors(self, subject_id: str) -> set[str]:
        return self.taxonomy.ancestors(subject_id)

    @locked
    def descendants(self, subject_id: str) -> set[str]:
        return self.taxonomy.descendants(subject_id)

    @locked
    def is_cop(self, subject_id: str) -> bool:
        return self.taxonomy.is_cop(subject_id)

    @locked
    def record_usage(self, subject_id: str, member_id: str, kind: str, at: float | None = None) -> None:
        self.profiles.get(member_id)
        event = UsageEvent(subject=subject_id, member=member_id, kind=kind, at=at if at is not None else self.now())
        self.taxonomy.validate_usage(event)
        self._commit("record_usage", [{"t": "usage_recorded", "event": event.to_doc()}])

    def _referenced_subjects(self) -> set[str]:
        return self.catalog.subjects_referenced() | self.profiles.subjects_referenced()

    @locked
    def prune_unused(
        self,
        now: float | None = None,
        policy: PrunePolicy | None = None,
        *,
        dry_run: bool = False,
    ) -> list[str]:
        if policy is None:
            policy = PrunePolicy(
                min_age_days=self.config.prune_min_age_days,
                usage_window_days=self.config.prune_usage_window_days,
            )
        moment = now if now is not None else self.now()
        candidates = self.taxonomy.prune_candidates(moment, policy, self._referenced_subjects())
        if candidates and not dry_run:
            self._commit(
                "prune_unused",
                [{"t": "subjects_deprecated", "subjects": candidates, "at": moment}],
            )
        return candidates

    @locked
    def purge_subject(self, subject_id: str) -> None:
        referenced = self._referenced_subjects()
        self.taxonomy.validate_purge(subject_id, referenced)
        self._commit("purge_subject", [{"t": "subject_purged", "subject": subject_id}])

    # ------------------------------------------------------------------
    # profiles
    # ------------------------------------------------------------------

    @locked
    def register(
        self,
        display_name: str,
        email: str,
        country: str | None = None,
        biography: str | None = None,
    ) -> MemberProfile:
        normalized = self.profiles.validate_registration(display_name, email)
        profile = MemberProfile(
            id=self.profiles.allocate_id(),
            display_name=display_name.strip(),
            email=normalized,
            country=country,
            biography=biography,
            created_at=self.now(),
        )
        self._commit("register", [{"t": "member_registered", "profile": profile.to_doc()}])
        return profile

    @locked
    def member(self, member_id: str) -> MemberProfile:
        return self.profiles.get(member_id)

    @locked
    def member_by_email(self, email: str) -> MemberProfile:
        return self.profiles.by_email(email)

    @locked
    def members(self) -> list[MemberProfile]:
        return self.profiles.members()

    @locked
    def update_identity(
        self,
        member_id: str,
        *,
        display_name: str | None = None,
        country: str | None = None,
        biography: str | None = None,
    ) -> MemberProfile:
        self.profiles.get(member_id)
        if display_name is not None and not display_name.strip():
            raise InvalidDisplayName("display name must be non-empty")
        fields = {}
        if display_name is not None:
            fields["display_name"] = display_name.strip()
        if country is not None:
            fields["country"] = country
        if biography is not None:
            fields["biography"] = biography
        if fields:
            self._commit("update_identity", [{"t": "profile_updated", "member": member_id, "fields": fields}])
        return self.profiles.get(member_id)

    @locked
    def declare_membership(self, member_id: str, subject_id: str, scope: str) -> MemberProfile:
        profile = self.profiles.get(member_id)
        self.taxonomy.require_active(subject_id)
        if not self.taxonomy.is_cop(subject_id):
            raise NotACoP(
                f"subject {subject_id!r} is a category of communities; memberships attach to leaves"
            )
        if not self.profiles.validate_declare(member_id, subject_id, scope):
            return profile  # already declared in this scope: nothing to change
        at = self.now()
        self._commit(
            "declare_membership",
            [
                {"t": "membership_declared", "member": member_id, "subject": subject_id, "scope": scope},
                {
                    "t": "usage_recorded",
                    "event": UsageEvent(subject_id, member_id, "profile_fill", at).to_doc(),
                },
            ],
        )
        return self.profiles.get(member_id)

    @locked
    def revoke_membership(self, member_id: str, subject_id: str) -> MemberProfile:
        profile = self.profiles.get(member_id)
        if self.profiles.membership_scope_of(member_id, subject_id) is None:
            raise NotAMember(f"{member_id!r} has no membership of {subject_id!r}")
        self._commit(
            "revoke_membership",
            [{"t": "membership_revoked", "member": member_id, "subject": subject_id}],
        )
        return profile

    @locked
    def memberships(self, member_id: str, scope: str = SCOPE_ALL) -> set[str]:
        return self.profiles.get(member_id).scope_set(scope)

    @locked
    def membership_entries(self, member_id: str) -> list[dict]:
        """Declared memberships with staleness, for profile displays."""
        profile = self.profiles.get(member_id)
        entries = []
        for scope_name, subjects in (
            ("working_context", profile.working_context),
            ("secondary_interests", profile.secondary_interests),
        ):
            for subject_id in sorted(subjects, key=subject_num):
                entries.append(
                    {
                        "subject": subject_id,
                        "scope": scope_name,
                        "stale": self.profiles.is_stale(subject_id, self.taxonomy),
                    }
                )
        return entries

    @locked
    def visible_subjects(self, member_id: str, scope: str = SCOPE_ALL) -> set[str]:
        check_scope(scope)
        return self.profiles.visible_subjects(member_id, scope, self.taxonomy)

    # ------------------------------------------------------------------
    # resources
    # ------------------------------------------------------------------

    def _validate_creation_subjects(self, author: str, subject_ids) -> list[str]:
        subjects = sorted(set(subject_ids), key=subject_num)
        if not subjects:
            raise EmptySubjects("a resource must be indexed under at least one community")
        declared = self.profiles.get(author).scope_set(SCOPE_ALL)
        for subject_id in subjects:
            self.taxonomy.require_active(subject_id)
            if not self.taxonomy.is_cop(subject_id):
                raise NotACoP(
                    f"subject {subject_id!r} is a category; creation tags communities directly"
                )
            if subject_id not in declared:
                raise NotYourCoP(f"author {author!r} is not a member of {subject_id!r}")
        return subjects

    def _create_resource(self, kind: str, author: str, title: str, subject_ids, **payload) -> Resource:
        if not title.strip():
            raise EmptyTitle("resource title must be non-empty")
        subjects = self._validate_creation_subjects(author, subject_ids)
        at = self.now()
        resource = Resource(
            id=self.catalog.allocate_resource_id(),
            kind=kind,
            author=author,
            title=title.strip(),
            created_at=at,
            **payload,
        )
        associations = [
            SubjectAssociation(resource.id, s, author, ORIGIN_AUTHORED, at) for s in subjects
        ]
        deltas: list[dict] = [
            {
                "t": "resource_created",
                "resource": resource.to_doc(),
                "associations": [a.to_doc() for a in associations],
            }
        ]
        deltas.extend(
            {"t": "usage_recorded", "event": UsageEvent(s, author, "index", at).to_doc()}
            for s in subjects
        )
        self._commit(f"create_{kind}", deltas)
        return resource

    @locked
    def create_discussion(self, author: str, title: str, body: str, subjects) -> Resource:
        if not body.strip():
            raise EmptyBody("an initiating message needs a body")
        return self._create_resource(KIND_DISCUSSION, author, title, subjects, body=body)

    @locked
    def create_weblink(self, author: str, title: str, url: str, subjects) -> Resource:
        if not url.startswith(("http://", "https://")):
            raise InvalidUrl(f"{url!r} is not an http(s) URL")
        return self._create_resource(KIND_WEBLINK, author, title, subjects, url=url)

    @locked
    def create_document(self, author: str, title: str, data: bytes, subjects) -> Resource:
        if not data:
            raise InvalidAttachment("document payload is empty")
        ref = self._put_blob(data)
        return self._create_resource(KIND_DOCUMENT, author, title, subjects, attachment_ref=ref)

    def _put_blob(self, data: bytes) -> str:
        if self.store is not None:
            return self.store.put_blob(data)
        digest = hashlib.sha256(data).hexdigest()
        self._memory_blobs[digest] = data
        return f"sha256:{digest}"

    @locked
    def get_blob(self, ref: str) -> bytes:
        if self.store is not None:
            return self.store.get_blob(ref)
        digest = ref.split(":", 1)[-1]
        if digest not in self._memory_blobs:
            raise BlobNotFound(f"no blob {ref!r}")
        return self._memory_blobs[digest]

    @locked
    def resource(self, resource_id: str) -> Resource:
        return self.catalog.get(resource_id)

    @locked
    def resources(self) -> list[Resource]:
        return self.catalog.resources()

    @locked
    def reply(self, author: str, discussion_id: str, body: str) -> Reply:
        resource = self.catalog.get(discussion_id)
        if resource.kind != KIND_DISCUSSION:
            raise NotADiscussion(f"resource {discussion_id!r} is a {resource.kind}, not a discussion")
        if not body.strip():
            raise EmptyBody("reply body must be non-empty")
        if not self.searcher.visible_to(author, discussion_id):
            raise NotVisible(f"discussion {discussion_id!r} is not in any of {author!r}'s communities")
        reply = Reply(
            id=self.catalog.allocate_reply_id(),
            discussion=discussion_id,
            author=author,
            body=body,
            created_at=self.now(),
        )
        self._commit("reply", [{"t": "reply_added", "reply": reply.to_doc()}])
        return reply

    @locked
    def spread(self, member_id: str, resource_id: str, subject_id: str) -> SubjectAssociation:
        self.catalog.get(resource_id)
        self.profiles.get(member_id)
        self.taxonomy.require_active(subject_id)
        if not self.searcher.visible_to(member_id, resource_id):
            raise NotVisible(f"resource {resource_id!r} is not in any of {member_id!r}'s communities")
        if self.catalog.association(resource_id, subject_id) is not None:
            raise AlreadyAssociated(f"resource {resource_id!r} already carries {subject_id!r}")
        if subject_id not in self.profiles.visible_subjects(member_id, SCOPE_ALL, self.taxonomy):
            raise SubjectOutOfScope(
                f"subject {subject_id!r} is outside {member_id!r}'s view of the classification"
            )
        at = self.now()
        association = SubjectAssociation(resource_id, subject_id, member_id, ORIGIN_SPREAD, at)
        self._commit(
            "spread",
            [
                {"t": "association_added", "association": association.to_doc()},
                {"t": "usage_recorded", "event": UsageEvent(subject_id, member_id, "spread", at).to_doc()},
            ],
        )
        return association

    @locked
    def remove_association(self, actor: str, resource_id: str, subject_id: str) -> None:
        resource = self.catalog.get(resource_id)
        if actor != resource.author:
            raise NotAuthor("only the author of the resource may remove its subjects")
        if self.catalog.association(resource_id, subject_id) is None:
            raise AssociationNotFound(
                f"resource {resource_id!r} is not associated with {subject_id!r}"
            )
        if len(self.catalog.associated_subjects(resource_id)) <= 1:
            raise LastAssociation("a resource must keep at least one community")
        self._commit(
            "remove_association",
            [
                {
                    "t": "association_removed",
                    "resource": resource_id,
                    "subject": subject_id,
                    "actor": actor,
                    "at": self.now(),
                }
            ],
        )

    @locked
    def edit_body(self, actor: str, resource_id: str, body: str) -> Resource:
        """Authors may rewrite their own initiating message; ranking recency
        is driven by replies and tags, not edits."""
        resource = self.catalog.get(resource_id)
        if resource.kind != KIND_DISCUSSION:
            raise NotADiscussion(f"resource {resource_id!r} is a {resource.kind}; only discussions have a body")
        if actor != resource.author:
            raise NotAuthor("only the author may edit the message body")
        if not body.strip():
            raise EmptyBody("the message body must stay non-empty")
        self._commit(
            "edit_body",
            [{"t": "body_edited", "resource": resource_id, "body": body, "at": self.now()}],
        )
        return self.catalog.get(resource_id)

    @locked
    def delete_resource(self, resource_id: str) -> None:
        """Operator-only removal of a whole resource (CLI surface); member
        regulation goes through remove_association instead."""
        self.catalog.get(resource_id)
        self._commit(
            "delete_resource",
            [{"t": "resource_deleted", "resource": resource_id, "at": self.now()}],
        )

    @locked
    def consult(self, member_id: str, resource_id: str) -> ConsultView:
        resource = self.catalog.get(resource_id)
        self.profiles.get(member_id)
        if not self.searcher.visible_to(member_id, resource_id):
            raise NotVisible(f"resource {resource_id!r} is not in any of {member_id!r}'s communities")
        at = self.now()
        deltas = []
        for subject_id in sorted(self.catalog.associated_subjects(resource_id), key=subject_num):
            if self.taxonomy.get(subject_id).active:
                deltas.append(
                    {
                        "t": "usage_recorded",
                        "event": UsageEvent(subject_id, member_id, "consult", at).to_doc(),
                    }
                )
        if deltas:
            self._commit("consult", deltas)
        return ConsultView(
            resource=resource,
            replies=self.catalog.replies(resource_id),
            associations=self.catalog.associations(resource_id),
            last_activity=self.catalog.last_activity(resource_id),
        )

    # ------------------------------------------------------------------
    # search
    # ------------------------------------------------------------------

    @locked
    def effective_subjects(self, resource_id: str) -> set[str]:
        return self.searcher.effective_subjects(resource_id)

    @locked
    def subject_matches(self, resource_id: str, subject_id: str) -> bool:
        return self.searcher.subject_matches(resource_id, subject_id)

    @locked
    def visible_to(self, member_id: str, resource_id: str) -> bool:
        return self.searcher.visible_to(member_id, resource_id)

    @locked
    def search_resources(self, member_id: str, query: SearchQuery) -> list[ResourceHit]:
        hits = self.searcher.search_resources(member_id, query)
        self._record_search_usage(member_id, query)
        return hits

    @locked
    def search_profiles(self, member_id: str, query: SearchQuery) -> list[ProfileHit]:
        hits = self.searcher.search_profiles(member_id, query)
        self._record_search_usage(member_id, query)
        return hits

    def _record_search_usage(self, member_id: str, query: SearchQuery) -> None:
        at = self.now()
        deltas = [
            {"t": "usage_recorded", "event": UsageEvent(s, member_id, "search_select", at).to_doc()}
            for s in query.active_subjects()
        ]
        if deltas:
            self._commit("search", deltas)

    # ------------------------------------------------------------------
    # statistics
    # ------------------------------------------------------------------

    @locked
    def subject_stats(self) -> list[dict]:
        """Per-subject usage/reference counts: the evidence an operator
        needs to judge which member-added subjects earn their keep."""
        association_counts: dict[str, int] = {}
        for association in self.catalog.all_associations():
            association_counts[association.subject] = association_counts.get(association.subject, 0) + 1
        member_counts: dict[str, int] = {}
        for profile in self.profiles.members():
            for subject_id in profile.working_context | profile.secondary_interests:
                member_counts[subject_id] = member_counts.get(subject_id, 0) + 1
        rows = []
        for subject in sorted(self.taxonomy.all_subjects(), key=lambda s: subject_num(s.id)):
            rows.append(
                {
                    "id": subject.id,
                    "label": subject.label,
                    "level": subject.level,
                    "status": subject.status,
                    "created_by": subject.created_by,
                    "usage": self.taxonomy.usage_counts(subject.id),
                    "association_count": association_counts.get(subject.id, 0),
                    "member_count": member_counts.get(subject.id, 0),
                }
            )
        return rows
