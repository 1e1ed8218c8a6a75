"""Shared resources: discussions with replies, documents and web links,
plus their subject associations.

An association carries provenance — ``authored`` when the author tagged
the resource at creation, ``spread`` when any member later pushed it into
another community. Removals are author-only and audited.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AssociationNotFound, ResourceNotFound

KIND_DISCUSSION = "discussion"
KIND_DOCUMENT = "document"
KIND_WEBLINK = "weblink"
RESOURCE_KINDS = (KIND_DISCUSSION, KIND_DOCUMENT, KIND_WEBLINK)

ORIGIN_AUTHORED = "authored"
ORIGIN_SPREAD = "spread"


def resource_num(resource_id: str) -> int:
    return int(resource_id.lstrip("r"))


@dataclass
class Resource:
    id: str
    kind: str
    author: str
    title: str
    created_at: float
    body: str | None = None
    url: str | None = None
    attachment_ref: str | None = None

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "author": self.author,
            "title": self.title,
            "created_at": self.created_at,
            "body": self.body,
            "url": self.url,
            "attachment_ref": self.attachment_ref,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Resource":
        return cls(
            id=doc["id"],
            kind=doc["kind"],
            author=doc["author"],
            title=doc["title"],
            created_at=doc["created_at"],
            body=doc.get("body"),
            url=doc.get("url"),
            attachment_ref=doc.get("attachment_ref"),
        )


@dataclass
class Reply:
    id: str
    discussion: str
    author: str
    body: str
    created_at: float

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "discussion": self.discussion,
            "author": self.author,
            "body": self.body,
            "created_at": self.created_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Reply":
        return cls(
            id=doc["id"],
            discussion=doc["discussion"],
            author=doc["author"],
            body=doc["body"],
            created_at=doc["created_at"],
        )


@dataclass
class SubjectAssociation:
    resource: str
    subject: str
    associated_by: str
    origin: str
    associated_at: float

    def to_doc(self) -> dict:
        return {
            "resource": self.resource,
            "subject": self.subject,
            "associated_by": self.associated_by,
            "origin": self.origin,
            "associated_at": self.associated_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "SubjectAssociation":
        return cls(
            resource=doc["resource"],
            subject=doc["subject"],
            associated_by=doc["associated_by"],
            origin=doc["origin"],
            associated_at=doc["associated_at"],
        )


class ResourceCatalog:
    def __init__(self):
        self._resources: dict[str, Resource] = {}
        self._replies: dict[str, list[Reply]] = {}
        self._associations: dict[str, dict[str, SubjectAssociation]] = {}
        self._next_resource = 1
        self._next_reply = 1
        # audit trail of association removals: who removed what, when
        self.removal_audit: list[dict] = []

    def __contains__(self, resource_id: str) -> bool:
        return resource_id in self._resources

    def __len__(self) -> int:
        return len(self._resources)

    def get(self, resource_id: str) -> Resource:
        try:
            return self._resources[resource_id]
        except KeyError:
            raise ResourceNotFound(f"no resource {resource_id!r}") from None

    def resources(self) -> list[Resource]:
        return sorted(self._resources.values(), key=lambda r: resource_num(r.id))

    def replies(self, resource_id: str) -> list[Reply]:
        items = list(self._replies.get(resource_id, ()))
        items.sort(key=lambda r: (r.created_at, int(r.id.lstrip("p"))))
        return items

    def associations(self, resource_id: str) -> list[SubjectAssociation]:
        items = list(self._associations.get(resource_id, {}).values())
        items.sort(key=lambda a: (a.associated_at, a.subject))
        return items

    def association(self, resource_id: str, subject_id: str) -> SubjectAssociation | None:
        return self._associations.get(resource_id, {}).get(subject_id)

    def associated_subjects(self, resource_id: str) -> set[str]:
        return set(self._associations.get(resource_id, {}))

    def all_associations(self) -> list[SubjectAssociation]:
        out = []
        for rid in sorted(self._associations, key=resource_num):
            out.extend(self.associations(rid))
        return out

    def subjects_referenced(self) -> set[str]:
        referenced: set[str] = set()
        for per_resource in self._associations.values():
            referenced.update(per_resource)
        return referenced

    def last_activity(self, resource_id: str) -> float:
        """Recency key for ranking: creation, latest reply or latest tag."""
        resource = self.get(resource_id)
        latest = resource.created_at
        for reply in self._replies.get(resource_id, ()):
            latest = max(latest, reply.created_at)
        for association in self._associations.get(resource_id, {}).values():
            latest = max(latest, association.associated_at)
        return latest

    # -- apply-path mutations ---------------------------------------------

    def allocate_resource_id(self) -> str:
        rid = f"r{self._next_resource}"
        self._next_resource += 1
        return rid

    def allocate_reply_id(self) -> str:
        pid = f"p{self._next_reply}"
        self._next_reply += 1
        return pid

    def insert_resource(self, resource: Resource) -> None:
        self._resources[resource.id] = resource
        self._next_resource = max(self._next_resource, resource_num(resource.id) + 1)

    def set_body(self, resource_id: str, body: str) -> None:
        self._resources[resource_id].body = body

    def delete_resource(self, resource_id: str) -> None:
        """Admin-level removal of a whole resource with its thread and tags."""
        self._resources.pop(resource_id)
        self._replies.pop(resource_id, None)
        self._associations.pop(resource_id, None)

    def insert_reply(self, reply: Reply) -> None:
        self._replies.setdefault(reply.discussion, []).append(reply)
        self._next_reply = max(self._next_reply, int(reply.id.lstrip("p")) + 1)

    def insert_association(self, association: SubjectAssociation) -> None:
        self._associations.setdefault(association.resource, {})[association.subject] = association

    def remove_association(self, resource_id: str, subject_id: str, actor: str, at: float) -> None:
        per_resource = self._associations.get(resource_id, {})
        if subject_id not in per_resource:
            raise AssociationNotFound(f"resource {resource_id!r} is not associated with {subject_id!r}")
        del per_resource[subject_id]
        self.removal_audit.append(
            {"resource": resource_id, "subject": subject_id, "actor": actor, "at": at}
        )

    # -- serialization ------------------------------------------------------

    def to_doc(self) -> dict:
        replies = []
        for rid in sorted(self._replies, key=resource_num):
            replies.extend(r.to_doc() for r in self.replies(rid))
        return {
            "next_resource_num": self._next_resource,
            "next_reply_num": self._next_reply,
            "resources": [r.to_doc() for r in self.resources()],
            "replies": replies,
            "associations": [a.to_doc() for a in self.all_associations()],
            "removal_audit": list(self.removal_audit),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ResourceCatalog":
        catalog = cls()
        for rdoc in doc.get("resources", ()):
            catalog.insert_resource(Resource.from_doc(rdoc))
        for pdoc in doc.get("replies", ()):
            catalog.insert_reply(Reply.from_doc(pdoc))
        for adoc in doc.get("associations", ()):
            catalog.insert_association(SubjectAssociation.from_doc(adoc))
        catalog.removal_audit = list(doc.get("removal_audit", ()))
        catalog._next_resource = max(catalog._next_resource, doc.get("next_resource_num", 1))
        catalog._next_reply = max(catalog._next_reply, doc.get("next_reply_num", 1))
        return catalog
