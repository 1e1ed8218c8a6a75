"""Contextualized search over resources and member profiles.

Matching is inheritance-aware downward only: a resource tagged on a
category is found in every descendant community, but a leaf tag never
surfaces the resource at its ancestor categories. Queries are a cart of
subjects evaluated facet-wise — AND across level-1 categories, OR inside
one — against the member's scoped view of the classification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidQuery, SubjectOutOfScope
from .profiles import SCOPE_ALL, ProfileRegistry, check_scope, member_num
from .resources import ResourceCatalog, resource_num
from .taxonomy import Taxonomy

TARGET_RESOURCES = "resources"
TARGET_PROFILES = "profiles"


@dataclass
class CartItem:
    subject: str
    active: bool = True


@dataclass
class SearchQuery:
    target: str
    cart: list[CartItem] = field(default_factory=list)
    scope: str = SCOPE_ALL

    def active_subjects(self) -> list[str]:
        return [item.subject for item in self.cart if item.active]

    def to_doc(self) -> dict:
        return {
            "target": self.target,
            "scope": self.scope,
            "cart": [{"subject": i.subject, "active": i.active} for i in self.cart],
        }


@dataclass
class ResourceHit:
    resource: str
    matched_subjects: set[str]
    last_activity: float


@dataclass
class ProfileHit:
    member: str
    matched_subjects: set[str]


class SearchService:
    """Pure reads over the engine's three stores; usage recording is the
    caller's job so that searching stays side-effect free here."""

    def __init__(self, taxonomy: Taxonomy, profiles: ProfileRegistry, catalog: ResourceCatalog):
        self.taxonomy = taxonomy
        self.profiles = profiles
        self.catalog = catalog

    # -- matching primitives ----------------------------------------------

    def effective_subjects(self, resource_id: str) -> set[str]:
        """Every subject under which the resource is findable: each active
        associated subject plus all its active descendants."""
        self.catalog.get(resource_id)
        effective: set[str] = set()
        for subject_id in self.catalog.associated_subjects(resource_id):
            subject = self.taxonomy.get(subject_id)
            if not subject.active:
                continue
            effective.add(subject_id)
            effective |= self.taxonomy.descendants(subject_id)
        return effective

    def subject_matches(self, resource_id: str, subject_id: str) -> bool:
        self.taxonomy.get(subject_id)
        return subject_id in self.effective_subjects(resource_id)

    def visible_to(self, member_id: str, resource_id: str) -> bool:
        """Authors always see their own resources; everyone else needs a
        declared community among the resource's effective subjects."""
        resource = self.catalog.get(resource_id)
        profile = self.profiles.get(member_id)
        if resource.author == member_id:
            return True
        return bool(self.effective_subjects(resource_id) & profile.scope_set(SCOPE_ALL))

    # -- queries ------------------------------------------------------------

    def check_query(self, member_id: str, query: SearchQuery, expected_target: str) -> list[str]:
        """Validate cart shape and scope containment; returns active subjects."""
        if query.target != expected_target:
            raise InvalidQuery(f"query target must be {expected_target!r}, got {query.target!r}")
        check_scope(query.scope)
        seen: set[str] = set()
        for item in query.cart:
            if item.subject in seen:
                raise InvalidQuery(f"cart lists subject {item.subject!r} twice")
            seen.add(item.subject)
        scoped = self.profiles.visible_subjects(member_id, query.scope, self.taxonomy)
        for item in query.cart:
            self.taxonomy.get(item.subject)
            if item.subject not in scoped:
                raise SubjectOutOfScope(
                    f"subject {item.subject!r} is outside the member's "
                    f"{query.scope} view of the classification"
                )
        return query.active_subjects()

    def facet_groups(self, subject_ids: list[str]) -> dict[str, list[str]]:
        """Cart subjects bucketed by their level-1 root category."""
        groups: dict[str, list[str]] = {}
        for subject_id in subject_ids:
            groups.setdefault(self.taxonomy.root_of(subject_id), []).append(subject_id)
        return groups

    def search_resources(self, member_id: str, query: SearchQuery) -> list[ResourceHit]:
        """Hits are resources visible to the member that satisfy every facet
        group (any subject within a group suffices), newest activity first."""
        active = self.check_query(member_id, query, TARGET_RESOURCES)
        groups = self.facet_groups(active)
        profile = self.profiles.get(member_id)
        declared = profile.scope_set(SCOPE_ALL)

        hits: list[ResourceHit] = []
        for resource in self.catalog.resources():
            effective = self.effective_subjects(resource.id)
            if resource.author != member_id and not (effective & declared):
                continue
            matched = {s for s in active if s in effective}
            if all(any(s in effective for s in group) for group in groups.values()):
                hits.append(
                    ResourceHit(
                        resource=resource.id,
                        matched_subjects=matched,
                        last_activity=self.catalog.last_activity(resource.id),
                    )
                )
        hits.sort(key=lambda h: (-h.last_activity, resource_num(h.resource)))
        return hits

    def search_profiles(self, member_id: str, query: SearchQuery) -> list[ProfileHit]:
        """A member matches a cart subject when it is one of their declared
        communities or an ancestor of one, so category queries find the
        members of every child community. The requester is excluded."""
        active = self.check_query(member_id, query, TARGET_PROFILES)
        groups = self.facet_groups(active)

        hits: list[ProfileHit] = []
        for profile in self.profiles.members():
            if profile.id == member_id:
                continue
            closure = self.profiles.visible_subjects(profile.id, SCOPE_ALL, self.taxonomy)
            matched = {s for s in active if s in closure}
            if all(any(s in closure for s in group) for group in groups.values()):
                hits.append(ProfileHit(member=profile.id, matched_subjects=matched))

        def sort_key(hit: ProfileHit):
            profile = self.profiles.get(hit.member)
            return (-len(hit.matched_subjects), profile.display_name, member_num(hit.member))

        hits.sort(key=sort_key)
        return hits
