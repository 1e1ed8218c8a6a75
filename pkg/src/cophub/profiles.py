"""Member identities and their two disjoint community-membership sets.

The working context holds the communities bound to a member's daily
practice; secondary interests hold the ones they merely follow. Both sets
reference leaf subjects only, and together they drive the member's scoped
view of the classification.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    DuplicateEmail,
    InvalidDisplayName,
    InvalidEmail,
    InvalidScope,
    MemberNotFound,
    NotAMember,
    ScopeConflict,
)
from .taxonomy import Taxonomy

SCOPE_WORKING = "working_context"
SCOPE_SECONDARY = "secondary_interests"
SCOPE_ALL = "all"

MEMBERSHIP_SCOPES = (SCOPE_WORKING, SCOPE_SECONDARY)
SCOPES = (SCOPE_WORKING, SCOPE_SECONDARY, SCOPE_ALL)

_EMAIL = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")


def member_num(member_id: str) -> int:
    return int(member_id.lstrip("m"))


def check_scope(scope: str, *, allow_all: bool = True) -> str:
    allowed = SCOPES if allow_all else MEMBERSHIP_SCOPES
    if scope not in allowed:
        raise InvalidScope(f"scope must be one of {allowed}, got {scope!r}")
    return scope


@dataclass
class MemberProfile:
    id: str
    display_name: str
    email: str
    country: str | None = None
    biography: str | None = None
    working_context: set[str] = field(default_factory=set)
    secondary_interests: set[str] = field(default_factory=set)
    created_at: float = 0.0

    def scope_set(self, scope: str) -> set[str]:
        check_scope(scope)
        if scope == SCOPE_WORKING:
            return set(self.working_context)
        if scope == SCOPE_SECONDARY:
            return set(self.secondary_interests)
        return self.working_context | self.secondary_interests

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "display_name": self.display_name,
            "email": self.email,
            "country": self.country,
            "biography": self.biography,
            "working_context": sorted(self.working_context),
            "secondary_interests": sorted(self.secondary_interests),
            "created_at": self.created_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "MemberProfile":
        return cls(
            id=doc["id"],
            display_name=doc["display_name"],
            email=doc["email"],
            country=doc.get("country"),
            biography=doc.get("biography"),
            working_context=set(doc.get("working_context", ())),
            secondary_interests=set(doc.get("secondary_interests", ())),
            created_at=doc.get("created_at", 0.0),
        )


class ProfileRegistry:
    def __init__(self):
        self._members: dict[str, MemberProfile] = {}
        self._by_email: dict[str, str] = {}
        self._next_num = 1

    def __contains__(self, member_id: str) -> bool:
        return member_id in self._members

    def __len__(self) -> int:
        return len(self._members)

    def get(self, member_id: str) -> MemberProfile:
        try:
            return self._members[member_id]
        except KeyError:
            raise MemberNotFound(f"no member {member_id!r}") from None

    def by_email(self, email: str) -> MemberProfile:
        member_id = self._by_email.get(email.strip().lower())
        if member_id is None:
            raise MemberNotFound(f"no member with email {email!r}")
        return self._members[member_id]

    def members(self) -> list[MemberProfile]:
        return sorted(self._members.values(), key=lambda m: member_num(m.id))

    def allocate_id(self) -> str:
        member_id = f"m{self._next_num}"
        self._next_num += 1
        return member_id

    def validate_registration(self, display_name: str, email: str) -> str:
        """Returns the normalized email; raises without mutating."""
        if not display_name.strip():
            raise InvalidDisplayName("display name must be non-empty")
        normalized = email.strip().lower()
        if not _EMAIL.match(normalized):
            raise InvalidEmail(f"{email!r} is not a usable email address")
        if normalized in self._by_email:
            raise DuplicateEmail(f"email {email!r} is already registered")
        return normalized

    def insert(self, profile: MemberProfile) -> None:
        self._members[profile.id] = profile
        self._by_email[profile.email] = profile.id
        self._next_num = max(self._next_num, member_num(profile.id) + 1)

    def set_identity(
        self,
        member_id: str,
        *,
        display_name: str | None = None,
        country: str | None = None,
        biography: str | None = None,
    ) -> MemberProfile:
        profile = self.get(member_id)
        if display_name is not None:
            profile.display_name = display_name
        if country is not None:
            profile.country = country
        if biography is not None:
            profile.biography = biography
        return profile

    def membership_scope_of(self, member_id: str, subject_id: str) -> str | None:
        profile = self.get(member_id)
        if subject_id in profile.working_context:
            return SCOPE_WORKING
        if subject_id in profile.secondary_interests:
            return SCOPE_SECONDARY
        return None

    def validate_declare(self, member_id: str, subject_id: str, scope: str) -> bool:
        """True when the declaration would change state; raises on conflict.
        The leaf/active checks live with the engine, which sees the taxonomy."""
        check_scope(scope, allow_all=False)
        current = self.membership_scope_of(member_id, subject_id)
        if current is None:
            return True
        if current != scope:
            raise ScopeConflict(
                f"subject {subject_id!r} is already in {current}; the two scope sets are disjoint"
            )
        return False

    def declare(self, member_id: str, subject_id: str, scope: str) -> MemberProfile:
        profile = self.get(member_id)
        if scope == SCOPE_WORKING:
            profile.working_context.add(subject_id)
        else:
            profile.secondary_interests.add(subject_id)
        return profile

    def revoke(self, member_id: str, subject_id: str) -> str:
        """Removes the membership and reports which set held it."""
        profile = self.get(member_id)
        scope = self.membership_scope_of(member_id, subject_id)
        if scope is None:
            raise NotAMember(f"{member_id!r} has no membership of {subject_id!r}")
        if scope == SCOPE_WORKING:
            profile.working_context.discard(subject_id)
        else:
            profile.secondary_interests.discard(subject_id)
        return scope

    def subjects_referenced(self) -> set[str]:
        referenced: set[str] = set()
        for profile in self._members.values():
            referenced |= profile.working_context
            referenced |= profile.secondary_interests
        return referenced

    # -- scoped classification view ---------------------------------------

    def is_stale(self, subject_id: str, taxonomy: Taxonomy) -> bool:
        """A declared membership goes stale when its subject stops being an
        active leaf (deprecated, or grew children and became a category)."""
        if subject_id not in taxonomy:
            return True
        return not taxonomy.is_cop(subject_id)

    def declared_cops(self, member_id: str, scope: str, taxonomy: Taxonomy) -> set[str]:
        profile = self.get(member_id)
        check_scope(scope)
        return {s for s in profile.scope_set(scope) if not self.is_stale(s, taxonomy)}

    def visible_subjects(self, member_id: str, scope: str, taxonomy: Taxonomy) -> set[str]:
        """The minimal sub-forest spanning the member's declared communities:
        each non-stale declared leaf plus all its ancestors."""
        visible: set[str] = set()
        for cop in self.declared_cops(member_id, scope, taxonomy):
            visible.add(cop)
            visible |= taxonomy.ancestors(cop)
        return visible

    # -- serialization -----------------------------------------------------

    def to_doc(self) -> dict:
        return {
            "next_member_num": self._next_num,
            "members": [m.to_doc() for m in self.members()],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ProfileRegistry":
        registry = cls()
        for mdoc in doc.get("members", ()):
            registry.insert(MemberProfile.from_doc(mdoc))
        registry._next_num = max(registry._next_num, doc.get("next_member_num", 1))
        return registry
