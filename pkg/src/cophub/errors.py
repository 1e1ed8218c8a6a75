"""Exception hierarchy shared by the engine, store, service and CLI.

Every error carries a stable machine-readable ``code`` (the class name);
the HTTP facade maps ``http_status`` verbatim, so adding or renaming a
class here is a wire-contract change.
"""

from __future__ import annotations


class CophubError(Exception):
    """Base class for every engine/store error."""

    http_status = 422

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__

    @property
    def code(self) -> str:
        return self.__class__.__name__


# --- taxonomy ---------------------------------------------------------------

class MalformedSeed(CophubError):
    http_status = 422


class InvariantViolation(CophubError):
    http_status = 422


class SubjectNotFound(CophubError):
    http_status = 404


class DeprecatedSubject(SubjectNotFound):
    """Subject exists but was deprecated; rejected wherever an active one is required."""

    http_status = 404


class ParentNotFound(CophubError):
    http_status = 404


class ParentDeprecated(CophubError):
    http_status = 422


class DepthExceeded(CophubError):
    http_status = 422


class DuplicateSibling(CophubError):
    http_status = 409


class InvalidLabel(CophubError):
    http_status = 422


class RootCreationDisallowed(CophubError):
    """Members may not create level-1 categories unless allow_member_roots is set."""

    http_status = 403


class PurgeRefused(CophubError):
    http_status = 422


# --- profiles ---------------------------------------------------------------

class MemberNotFound(CophubError):
    http_status = 404


class DuplicateEmail(CophubError):
    http_status = 409


class InvalidEmail(CophubError):
    http_status = 422


class InvalidDisplayName(CophubError):
    http_status = 422


class NotACoP(CophubError):
    """Subject is a category (or deprecated), not a declarable leaf CoP."""

    http_status = 422


class ScopeConflict(CophubError):
    http_status = 409


class NotAMember(CophubError):
    http_status = 404


class InvalidScope(CophubError):
    http_status = 422


# --- resources --------------------------------------------------------------

class ResourceNotFound(CophubError):
    http_status = 404


class EmptySubjects(CophubError):
    http_status = 422


class EmptyTitle(CophubError):
    http_status = 422


class EmptyBody(CophubError):
    http_status = 422


class InvalidUrl(CophubError):
    http_status = 422


class InvalidAttachment(CophubError):
    http_status = 422


class NotYourCoP(CophubError):
    http_status = 403


class NotVisible(CophubError):
    http_status = 403


class NotADiscussion(CophubError):
    http_status = 422


class AlreadyAssociated(CophubError):
    http_status = 409


class AssociationNotFound(CophubError):
    http_status = 404


class NotAuthor(CophubError):
    http_status = 403


class LastAssociation(CophubError):
    http_status = 422


class BlobNotFound(CophubError):
    http_status = 404


# --- search -----------------------------------------------------------------

class SubjectOutOfScope(CophubError):
    http_status = 422


class InvalidQuery(CophubError):
    http_status = 422


# --- api / service ----------------------------------------------------------

class NotYourProfile(CophubError):
    http_status = 403


class AdminRequired(CophubError):
    http_status = 403


class BadToken(CophubError):
    http_status = 401


class ExpiredToken(CophubError):
    http_status = 401


class BadConfig(CophubError):
    http_status = 422


class PortInUse(CophubError):
    http_status = 422


# --- store ------------------------------------------------------------------

class CorruptStore(CophubError):
    http_status = 500


class FormatVersionUnsupported(CophubError):
    http_status = 500


class StoreLocked(CophubError):
    http_status = 409
