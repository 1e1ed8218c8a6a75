"""HTTP facade over the engine.

Every endpoint delegates to one engine operation; engine errors surface as
4xx responses whose body carries the error's stable code. Read responses
echo the taxonomy version so clients can detect a stale classification.
Sessions are token-by-email; admin endpoints require the separately
configured admin token.
"""

from __future__ import annotations

import base64
import binascii
import secrets
from dataclasses import dataclass, field

from fastapi import Depends, FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .engine import ConsultView, Engine
from .errors import (
    AdminRequired,
    BadToken,
    CophubError,
    ExpiredToken,
    InvalidAttachment,
    NotYourProfile,
)
from .profiles import MemberProfile, SCOPE_ALL
from .search import CartItem, ProfileHit, ResourceHit, SearchQuery
from .taxonomy import PrunePolicy, Subject

DEFAULT_SESSION_TTL = 24 * 3600.0


@dataclass
class ServiceConfig:
    admin_token: str = "admin"
    session_ttl: float = DEFAULT_SESSION_TTL
    cors_origins: list[str] = field(default_factory=lambda: ["*"])


@dataclass
class Session:
    token: str
    member: str
    issued_at: float
    expires_at: float


class SessionManager:
    def __init__(self, engine: Engine, ttl: float):
        self.engine = engine
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}

    def login(self, email: str) -> Session:
        profile = self.engine.member_by_email(email)
        now = self.engine.now()
        session = Session(
            token=secrets.token_urlsafe(24),
            member=profile.id,
            issued_at=now,
            expires_at=now + self.ttl,
        )
        self._sessions[session.token] = session
        return session

    def resolve(self, token: str) -> Session:
        session = self._sessions.get(token)
        if session is None:
            raise BadToken("unknown session token")
        if self.engine.now() >= session.expires_at:
            del self._sessions[token]
            raise ExpiredToken("session expired; log in again")
        return session


# --- request bodies ----------------------------------------------------------

class RegisterBody(BaseModel):
    display_name: str
    email: str
    country: str | None = None
    biography: str | None = None


class LoginBody(BaseModel):
    email: str


class ProfileUpdateBody(BaseModel):
    display_name: str | None = None
    country: str | None = None
    biography: str | None = None


class MembershipBody(BaseModel):
    subject: str
    scope: str


class AddSubjectBody(BaseModel):
    label: str
    parent: str | None = None


class DiscussionBody(BaseModel):
    title: str
    body: str
    subjects: list[str]


class WeblinkBody(BaseModel):
    title: str
    url: str
    subjects: list[str]


class DocumentBody(BaseModel):
    title: str
    content_base64: str
    subjects: list[str]


class ReplyBody(BaseModel):
    body: str


class BodyEdit(BaseModel):
    body: str


class SpreadBody(BaseModel):
    subject: str


class CartItemBody(BaseModel):
    subject: str
    active: bool = True


class SearchBody(BaseModel):
    cart: list[CartItemBody] = []
    scope: str = SCOPE_ALL


class PruneBody(BaseModel):
    min_age_days: float | None = None
    usage_window_days: float | None = None
    dry_run: bool = False


# --- serializers -------------------------------------------------------------

def subject_doc(subject: Subject) -> dict:
    return subject.to_doc()


def profile_doc(engine: Engine, profile: MemberProfile) -> dict:
    doc = profile.to_doc()
    doc["memberships"] = engine.membership_entries(profile.id)
    return doc


def resource_summary(engine: Engine, resource_id: str) -> dict:
    doc = engine.resource(resource_id).to_doc()
    doc["last_activity"] = engine.catalog.last_activity(resource_id)
    return doc


def consult_doc(engine: Engine, view: ConsultView) -> dict:
    return {
        "taxonomy_version": engine.taxonomy_version,
        "resource": view.resource.to_doc(),
        "replies": [r.to_doc() for r in view.replies],
        "associations": [a.to_doc() for a in view.associations],
        "last_activity": view.last_activity,
    }


def resource_hit_doc(engine: Engine, hit: ResourceHit) -> dict:
    return {
        "resource": resource_summary(engine, hit.resource),
        "matched_subjects": sorted(hit.matched_subjects),
        "last_activity": hit.last_activity,
    }


def profile_hit_doc(engine: Engine, hit: ProfileHit) -> dict:
    profile = engine.member(hit.member)
    return {
        "member": {"id": profile.id, "display_name": profile.display_name, "country": profile.country},
        "matched_subjects": sorted(hit.matched_subjects),
    }


def build_query(target: str, body: SearchBody) -> SearchQuery:
    return SearchQuery(
        target=target,
        cart=[CartItem(subject=i.subject, active=i.active) for i in body.cart],
        scope=body.scope,
    )


def search_response(engine: Engine, body: SearchBody, target: str, hits: list[dict]) -> dict:
    return {
        "taxonomy_version": engine.taxonomy_version,
        "target": target,
        "scope": body.scope,
        "cart": [{"subject": i.subject, "active": i.active} for i in body.cart],
        "hits": hits,
    }


# --- app factory --------------------------------------------------------------

def build_app(engine: Engine, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    sessions = SessionManager(engine, config.session_ttl)
    app = FastAPI(
        title="cophub",
        version="0.1.0",
        openapi_url="/api/spec",
        docs_url="/api/docs",
    )
    app.add_middleware(
        CORSMiddleware,
        allow_origins=config.cors_origins,
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.engine = engine
    app.state.sessions = sessions

    @app.exception_handler(CophubError)
    async def engine_error(_request: Request, exc: CophubError):
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": exc.message},
        )

    @app.exception_handler(RequestValidationError)
    async def shape_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "ValidationError", "message": str(exc.errors()[:3])},
        )

    def bearer_token(authorization: str | None) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise BadToken("missing bearer token")
        return authorization.removeprefix("Bearer ").strip()

    def current_session(authorization: str | None = Header(default=None)) -> Session:
        return sessions.resolve(bearer_token(authorization))

    def require_admin(authorization: str | None = Header(default=None)) -> None:
        if bearer_token(authorization) != config.admin_token:
            raise AdminRequired("this endpoint needs the admin token")

    # -- members and sessions ------------------------------------------------

    @app.post("/api/members", status_code=201)
    def register(body: RegisterBody):
        profile = engine.register(body.display_name, body.email, body.country, body.biography)
        return profile_doc(engine, profile)

    @app.post("/api/sessions", status_code=201)
    def login(body: LoginBody):
        session = sessions.login(body.email)
        return {
            "token": session.token,
            "member": session.member,
            "issued_at": session.issued_at,
            "expires_at": session.expires_at,
        }

    @app.get("/api/members/{member_id}/profile")
    def get_profile(member_id: str, _session: Session = Depends(current_session)):
        doc = profile_doc(engine, engine.member(member_id))
        doc["taxonomy_version"] = engine.taxonomy_version
        return doc

    @app.put("/api/members/{member_id}/profile")
    def update_profile(member_id: str, body: ProfileUpdateBody, session: Session = Depends(current_session)):
        if session.member != member_id:
            raise NotYourProfile("members may only edit their own profile")
        profile = engine.update_identity(
            member_id,
            display_name=body.display_name,
            country=body.country,
            biography=body.biography,
        )
        return profile_doc(engine, profile)

    @app.post("/api/members/{member_id}/memberships", status_code=201)
    def declare_membership(member_id: str, body: MembershipBody, session: Session = Depends(current_session)):
        if session.member != member_id:
            raise NotYourProfile("members may only edit their own profile")
        profile = engine.declare_membership(member_id, body.subject, body.scope)
        return profile_doc(engine, profile)

    @app.delete("/api/members/{member_id}/memberships/{subject_id}")
    def revoke_membership(member_id: str, subject_id: str, session: Session = Depends(current_session)):
        if session.member != member_id:
            raise NotYourProfile("members may only edit their own profile")
        profile = engine.revoke_membership(member_id, subject_id)
        return profile_doc(engine, profile)

    # -- taxonomy --------------------------------------------------------------

    @app.get("/api/taxonomy/roots")
    def taxonomy_roots(_session: Session = Depends(current_session)):
        return {
            "taxonomy_version": engine.taxonomy_version,
            "subjects": [subject_doc(s) for s in engine.roots()],
        }

    @app.get("/api/taxonomy/view")
    def taxonomy_view(scope: str = SCOPE_ALL, session: Session = Depends(current_session)):
        visible = engine.visible_subjects(session.member, scope)
        subjects = sorted(
            (engine.subject(s) for s in visible),
            key=lambda s: (s.level, s.label.casefold(), s.id),
        )
        return {
            "taxonomy_version": engine.taxonomy_version,
            "scope": scope,
            "subjects": [subject_doc(s) for s in subjects],
        }

    @app.get("/api/taxonomy/{subject_id}/children")
    def taxonomy_children(subject_id: str, _session: Session = Depends(current_session)):
        return {
            "taxonomy_version": engine.taxonomy_version,
            "subjects": [subject_doc(s) for s in engine.children(subject_id)],
        }

    @app.get("/api/taxonomy/{subject_id}/path")
    def taxonomy_path(subject_id: str, _session: Session = Depends(current_session)):
        return {
            "taxonomy_version": engine.taxonomy_version,
            "subjects": [subject_doc(s) for s in engine.path(subject_id)],
        }

    @app.post("/api/taxonomy/subjects", status_code=201)
    def add_subject(body: AddSubjectBody, session: Session = Depends(current_session)):
        subject = engine.add_subject(body.label, body.parent, session.member)
        return {"taxonomy_version": engine.taxonomy_version, "subject": subject_doc(subject)}

    # -- resources ---------------------------------------------------------------

    def created_resource_doc(resource_id: str) -> dict:
        doc = resource_summary(engine, resource_id)
        doc["associations"] = [a.to_doc() for a in engine.catalog.associations(resource_id)]
        doc["taxonomy_version"] = engine.taxonomy_version
        return doc

    @app.post("/api/discussions", status_code=201)
    def create_discussion(body: DiscussionBody, session: Session = Depends(current_session)):
        resource = engine.create_discussion(session.member, body.title, body.body, set(body.subjects))
        return created_resource_doc(resource.id)

    @app.post("/api/weblinks", status_code=201)
    def create_weblink(body: WeblinkBody, session: Session = Depends(current_session)):
        resource = engine.create_weblink(session.member, body.title, body.url, set(body.subjects))
        return created_resource_doc(resource.id)

    @app.post("/api/documents", status_code=201)
    def create_document(body: DocumentBody, session: Session = Depends(current_session)):
        try:
            data = base64.b64decode(body.content_base64, validate=True)
        except (binascii.Error, ValueError) as exc:
            raise InvalidAttachment(f"content_base64 does not decode: {exc}") from exc
        resource = engine.create_document(session.member, body.title, data, set(body.subjects))
        return created_resource_doc(resource.id)

    @app.get("/api/resources/{resource_id}")
    def consult(resource_id: str, session: Session = Depends(current_session)):
        return consult_doc(engine, engine.consult(session.member, resource_id))

    @app.put("/api/resources/{resource_id}")
    def edit_body(resource_id: str, body: BodyEdit, session: Session = Depends(current_session)):
        resource = engine.edit_body(session.member, resource_id, body.body)
        return {"taxonomy_version": engine.taxonomy_version, "resource": resource.to_doc()}

    @app.get("/api/resources/{resource_id}/attachment")
    def attachment(resource_id: str, session: Session = Depends(current_session)):
        view = engine.consult(session.member, resource_id)
        if view.resource.attachment_ref is None:
            raise InvalidAttachment(f"resource {resource_id!r} has no attachment")
        data = engine.get_blob(view.resource.attachment_ref)
        return Response(content=data, media_type="application/octet-stream")

    @app.post("/api/resources/{resource_id}/replies", status_code=201)
    def add_reply(resource_id: str, body: ReplyBody, session: Session = Depends(current_session)):
        reply = engine.reply(session.member, resource_id, body.body)
        return {"taxonomy_version": engine.taxonomy_version, "reply": reply.to_doc()}

    @app.post("/api/resources/{resource_id}/subjects", status_code=201)
    def spread(resource_id: str, body: SpreadBody, session: Session = Depends(current_session)):
        association = engine.spread(session.member, resource_id, body.subject)
        return {"taxonomy_version": engine.taxonomy_version, "association": association.to_doc()}

    @app.delete("/api/resources/{resource_id}/subjects/{subject_id}")
    def remove_association(resource_id: str, subject_id: str, session: Session = Depends(current_session)):
        engine.remove_association(session.member, resource_id, subject_id)
        return {
            "taxonomy_version": engine.taxonomy_version,
            "resource": resource_id,
            "removed": subject_id,
        }

    # -- search --------------------------------------------------------------------

    @app.post("/api/search/resources")
    def search_resources(body: SearchBody, session: Session = Depends(current_session)):
        hits = engine.search_resources(session.member, build_query("resources", body))
        return search_response(engine, body, "resources", [resource_hit_doc(engine, h) for h in hits])

    @app.post("/api/search/profiles")
    def search_profiles(body: SearchBody, session: Session = Depends(current_session)):
        hits = engine.search_profiles(session.member, build_query("profiles", body))
        return search_response(engine, body, "profiles", [profile_hit_doc(engine, h) for h in hits])

    # -- admin ------------------------------------------------------------------------

    @app.get("/api/admin/usage")
    def admin_usage(_admin: None = Depends(require_admin)):
        return {"taxonomy_version": engine.taxonomy_version, "subjects": engine.subject_stats()}

    @app.post("/api/admin/prune")
    def admin_prune(body: PruneBody, _admin: None = Depends(require_admin)):
        policy = PrunePolicy(
            min_age_days=body.min_age_days if body.min_age_days is not None else engine.config.prune_min_age_days,
            usage_window_days=body.usage_window_days
            if body.usage_window_days is not None
            else engine.config.prune_usage_window_days,
        )
        deprecated = engine.prune_unused(policy=policy, dry_run=body.dry_run)
        key = "candidates" if body.dry_run else "deprecated"
        return {"taxonomy_version": engine.taxonomy_version, "dry_run": body.dry_run, key: deprecated}

    return app

