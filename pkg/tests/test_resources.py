import pytest

import oracle
from generators import build_random_state

from cophub import CartItem, SearchQuery
from cophub.errors import (
    AlreadyAssociated,
    AssociationNotFound,
    EmptyBody,
    EmptySubjects,
    EmptyTitle,
    InvalidAttachment,
    InvalidUrl,
    LastAssociation,
    NotACoP,
    NotADiscussion,
    NotAuthor,
    NotVisible,
    NotYourCoP,
    ResourceNotFound,
    SubjectOutOfScope,
)


# --- creation -----------------------------------------------------------------

def test_fig3_discussion_carries_two_authored_associations(fig3):
    engine, handles = fig3
    associations = engine.catalog.associations(handles.discussion_collective)
    authored = [a for a in associations if a.origin == "authored"]
    assert len(authored) == 2
    assert {a.subject for a in authored} == {
        handles.subjects["collective activities"],
        handles.subjects["educational projects"],
    }
    assert all(a.associated_by == handles.tutor1 for a in authored)


def test_creation_requires_subjects(fig3):
    engine, handles = fig3
    with pytest.raises(EmptySubjects):
        engine.create_discussion(handles.tutor1, "untagged", "body", set())


def test_creation_rejects_categories(fig3):
    engine, handles = fig3
    with pytest.raises(NotACoP):
        engine.create_discussion(
            handles.tutor1, "too broad", "body", {handles.subjects["discipline"]}
        )


def test_tutor2_cannot_tag_university_a(fig3):
    engine, handles = fig3
    with pytest.raises(NotYourCoP):
        engine.create_discussion(
            handles.tutor2, "inside news", "body", {handles.subjects["University A"]}
        )


def test_creation_validation_details(fig3):
    engine, handles = fig3
    cop = handles.subjects["courses"]
    with pytest.raises(EmptyTitle):
        engine.create_discussion(handles.tutor2, "  ", "body", {cop})
    with pytest.raises(EmptyBody):
        engine.create_discussion(handles.tutor2, "title", "  ", {cop})
    with pytest.raises(InvalidUrl):
        engine.create_weblink(handles.tutor2, "title", "ftp://example.org", {cop})
    with pytest.raises(InvalidAttachment):
        engine.create_document(handles.tutor2, "title", b"", {cop})


def test_weblink_and_document_kinds(fig3):
    engine, handles = fig3
    cop = handles.subjects["courses"]
    link = engine.create_weblink(handles.tutor2, "scenario bank", "https://example.org/bank", {cop})
    assert link.kind == "weblink" and link.url == "https://example.org/bank"
    payload = b"%PDF-1.4 fake syllabus"
    document = engine.create_document(handles.tutor2, "syllabus", payload, {cop})
    assert document.kind == "document"
    assert engine.get_blob(document.attachment_ref) == payload
    with pytest.raises(NotADiscussion):
        engine.reply(handles.tutor2, link.id, "nice link")


# --- replies --------------------------------------------------------------------

def test_member_of_tagged_community_can_reply(fig3):
    engine, handles = fig3
    before = len(engine.catalog.replies(handles.discussion_collective))
    engine.reply(handles.tutor2, handles.discussion_collective, "we use peer review")
    assert len(engine.catalog.replies(handles.discussion_collective)) == before + 1


def test_outsider_cannot_reply(fig3):
    engine, handles = fig3
    private = engine.create_discussion(
        handles.tutor1, "maintenance only", "body", {handles.subjects["maintenance"]}
    )
    with pytest.raises(NotVisible):
        engine.reply(handles.tutor3, private.id, "let me in")
    with pytest.raises(EmptyBody):
        engine.reply(handles.tutor1, private.id, "   ")
    with pytest.raises(ResourceNotFound):
        engine.reply(handles.tutor1, "r999", "hello")


def test_reply_bumps_ranking_recency(fig3):
    engine, handles = fig3
    query = SearchQuery(target="resources", cart=[], scope="all")
    order_before = [h.resource for h in engine.search_resources(handles.tutor2, query)]
    oldest = order_before[-1]
    engine.reply(handles.tutor2, oldest, "bump")
    order_after = [h.resource for h in engine.search_resources(handles.tutor2, query)]
    assert order_after[0] == oldest
    state = engine.dump_state()
    for hit in engine.search_resources(handles.tutor2, query):
        assert hit.last_activity == oracle.last_activity(state, hit.resource)


# --- spreading --------------------------------------------------------------------

def test_tutor3_spreads_discussion_into_courses(fig3):
    engine, handles = fig3
    # done by the fixture; the thread now matches course searches for Tutor 2
    association = engine.catalog.association(
        handles.discussion_collective, handles.subjects["courses"]
    )
    assert association is not None
    assert association.origin == "spread" and association.associated_by == handles.tutor3
    hits = engine.search_resources(
        handles.tutor2,
        SearchQuery(target="resources", cart=[CartItem(handles.subjects["courses"])]),
    )
    assert handles.discussion_collective in [h.resource for h in hits]


def test_spread_to_category_reaches_all_child_communities(fig3):
    engine, handles = fig3
    effective = engine.effective_subjects(handles.discussion_universities)
    assert {
        handles.subjects["universities"],
        handles.subjects["University A"],
        handles.subjects["University B"],
    } <= effective


def test_spread_twice_rejected(fig3):
    engine, handles = fig3
    with pytest.raises(AlreadyAssociated):
        engine.spread(handles.tutor3, handles.discussion_collective, handles.subjects["courses"])


def test_spread_requires_visibility_and_scope(fig3):
    engine, handles = fig3
    maintenance_only = engine.create_discussion(
        handles.tutor1, "maintenance boards", "body", {handles.subjects["maintenance"]}
    )
    with pytest.raises(NotVisible):
        engine.spread(handles.tutor2, maintenance_only.id, handles.subjects["courses"])
    # Tutor 2 sees the collective thread but maintenance is outside their view
    with pytest.raises(SubjectOutOfScope):
        engine.spread(handles.tutor2, handles.discussion_collective, handles.subjects["maintenance"])


def test_spread_audience_only_grows(fig3):
    engine, handles = fig3
    resource = engine.create_discussion(
        handles.tutor1, "project grading", "body", {handles.subjects["educational projects"]}
    )
    members = [m.id for m in engine.members()]
    before = {m for m in members if engine.visible_to(m, resource.id)}
    engine.spread(handles.tutor1, resource.id, handles.subjects["collective activities"])
    after = {m for m in members if engine.visible_to(m, resource.id)}
    assert before <= after and handles.tutor2 in after - before


# --- regulation ---------------------------------------------------------------------

def test_author_may_remove_spread_association(fig3):
    engine, handles = fig3
    engine.remove_association(
        handles.tutor1, handles.discussion_collective, handles.subjects["courses"]
    )
    assert engine.catalog.association(
        handles.discussion_collective, handles.subjects["courses"]
    ) is None
    # the spreader may not: regulation is the author's alone
    with pytest.raises(NotAuthor):
        engine.remove_association(
            handles.tutor3,
            handles.discussion_collective,
            handles.subjects["collective activities"],
        )


def test_non_author_cannot_remove(fig3):
    engine, handles = fig3
    with pytest.raises(NotAuthor):
        engine.remove_association(
            handles.tutor2, handles.discussion_collective, handles.subjects["courses"]
        )


def test_last_association_cannot_be_removed(fig3):
    engine, handles = fig3
    only = engine.create_discussion(
        handles.tutor1, "single tag", "body", {handles.subjects["maintenance"]}
    )
    with pytest.raises(LastAssociation):
        engine.remove_association(handles.tutor1, only.id, handles.subjects["maintenance"])
    with pytest.raises(AssociationNotFound):
        engine.remove_association(handles.tutor1, only.id, handles.subjects["courses"])


def test_removal_audit_records_only_authors(fig3):
    engine, handles = fig3
    engine.remove_association(
        handles.tutor1, handles.discussion_collective, handles.subjects["courses"]
    )
    assert engine.catalog.removal_audit
    for record in engine.catalog.removal_audit:
        assert record["actor"] == engine.resource(record["resource"]).author


# --- consultation ----------------------------------------------------------------------

def test_author_consults_own_thread(fig3):
    engine, handles = fig3
    view = engine.consult(handles.tutor1, handles.discussion_collective)
    assert view.resource.id == handles.discussion_collective
    assert len(view.replies) == 1
    assert len(view.associations) == 3


def test_consult_records_usage_on_each_associated_subject(fig3):
    engine, handles = fig3
    subjects = sorted(engine.catalog.associated_subjects(handles.discussion_collective))
    before = {s: engine.taxonomy.usage_count(s) for s in subjects}
    engine.consult(handles.tutor2, handles.discussion_collective)
    for s in subjects:
        assert engine.taxonomy.usage_count(s) == before[s] + 1
    consults = [e for e in engine.taxonomy.usage_log if e.kind == "consult" and e.member == handles.tutor2]
    assert {e.subject for e in consults} == set(subjects)


def test_outsider_cannot_consult(fig3):
    engine, handles = fig3
    private = engine.create_discussion(
        handles.tutor1, "maintenance only", "body", {handles.subjects["maintenance"]}
    )
    with pytest.raises(NotVisible):
        engine.consult(handles.tutor2, private.id)


# --- structural invariants ----------------------------------------------------------------

@pytest.mark.parametrize("seed", [6, 17])
def test_every_resource_keeps_at_least_one_association(seed):
    engine, rng = build_random_state(seed)
    # random removal attempts by random members; the guards must hold the line
    members = [m.id for m in engine.members()]
    for resource in engine.resources():
        for subject in sorted(engine.catalog.associated_subjects(resource.id)):
            actor = rng.choice(members)
            try:
                engine.remove_association(actor, resource.id, subject)
            except Exception:
                pass
    for resource in engine.resources():
        assert engine.catalog.associated_subjects(resource.id)


def test_author_may_edit_own_body(fig3):
    engine, handles = fig3
    before_activity = engine.catalog.last_activity(handles.discussion_collective)
    edited = engine.edit_body(handles.tutor1, handles.discussion_collective, "reworded question")
    assert edited.body == "reworded question"
    # edits do not bump ranking recency; replies and tags do
    assert engine.catalog.last_activity(handles.discussion_collective) == before_activity
    with pytest.raises(NotAuthor):
        engine.edit_body(handles.tutor2, handles.discussion_collective, "hijack")
    with pytest.raises(EmptyBody):
        engine.edit_body(handles.tutor1, handles.discussion_collective, "  ")
    link = engine.create_weblink(
        handles.tutor1, "bookmark", "https://example.org", {handles.subjects["maintenance"]}
    )
    with pytest.raises(NotADiscussion):
        engine.edit_body(handles.tutor1, link.id, "not a message")


def test_operator_deletion_removes_whole_thread(fig3):
    engine, handles = fig3
    target = handles.discussion_collective
    assert engine.catalog.replies(target)
    engine.delete_resource(target)
    with pytest.raises(ResourceNotFound):
        engine.resource(target)
    assert engine.catalog.replies(target) == []
    assert engine.catalog.associated_subjects(target) == set()
    # remaining state is still snapshot-clean
    from cophub.store import verify_integrity

    verify_integrity(engine.dump_state())


def test_authored_provenance_is_exactly_the_creation_tags(fig3):
    engine, handles = fig3
    for resource in engine.resources():
        for association in engine.catalog.associations(resource.id):
            if association.origin == "authored":
                assert association.associated_by == resource.author
                assert association.associated_at == resource.created_at
            else:
                assert association.associated_at > resource.created_at
