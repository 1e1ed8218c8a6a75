import pytest

import oracle
from generators import build_random_state, random_query

from cophub import CartItem, SearchQuery
from cophub.errors import (
    InvalidQuery,
    InvalidScope,
    MemberNotFound,
    ResourceNotFound,
    SubjectNotFound,
    SubjectOutOfScope,
)


def resources_query(*subjects, scope="all", inactive=()):
    cart = [CartItem(s, active=s not in inactive) for s in subjects]
    return SearchQuery(target="resources", cart=cart, scope=scope)


def profiles_query(*subjects, scope="all"):
    return SearchQuery(target="profiles", cart=[CartItem(s) for s in subjects], scope=scope)


# --- effective subjects and matching -----------------------------------------------

def test_category_tag_inherits_downward(fig3):
    engine, handles = fig3
    effective = engine.effective_subjects(handles.discussion_universities)
    assert {
        handles.subjects["universities"],
        handles.subjects["University A"],
        handles.subjects["University B"],
    } <= effective


def test_leaf_tag_has_no_descendants(fig3):
    engine, handles = fig3
    only = engine.create_discussion(
        handles.tutor1, "maintenance talk", "body", {handles.subjects["maintenance"]}
    )
    assert engine.effective_subjects(only.id) == {handles.subjects["maintenance"]}


@pytest.mark.parametrize("seed", [8, 21, 34])
def test_effective_subjects_equal_brute_force_closure(seed):
    engine, _ = build_random_state(seed)
    state = engine.dump_state()
    for resource in engine.resources():
        assert engine.effective_subjects(resource.id) == oracle.effective_subjects(
            state, resource.id
        )


def test_no_upward_inheritance(fig3):
    engine, handles = fig3
    lone = engine.create_discussion(
        handles.tutor1, "campus life", "body", {handles.subjects["University A"]}
    )
    assert engine.subject_matches(lone.id, handles.subjects["University A"])
    assert not engine.subject_matches(lone.id, handles.subjects["universities"])
    assert engine.subject_matches(handles.discussion_universities, handles.subjects["University B"])


def test_subject_matches_validates_both_sides(fig3):
    engine, handles = fig3
    with pytest.raises(ResourceNotFound):
        engine.subject_matches("r999", handles.subjects["courses"])
    with pytest.raises(SubjectNotFound):
        engine.subject_matches(handles.discussion_collective, "s999")


# --- visibility ----------------------------------------------------------------------

def test_collective_thread_visible_to_both_declaring_tutors(fig3):
    engine, handles = fig3
    assert engine.visible_to(handles.tutor1, handles.discussion_collective)
    assert engine.visible_to(handles.tutor2, handles.discussion_collective)


def test_author_keeps_visibility_after_revoking_everything(fig3):
    engine, handles = fig3
    for subject in sorted(engine.memberships(handles.tutor1, "all")):
        engine.revoke_membership(handles.tutor1, subject)
    assert engine.visible_to(handles.tutor1, handles.discussion_collective)


def test_member_with_no_memberships_sees_only_own_resources(fig3):
    engine, handles = fig3
    fresh = engine.register("Newcomer", "new@example.org")
    for resource in engine.resources():
        assert not engine.visible_to(fresh.id, resource.id)
    empty = engine.search_resources(fresh.id, resources_query())
    assert empty == []


# --- resource search -------------------------------------------------------------------

def test_empty_cart_returns_all_visible_recency_ordered(fig3):
    engine, handles = fig3
    hits = engine.search_resources(handles.tutor2, resources_query())
    state = engine.dump_state()
    expected = oracle.search_resources(state, handles.tutor2, [])
    assert [(h.resource, h.matched_subjects) for h in hits] == expected
    activities = [h.last_activity for h in hits]
    assert activities == sorted(activities, reverse=True)


def test_cross_facet_conjunction_refines(fig3):
    engine, handles = fig3
    collective = handles.subjects["collective activities"]
    maintenance = handles.subjects["maintenance"]
    both_facets = engine.create_discussion(
        handles.tutor1, "maintenance group projects", "body", {collective, maintenance}
    )
    one = engine.search_resources(handles.tutor1, resources_query(collective))
    two = engine.search_resources(handles.tutor1, resources_query(collective, maintenance))
    assert {h.resource for h in two} <= {h.resource for h in one}
    assert {h.resource for h in two} == {both_facets.id}
    state = engine.dump_state()
    expected = oracle.search_resources(
        state, handles.tutor1, [(collective, True), (maintenance, True)]
    )
    assert [(h.resource, h.matched_subjects) for h in two] == expected


def test_within_facet_disjunction_widens(engine):
    # one member declared in both university communities, content in each
    engine.load_seed(
        {
            "format": "cop-taxonomy-seed/1",
            "subjects": [
                {"label": "educational institution"},
                {"label": "universities", "parent_path": ["educational institution"]},
                {"label": "University A", "parent_path": ["educational institution", "universities"]},
                {"label": "University B", "parent_path": ["educational institution", "universities"]},
            ],
        }
    )
    ids = {s.label: s.id for s in engine.taxonomy.active_subjects()}
    roamer = engine.register("Roamer", "roamer@example.org").id
    engine.declare_membership(roamer, ids["University A"], "working_context")
    engine.declare_membership(roamer, ids["University B"], "secondary_interests")
    in_a = engine.create_discussion(roamer, "a-side", "body", {ids["University A"]})
    in_b = engine.create_discussion(roamer, "b-side", "body", {ids["University B"]})

    only_a = engine.search_resources(roamer, resources_query(ids["University A"]))
    both = engine.search_resources(roamer, resources_query(ids["University A"], ids["University B"]))
    assert {h.resource for h in only_a} == {in_a.id}
    assert {h.resource for h in both} == {in_a.id, in_b.id}


def test_inactive_cart_subjects_do_not_constrain(fig3):
    engine, handles = fig3
    collective = handles.subjects["collective activities"]
    courses = handles.subjects["courses"]
    wide = engine.search_resources(handles.tutor2, resources_query())
    toggled = engine.search_resources(
        handles.tutor2, resources_query(collective, courses, inactive={collective, courses})
    )
    assert [h.resource for h in toggled] == [h.resource for h in wide]


def test_cart_scope_enforcement(fig3):
    engine, handles = fig3
    with pytest.raises(SubjectOutOfScope):
        engine.search_resources(
            handles.tutor2, resources_query(handles.subjects["University A"])
        )
    # even an inactive out-of-scope subject is rejected
    with pytest.raises(SubjectOutOfScope):
        engine.search_resources(
            handles.tutor2,
            resources_query(
                handles.subjects["University A"], inactive={handles.subjects["University A"]}
            ),
        )
    # scope filter narrows the allowed cart
    with pytest.raises(SubjectOutOfScope):
        engine.search_resources(
            handles.tutor3,
            resources_query(handles.subjects["collective activities"], scope="working_context"),
        )
    hits = engine.search_resources(
        handles.tutor3, resources_query(handles.subjects["collective activities"], scope="all")
    )
    assert hits  # declared as a secondary interest, so fine under scope=all


def test_query_validation_errors(fig3):
    engine, handles = fig3
    courses = handles.subjects["courses"]
    with pytest.raises(SubjectNotFound):
        engine.search_resources(handles.tutor2, resources_query("s999"))
    with pytest.raises(InvalidQuery):
        engine.search_resources(
            handles.tutor2,
            SearchQuery(target="resources", cart=[CartItem(courses), CartItem(courses)]),
        )
    with pytest.raises(InvalidQuery):
        engine.search_resources(handles.tutor2, profiles_query(courses))
    with pytest.raises(InvalidScope):
        engine.search_resources(handles.tutor2, resources_query(courses, scope="everything"))
    with pytest.raises(MemberNotFound):
        engine.search_resources("m99", resources_query())


def test_search_records_usage_per_active_cart_subject(fig3):
    engine, handles = fig3
    collective = handles.subjects["collective activities"]
    courses = handles.subjects["courses"]
    before = {s: engine.taxonomy.usage_count(s) for s in (collective, courses)}
    engine.search_resources(
        handles.tutor2, resources_query(collective, courses, inactive={courses})
    )
    assert engine.taxonomy.usage_count(collective) == before[collective] + 1
    assert engine.taxonomy.usage_count(courses) == before[courses]
    selects = [e for e in engine.taxonomy.usage_log if e.kind == "search_select"]
    assert selects and selects[-1].member == handles.tutor2


# --- profile search ------------------------------------------------------------------------

def test_profile_search_from_tutor3_finds_collective_peers(fig3):
    engine, handles = fig3
    hits = engine.search_profiles(
        handles.tutor3, profiles_query(handles.subjects["collective activities"])
    )
    assert [h.member for h in hits] == [handles.tutor1, handles.tutor2]


def test_category_cart_finds_members_of_child_communities(fig3):
    engine, handles = fig3
    hits = engine.search_profiles(handles.tutor2, profiles_query(handles.subjects["universities"]))
    assert [h.member for h in hits] == [handles.tutor1, handles.tutor3]
    assert all(handles.subjects["universities"] in h.matched_subjects for h in hits)


def test_empty_cart_profile_search_lists_everyone_else(fig3):
    engine, handles = fig3
    hits = engine.search_profiles(handles.tutor1, profiles_query())
    assert [h.member for h in hits] == [handles.tutor2, handles.tutor3]
    assert all(h.matched_subjects == set() for h in hits)


def test_profile_search_orders_by_match_count(fig3):
    engine, handles = fig3
    # within one facet: Tutor 1 matches both subjects, Tutor 2 only the category
    hits = engine.search_profiles(
        handles.tutor3,
        profiles_query(handles.subjects["University A"], handles.subjects["universities"]),
    )
    assert [(h.member, len(h.matched_subjects)) for h in hits] == [
        (handles.tutor1, 2),
        (handles.tutor2, 1),
    ]
    # equal match counts fall back to display-name order
    hits = engine.search_profiles(
        handles.tutor1, profiles_query(handles.subjects["learning situation"])
    )
    assert [h.member for h in hits] == [handles.tutor2, handles.tutor3]


# --- determinism and oracle equivalence ------------------------------------------------------

def test_identical_query_gives_identical_results(fig3):
    engine, handles = fig3
    query = resources_query(handles.subjects["collective activities"])
    first = [(h.resource, h.matched_subjects) for h in engine.search_resources(handles.tutor1, query)]
    second = [(h.resource, h.matched_subjects) for h in engine.search_resources(handles.tutor1, query)]
    assert first == second


@pytest.mark.parametrize("seed", [12, 29, 55])
def test_search_matches_oracle_on_random_states(seed):
    engine, rng = build_random_state(seed)
    state = engine.dump_state()
    members = [m.id for m in engine.members()]
    for trial in range(20):
        member = rng.choice(members)
        for target in ("resources", "profiles"):
            query = random_query(engine, rng, member, target)
            cart = [(i.subject, i.active) for i in query.cart]
            if target == "resources":
                got = [
                    (h.resource, h.matched_subjects)
                    for h in engine.search_resources(member, query)
                ]
                assert got == oracle.search_resources(state, member, cart)
            else:
                got = [
                    (h.member, h.matched_subjects)
                    for h in engine.search_profiles(member, query)
                ]
                assert got == oracle.search_profiles(state, member, cart)


@pytest.mark.parametrize("seed", [14, 41])
def test_access_soundness_no_invisible_hits(seed):
    engine, rng = build_random_state(seed)
    state = engine.dump_state()
    members = [m.id for m in engine.members()]
    for trial in range(15):
        member = rng.choice(members)
        query = random_query(engine, rng, member, "resources")
        for hit in engine.search_resources(member, query):
            assert oracle.visible_to(state, member, hit.resource)


def test_inheritance_soundness_category_tag_hits_every_descendant(fig3):
    engine, handles = fig3
    searchers = {
        handles.subjects["University A"]: handles.tutor1,
        handles.subjects["University B"]: handles.tutor2,
    }
    for cop, searcher in searchers.items():
        hits = engine.search_resources(searcher, resources_query(cop))
        assert handles.discussion_universities in [h.resource for h in hits]
