"""Hypothesis properties for the pure set/normalization algebra."""

import pytest
from hypothesis import given, settings, strategies as st

from conftest import FakeClock

from cophub import CartItem, Engine, SearchQuery
from cophub.fixtures import build_fig3
from cophub.taxonomy import normalize_label


@pytest.fixture(scope="module")
def shared():
    engine = Engine(clock=FakeClock())
    handles = build_fig3(engine)
    return engine, handles


labels = st.text(min_size=1, max_size=30)


@given(labels)
def test_normalize_label_is_idempotent(label):
    assert normalize_label(normalize_label(label)) == normalize_label(label)


@given(labels)
def test_normalize_label_ignores_case_and_padding(label):
    assert normalize_label(f"  {label}  ") == normalize_label(label)
    assert normalize_label(label.upper()) == normalize_label(label)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_fresh_facet_refines_on_fig3(shared, data):
    engine, handles = shared
    scoped = sorted(engine.visible_subjects(handles.tutor1, "all"))
    base = data.draw(st.lists(st.sampled_from(scoped), unique=True, max_size=3))
    roots = {engine.taxonomy.root_of(s) for s in base}
    fresh_candidates = [s for s in scoped if engine.taxonomy.root_of(s) not in roots]
    if not fresh_candidates:
        return
    extra = data.draw(st.sampled_from(fresh_candidates))

    def hits(subjects):
        query = SearchQuery(target="resources", cart=[CartItem(s) for s in subjects])
        return {h.resource for h in engine.search_resources(handles.tutor1, query)}

    assert hits(base + [extra]) <= hits(base)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_membership_visibility_closure(shared, data):
    engine, handles = shared
    member = data.draw(st.sampled_from([handles.tutor1, handles.tutor2, handles.tutor3]))
    scope = data.draw(st.sampled_from(["working_context", "secondary_interests", "all"]))
    view = engine.visible_subjects(member, scope)
    for subject in view:
        assert engine.ancestors(subject) <= view
    assert view <= engine.visible_subjects(member, "all")
