"""The search cart: conjunctive across facets, disjunctive within one,
always limited to the searcher's own slice of the platform."""

from cophub import CartItem, Engine, SearchQuery
from cophub.fixtures import build_fig3

engine = Engine()
handles = build_fig3(engine)
ids = handles.subjects


def search(member, *subjects, scope="all", inactive=()):
    query = SearchQuery(
        target="resources",
        cart=[CartItem(s, active=s not in inactive) for s in subjects],
        scope=scope,
    )
    hits = engine.search_resources(member, query)
    return [engine.resource(h.resource).title for h in hits]


print("Empty cart = everything in my communities, newest activity first:")
for title in search(handles.tutor2):
    print(f"  - {title}")

print("\nOne subject refines; the facet keeps its meaning:")
print(f"  cart [courses] -> {search(handles.tutor2, ids['courses'])}")

print("\nA second subject from another facet refines further (AND across facets):")
both = search(handles.tutor2, ids["courses"], ids["collective activities"])
print(f"  cart [courses, collective activities] -> {both}")

print("\nDeselecting a bubble widens again without losing the cart:")
toggled = search(handles.tutor2, ids["courses"], ids["collective activities"],
                 inactive={ids["collective activities"]})
print(f"  same cart, collective deactivated -> {toggled}")

print("\nProfile search uses the same cart. From Tutor 2's seat, the")
print("'universities' category finds everyone declaring any university:")
query = SearchQuery(target="profiles", cart=[CartItem(ids["universities"])])
for hit in engine.search_profiles(handles.tutor2, query):
    profile = engine.member(hit.member)
    matched = ", ".join(engine.subject(s).label for s in sorted(hit.matched_subjects))
    print(f"  - {profile.display_name} (matched via {matched})")

print("\nScope enforcement: Tutor 2 cannot even query University A —")
try:
    search(handles.tutor2, ids["University A"])
except Exception as exc:
    print(f"  {exc}")
