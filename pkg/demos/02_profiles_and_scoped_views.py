"""Profiles define community memberships; memberships define what each
member sees. Reproduces the three-tutor constellation."""

from cophub import Engine
from cophub.fixtures import build_fig3

engine = Engine()
handles = build_fig3(engine)


def show(member_id, scope):
    view = engine.visible_subjects(member_id, scope)
    labels = sorted(engine.subject(s).label for s in view)
    name = engine.member(member_id).display_name
    print(f"  {name}, scope={scope}: {', '.join(labels) or '(nothing)'}")


print("Tutor 1 works at University A (industrial engineering) and monitors a")
print("collective maintenance project, so they belong to five communities:")
for subject in sorted(engine.memberships(handles.tutor1, "working_context")):
    print(f"  - {engine.subject(subject).label}")

print("\nThe classification each tutor sees is the sub-forest spanning their")
print("declared communities:")
show(handles.tutor1, "working_context")
show(handles.tutor3, "working_context")
show(handles.tutor3, "secondary_interests")
show(handles.tutor3, "all")

print("\nNote what is absent: University B never appears in Tutor 1's view.")
print("Switching the filter from working context to secondary interests is how")
print("a member widens their horizon without losing focus in daily practice.")

# the two sets stay disjoint; a community cannot be both daily practice and a hobby
try:
    engine.declare_membership(handles.tutor1, handles.subjects["maintenance"], "secondary_interests")
except Exception as exc:
    print(f"\nDisjointness is enforced: {exc}")
