"""Indexing resources at creation, inheritance from categories, and the
broker move: spreading a thread into another community."""

from cophub import Engine
from cophub.fixtures import build_fig3

engine = Engine()
handles = build_fig3(engine)
ids = handles.subjects

print("Tutor 1 wrote 'Tutoring load recognition at universities', indexed under")
print("their own community, then spread it onto the CATEGORY 'universities'.")
effective = engine.effective_subjects(handles.discussion_universities)
print("Communities that now inherit it:")
for subject in sorted(effective):
    print(f"  - {engine.subject(subject).label}")

print("\nSo Tutor 2 — who only declares University B — can read and join it:")
print(f"  visible_to(tutor2) = {engine.visible_to(handles.tutor2, handles.discussion_universities)}")
reply = engine.reply(handles.tutor2, handles.discussion_universities,
                     "Same here: tutoring hours are invisible in Canada too.")
print(f"  Tutor 2 replied at t={reply.created_at:.0f}")

print("\nInheritance is downward only. A thread tagged on the leaf 'University A'")
lone = engine.create_discussion(handles.tutor1, "Campus parking", "where?", {ids["University A"]})
print(f"  matches 'University A'? {engine.subject_matches(lone.id, ids['University A'])}")
print(f"  matches 'universities' (its parent)? {engine.subject_matches(lone.id, ids['universities'])}")

print("\nRegulation stays with the author: Tutor 3 spread Tutor 1's discussion")
print("into 'courses', and only Tutor 1 can take that subject away again.")
try:
    engine.remove_association(handles.tutor3, handles.discussion_collective, ids["courses"])
except Exception as exc:
    print(f"  Tutor 3 removing it: {exc}")
engine.remove_association(handles.tutor1, handles.discussion_collective, ids["courses"])
print("  Tutor 1 removing it: done.")
