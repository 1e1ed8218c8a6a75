"""Usage-driven evolution: every use of a subject is recorded, and
member-added subjects that gather no use, no tags and no members are
eventually deprecated."""

import time

from cophub import Engine, PrunePolicy
from cophub.fixtures import build_fig3


class Clock:
    """Manual clock so the demo can fast-forward months in an instant."""

    def __init__(self):
        self.now = time.time()

    def __call__(self):
        return self.now


clock = Clock()
engine = Engine(clock=clock)
handles = build_fig3(engine)

kept = engine.add_subject("assessment grids", handles.subjects["discipline"], handles.tutor1)
dead = engine.add_subject("fax etiquette", handles.subjects["discipline"], handles.tutor1)
print(f"Tutor 1 added two subjects: '{kept.label}' and '{dead.label}'")

engine.declare_membership(handles.tutor1, kept.id, "working_context")
engine.create_discussion(handles.tutor1, "Sharing my grid", "attached below", {kept.id})
print(f"'{kept.label}' got declared and used; '{dead.label}' got nothing.")

clock.now += 120 * 86400
print("\n...120 days pass...\n")

candidates = engine.prune_unused(policy=PrunePolicy(min_age_days=90), dry_run=True)
print("Dry run lists the removal candidates without touching anything:")
for subject_id in candidates:
    print(f"  - {engine.subject(subject_id).label}")

deprecated = engine.prune_unused(policy=PrunePolicy(min_age_days=90))
print(f"\nPruned: {[engine.subject(s).label for s in deprecated]}")
print(f"'{kept.label}' is still {engine.subject(kept.id).status}; "
      f"'{dead.label}' is now {engine.subject(dead.id).status}.")
print("A second prune with the same inputs finds nothing:",
      engine.prune_unused(policy=PrunePolicy(min_age_days=90)))

print("\nPer-subject bookkeeping an operator would look at:")
for row in engine.subject_stats():
    if row["created_by"] != "SEED":
        print(f"  {row['label']:<18} status={row['status']:<10} "
              f"uses={sum(row['usage'].values())} tags={row['association_count']} "
              f"members={row['member_count']}")
