"""Tour of the subject classification: load the tutoring seed, walk the
forest, and grow it the way members do."""

from cophub import Engine, tutoring_seed_doc

engine = Engine()
engine.load_seed(tutoring_seed_doc())

print("Level-1 categories (the facets of tutoring practice):")
for root in engine.roots():
    print(f"  {root.id}  {root.label}")

ids = {s.label: s.id for s in engine.taxonomy.active_subjects()}

print("\nDrilling into 'educational institution':")
for child in engine.children(ids["educational institution"]):
    grandchildren = [g.label for g in engine.children(child.id)]
    print(f"  {child.label} -> {grandchildren or 'leaf community'}")

print("\nNavigation path of 'University A':")
print("  " + " / ".join(s.label for s in engine.path(ids["University A"])))

print("\nLeaves are communities, internal nodes are categories:")
for label in ("University A", "universities", "maintenance"):
    kind = "community (CoP)" if engine.is_cop(ids[label]) else "category"
    print(f"  {label:<14} -> {kind}")

# members may extend the classification wherever they work
tutor = engine.register("Demo Tutor", "demo@example.org")
new_leaf = engine.add_subject("statistics", ids["discipline"], tutor.id)
print(f"\n{tutor.display_name} added '{new_leaf.label}' at level {new_leaf.level}; "
      f"taxonomy version is now {engine.taxonomy_version}")

deep = engine.add_subject("robotics group", ids["University A"], tutor.id)
print(f"Added '{deep.label}' at level {deep.level} (the maximum).")
try:
    engine.add_subject("sub-group", deep.id, tutor.id)
except Exception as exc:
    print(f"A fifth level is rejected: {exc}")
