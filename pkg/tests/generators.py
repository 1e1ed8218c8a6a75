"""Seeded random state builder used by the oracle-equivalence and property
suites. Everything goes through the public engine API, so generated states
are reachable by construction."""

from __future__ import annotations

import random

from cophub import CartItem, Engine, EngineConfig, SearchQuery
from cophub.errors import CophubError

from conftest import FakeClock

WORDS = (
    "alpha", "bravo", "circuits", "delta", "export", "foundry", "gears",
    "harbor", "index", "joinery", "kilns", "lathes", "metrics", "nozzles",
    "orbits", "presses", "quarries", "rotors", "sensors", "turbines",
)


def random_seed_doc(rng: random.Random, max_subjects: int = 30) -> dict:
    """A random forest of depth <= 4 encoded as a seed document. Labels are
    globally unique so parent label paths resolve unambiguously."""
    count = rng.randint(1, max_subjects)
    roots = rng.randint(1, min(4, count))
    labels: list[str] = []
    parents: dict[str, str | None] = {}
    levels: dict[str, int] = {}
    for i in range(count):
        label = f"{rng.choice(WORDS)}-{i}"
        if i < roots:
            parents[label] = None
            levels[label] = 1
        else:
            parent = rng.choice(labels)
            if levels[parent] >= 4:
                shallow = [l for l in labels if levels[l] < 4]
                parent = rng.choice(shallow)
            parents[label] = parent
            levels[label] = levels[parent] + 1
        labels.append(label)

    def path_of(label: str) -> list[str]:
        chain = []
        current: str | None = label
        while current is not None:
            chain.append(current)
            current = parents[current]
        return list(reversed(chain))

    return {
        "format": "cop-taxonomy-seed/1",
        "subjects": [
            {"label": label, "parent_path": path_of(label)[:-1]} for label in labels
        ],
    }


def build_random_state(
    seed: int,
    *,
    max_subjects: int = 30,
    max_members: int = 10,
    max_resources: int = 50,
    max_associations: int = 120,
    member_added_subjects: int = 0,
) -> tuple[Engine, random.Random]:
    rng = random.Random(seed)
    engine = Engine(clock=FakeClock(start=1_000_000.0 + seed), config=EngineConfig())
    engine.load_seed(random_seed_doc(rng, max_subjects))

    members = [
        engine.register(f"Member {i}", f"member{i}-{seed}@example.org").id
        for i in range(rng.randint(1, max_members))
    ]

    leaves = [s.id for s in engine.taxonomy.active_subjects() if engine.is_cop(s.id)]
    for member in members:
        for _ in range(rng.randint(1, 5)):
            subject = rng.choice(leaves)
            scope = rng.choice(["working_context", "secondary_interests"])
            try:
                engine.declare_membership(member, subject, scope)
            except CophubError:
                pass

    for _ in range(member_added_subjects):
        creator = rng.choice(members)
        parent = rng.choice([s.id for s in engine.taxonomy.active_subjects()])
        try:
            engine.add_subject(f"extra-{rng.randrange(10**6)}", parent, creator)
        except CophubError:
            pass

    resources = []
    for i in range(rng.randint(0, max_resources)):
        author = rng.choice(members)
        declared = sorted(engine.memberships(author, "all"))
        declared = [s for s in declared if engine.is_cop(s)]
        if not declared:
            continue
        tags = rng.sample(declared, k=rng.randint(1, min(3, len(declared))))
        try:
            if rng.random() < 0.15:
                resource = engine.create_weblink(
                    author, f"link {i}", f"https://example.org/{i}", set(tags)
                )
            else:
                resource = engine.create_discussion(
                    author, f"thread {i}", f"body of thread {i}", set(tags)
                )
            resources.append(resource.id)
        except CophubError:
            continue

    association_budget = max_associations - sum(
        len(engine.catalog.associated_subjects(r)) for r in resources
    )
    attempts = 0
    while association_budget > 0 and attempts < 400 and resources:
        attempts += 1
        member = rng.choice(members)
        resource = rng.choice(resources)
        scoped = sorted(engine.visible_subjects(member, "all"))
        if not scoped:
            continue
        subject = rng.choice(scoped)
        try:
            engine.spread(member, resource, subject)
            association_budget -= 1
        except CophubError:
            continue

    for _ in range(rng.randint(0, 8)):
        if not resources:
            break
        member = rng.choice(members)
        resource = rng.choice(resources)
        try:
            if engine.resource(resource).kind == "discussion":
                engine.reply(member, resource, "a follow-up remark")
        except CophubError:
            continue

    return engine, rng


def random_query(engine: Engine, rng: random.Random, member: str, target: str) -> SearchQuery | None:
    """A query that satisfies the scope precondition, or None when the
    member's scoped view is empty and no cart can be built."""
    scope = rng.choice(["working_context", "secondary_interests", "all"])
    scoped = sorted(engine.visible_subjects(member, scope))
    if scoped and rng.random() < 0.9:
        size = rng.randint(1, min(4, len(scoped)))
        chosen = rng.sample(scoped, k=size)
        cart = [CartItem(subject=s, active=rng.random() < 0.8) for s in chosen]
    else:
        cart = []
    return SearchQuery(target=target, cart=cart, scope=scope)
