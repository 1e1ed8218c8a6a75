"""Canonical three-tutor fixture over the shipped tutoring classification.

Tutor 1 (University A, industrial engineering) monitors a collective
project about maintenance and so belongs to five communities. Tutor 2
(University B) shares the collective-activities community with Tutor 1
and runs courses. Tutor 3 works alongside Tutor 1 (same university, same
curriculum), runs courses like Tutor 2, and follows collective activities
as a secondary interest. Tests and demos build on these exact handles.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Engine
from .seed_io import tutoring_seed_doc

TUTOR1_EMAIL = "tutor1@univ-a.example"
TUTOR2_EMAIL = "tutor2@univ-b.example"
TUTOR3_EMAIL = "tutor3@univ-a.example"


@dataclass
class Fig3Handles:
    subjects: dict[str, str]  # label -> subject id (leaves and categories used below)
    tutor1: str
    tutor2: str
    tutor3: str
    discussion_collective: str  # Tutor 1's "Assessing collective projects"
    discussion_universities: str  # Tutor 1's institution-wide post, spread to "universities"
    discussion_courses: str  # Tutor 2's course-monitoring thread


def subject_ids_by_label(engine: Engine) -> dict[str, str]:
    """Label -> id over the active classification. Labels repeat only across
    parents, and the tutoring seed keeps them globally unique."""
    mapping: dict[str, str] = {}
    for subject in engine.taxonomy.active_subjects():
        mapping[subject.label] = subject.id
    return mapping


def build_fig3(engine: Engine) -> Fig3Handles:
    """Populate an engine (with an empty taxonomy) with the tutoring seed,
    the three tutors, their memberships and a few indexed discussions."""
    engine.load_seed(tutoring_seed_doc())
    ids = subject_ids_by_label(engine)

    tutor1 = engine.register("Tutor 1", TUTOR1_EMAIL, country="France").id
    tutor2 = engine.register("Tutor 2", TUTOR2_EMAIL, country="Canada").id
    tutor3 = engine.register("Tutor 3", TUTOR3_EMAIL, country="France").id

    for label in (
        "collective activities",
        "maintenance",
        "educational projects",
        "industrial engineering",
        "University A",
    ):
        engine.declare_membership(tutor1, ids[label], "working_context")
    for label in ("collective activities", "courses", "University B"):
        engine.declare_membership(tutor2, ids[label], "working_context")
    for label in ("University A", "industrial engineering", "courses"):
        engine.declare_membership(tutor3, ids[label], "working_context")
    engine.declare_membership(tutor3, ids["collective activities"], "secondary_interests")

    discussion_collective = engine.create_discussion(
        tutor1,
        "Assessing collective projects",
        "How do you grade group work when contributions differ so much?",
        {ids["collective activities"], ids["educational projects"]},
    ).id
    discussion_universities = engine.create_discussion(
        tutor1,
        "Tutoring load recognition at universities",
        "Is tutoring time counted in your teaching service? Here it is not.",
        {ids["industrial engineering"]},
    ).id
    # spreading at the category level pushes the thread to every university community
    engine.spread(tutor1, discussion_universities, ids["universities"])

    discussion_courses = engine.create_discussion(
        tutor2,
        "Keeping distance courses engaging",
        "My course forum goes silent after week two. What works for you?",
        {ids["courses"], ids["collective activities"]},
    ).id

    # the broker move: Tutor 3 carries Tutor 1's thread into the courses community
    engine.spread(tutor3, discussion_collective, ids["courses"])
    engine.reply(
        tutor2,
        discussion_collective,
        "We ask each student for a private contribution report.",
    )

    return Fig3Handles(
        subjects=ids,
        tutor1=tutor1,
        tutor2=tutor2,
        tutor3=tutor3,
        discussion_collective=discussion_collective,
        discussion_universities=discussion_universities,
        discussion_courses=discussion_courses,
    )
