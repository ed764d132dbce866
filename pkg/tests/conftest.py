from fractions import Fraction

import pytest

from atkit.profile import (
    BehaviourEntry,
    InputStyle,
    KnowledgeEntry,
    KnowledgeLevel,
    Perception,
    PersonalityType,
    Processing,
    Reasoning,
    TeacherProfile,
    ToolPreference,
    Understanding,
    load_topic_registry,
)
from atkit.units import GroupRoster, Resource, TeachingUnit, load_method


def make_jones_profile(uid: int = 42) -> TeacherProfile:
    """The worked-example teacher: coaches and motivates, knows the three
    classic pedagogies, barely knows MAETIC, manages groups directively,
    and self-declares an intuitive/verbal/deductive/active/sequential type."""
    return TeacherProfile(
        uid=uid,
        skills=["coach", "motivate"],
        knowledge=[
            KnowledgeEntry("active_pedagogy", KnowledgeLevel.WORKING),
            KnowledgeEntry("group_pedagogy", KnowledgeLevel.WORKING),
            KnowledgeEntry("project_pedagogy", KnowledgeLevel.WORKING),
            KnowledgeEntry("maetic", KnowledgeLevel.LITTLE),
        ],
        behaviours=[BehaviourEntry("group_management", "directive")],
        personality=PersonalityType(
            perception=Perception.INTUITIVE,
            input=InputStyle.VERBAL,
            reasoning=Reasoning.DEDUCTIVE,
            processing=Processing.ACTIVE,
            understanding=Understanding.SEQUENTIAL,
        ),
        tools=ToolPreference(
            known_tools=["chat", "word_processor", "spreadsheet"],
            wished_functionalities=["data_storage"],
        ),
    )


def student_names(count: int, group: int) -> list[str]:
    return [f"Student g{group}-{i:03d}" for i in range(1, count + 1)]


def make_webprog_unit(unit_id: str = "webprog") -> TeachingUnit:
    """The worked-example unit: 4 groups of 25, the teacher's own group
    split into 5 teams, 14 lecture hours, 26 practical hours, 2 h sessions."""
    roster = [GroupRoster(members=student_names(25, 1), team_count=5)]
    roster += [GroupRoster(members=student_names(25, g)) for g in (2, 3, 4)]
    return TeachingUnit(
        unit_id=unit_id,
        title="Web programming",
        domain_project="A dynamic web site for a real client",
        client_needs="Catalogue browsing and online ordering",
        lecture_hours=Fraction(14),
        practical_hours=Fraction(26),
        session_duration=Fraction(2),
        group_count=4,
        roster=roster,
        resources=[
            Resource("Method handbook", "https://resources.example/maetic-handbook"),
            Resource("Course syllabus", "https://resources.example/webprog-syllabus"),
        ],
        method_id="maetic",
    )


@pytest.fixture
def jones_profile() -> TeacherProfile:
    return make_jones_profile()


@pytest.fixture
def webprog_unit() -> TeachingUnit:
    return make_webprog_unit()


@pytest.fixture(scope="session")
def registry():
    return load_topic_registry()


@pytest.fixture(scope="session")
def maetic_method():
    return load_method("maetic")
