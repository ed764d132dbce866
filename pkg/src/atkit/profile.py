"""The teacher model: typed profile, validation, and the fact mapping.

A profile covers the retained dimensions: skills, per-topic knowledge
levels, behaviours, tool preferences and an optional personality type.
Anything else teachers want recorded goes into free-text ``extensions``.

Profiles persist as facts about the subject ``teacher:<uid>``.  The fact
vocabulary (predicate -> object):

====================  =====================================================
has_skill             skill identifier
knows_level           combined ``<topic>:<level>`` identifier
knows_level_<topic>   level identifier (rule-friendly split form)
behaves               combined ``<aspect>:<style>`` identifier
behaves_<aspect>      style identifier (split form)
perceives             sensory | intuitive
inputs                visual | verbal
reasons               inductive | deductive
processes             active | reflexive
understands           sequential | global
<axis-pred>_strength  balanced | moderate | strong (quiz-derived axes only)
knows_tool            tool identifier
wishes_functionality  functionality identifier
extension             text literal ``<name>=<value>``
====================  =====================================================

Knowledge and behaviour facts are emitted in both the combined and the
split form: the combined form supports generic queries over one
predicate, the split form lets rules bind the level or style alone.
No personal data (name, surname, email, password) ever appears here;
facts reference the teacher only through the opaque uid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .facts import Fact, FactSet, Ident, is_identifier
from .resources import config_path, read_records


class KnowledgeLevel(str, Enum):
    NONE = "none"
    LITTLE = "little"
    WORKING = "working"
    EXPERT = "expert"


LEVEL_ORDER = {
    KnowledgeLevel.NONE: 0,
    KnowledgeLevel.LITTLE: 1,
    KnowledgeLevel.WORKING: 2,
    KnowledgeLevel.EXPERT: 3,
}


class PersonalityAxis(str, Enum):
    PERCEPTION = "perception"
    INPUT = "input"
    REASONING = "reasoning"
    PROCESSING = "processing"
    UNDERSTANDING = "understanding"


class Perception(str, Enum):
    SENSORY = "sensory"
    INTUITIVE = "intuitive"


class InputStyle(str, Enum):
    VISUAL = "visual"
    VERBAL = "verbal"


class Reasoning(str, Enum):
    INDUCTIVE = "inductive"
    DEDUCTIVE = "deductive"


class Processing(str, Enum):
    ACTIVE = "active"
    REFLEXIVE = "reflexive"


class Understanding(str, Enum):
    SEQUENTIAL = "sequential"
    GLOBAL = "global"


class Strength(str, Enum):
    BALANCED = "balanced"
    MODERATE = "moderate"
    STRONG = "strong"


AXIS_POLES: dict[PersonalityAxis, type[Enum]] = {
    PersonalityAxis.PERCEPTION: Perception,
    PersonalityAxis.INPUT: InputStyle,
    PersonalityAxis.REASONING: Reasoning,
    PersonalityAxis.PROCESSING: Processing,
    PersonalityAxis.UNDERSTANDING: Understanding,
}

AXIS_PREDICATES: dict[PersonalityAxis, str] = {
    PersonalityAxis.PERCEPTION: "perceives",
    PersonalityAxis.INPUT: "inputs",
    PersonalityAxis.REASONING: "reasons",
    PersonalityAxis.PROCESSING: "processes",
    PersonalityAxis.UNDERSTANDING: "understands",
}

# The reasoning axis is self-declared, never quiz-scored, so it carries
# no strength annotation.
QUIZ_AXES = (
    PersonalityAxis.PROCESSING,
    PersonalityAxis.PERCEPTION,
    PersonalityAxis.INPUT,
    PersonalityAxis.UNDERSTANDING,
)


@dataclass
class PersonalityType:
    """The five style axes; strengths only for quiz-derived axes."""

    perception: Perception
    input: InputStyle
    reasoning: Reasoning
    processing: Processing
    understanding: Understanding
    strengths: dict[PersonalityAxis, Strength] = field(default_factory=dict)

    def pole(self, axis: PersonalityAxis):
        return getattr(self, axis.value)


@dataclass
class KnowledgeEntry:
    topic: str
    level: KnowledgeLevel


@dataclass
class BehaviourEntry:
    aspect: str
    style: str


@dataclass
class ToolPreference:
    known_tools: list[str] = field(default_factory=list)
    wished_functionalities: list[str] = field(default_factory=list)


@dataclass
class TeacherProfile:
    """One teacher's reified profile; an entirely empty profile is valid."""

    uid: int
    skills: list[str] = field(default_factory=list)
    knowledge: list[KnowledgeEntry] = field(default_factory=list)
    behaviours: list[BehaviourEntry] = field(default_factory=list)
    personality: PersonalityType | None = None
    tools: ToolPreference = field(default_factory=ToolPreference)
    extensions: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        # Canonical list order makes the fact round trip structural:
        # facts are a set, so ordering information cannot survive it.
        if isinstance(self.skills, list):
            self.skills.sort(key=str)
        if isinstance(self.knowledge, list):
            self.knowledge.sort(key=_entry_key)
        if isinstance(self.behaviours, list):
            self.behaviours.sort(key=_entry_key)
        if isinstance(self.tools, ToolPreference):
            if isinstance(self.tools.known_tools, list):
                self.tools.known_tools.sort(key=str)
            if isinstance(self.tools.wished_functionalities, list):
                self.tools.wished_functionalities.sort(key=str)

    def is_empty(self) -> bool:
        return (
            not self.skills
            and not self.knowledge
            and not self.behaviours
            and self.personality is None
            and not self.tools.known_tools
            and not self.tools.wished_functionalities
            and not self.extensions
        )


def _entry_key(entry) -> str:
    if isinstance(entry, KnowledgeEntry):
        return str(entry.topic)
    if isinstance(entry, BehaviourEntry):
        return str(entry.aspect)
    return str(entry)


@dataclass(frozen=True)
class Violation:
    """One broken invariant; names the offending field and the rule."""

    field: str
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"{self.field}: {self.rule} ({self.detail})"


class ProfileError(ValueError):
    """Profile cannot be used: validation or decoding failed."""


class ProfileConflictError(ProfileError):
    """Facts assert two different values where at most one is allowed."""


@dataclass(frozen=True)
class Topic:
    topic_id: str
    label: str


def load_topic_registry(path: str | Path | None = None) -> list[Topic]:
    """Read the shipped topic registry (``topics.txt``), in file order."""
    resolved = config_path("topics.txt", path)
    topics = []
    for lineno, fields in read_records(resolved):
        if len(fields) != 2 or not is_identifier(fields[0]):
            raise ValueError(f"{resolved}:{lineno}: expected 'topic_id | label'")
        topics.append(Topic(fields[0], fields[1]))
    return topics


def _check_identifier(violations, field_name, value, rule="identifier"):
    if not isinstance(value, str) or not is_identifier(value):
        violations.append(Violation(field_name, rule, f"not an identifier: {value!r}"))
        return False
    return True


def _check_no_duplicates(violations, field_name, values, what):
    seen = set()
    for value in values:
        key = str(value)
        if key in seen:
            violations.append(
                Violation(field_name, f"duplicate {what}", f"{key} appears twice")
            )
        seen.add(key)


def validate_profile(profile: TeacherProfile) -> list[Violation]:
    """Report every broken invariant; the empty report means valid.

    Total: tolerates arbitrary field values and reports them as
    violations instead of raising.
    """
    violations: list[Violation] = []
    if not isinstance(profile.uid, int) or isinstance(profile.uid, bool) or profile.uid < 0:
        violations.append(Violation("uid", "numeric identifier", repr(profile.uid)))

    if not isinstance(profile.skills, list):
        violations.append(Violation("skills", "list of identifiers", repr(profile.skills)))
    else:
        for skill in profile.skills:
            _check_identifier(violations, "skills", skill)
        _check_no_duplicates(violations, "skills", profile.skills, "skill")

    if not isinstance(profile.knowledge, list):
        violations.append(Violation("knowledge", "list of entries", repr(profile.knowledge)))
    else:
        topics = []
        for entry in profile.knowledge:
            if not isinstance(entry, KnowledgeEntry):
                violations.append(Violation("knowledge", "entry type", repr(entry)))
                continue
            _check_identifier(violations, "knowledge", entry.topic, "topic identifier")
            if not isinstance(entry.level, KnowledgeLevel):
                violations.append(
                    Violation("knowledge", "level enum", f"{entry.topic}: {entry.level!r}")
                )
            topics.append(entry.topic)
        _check_no_duplicates(violations, "knowledge", topics, "topic")

    if not isinstance(profile.behaviours, list):
        violations.append(Violation("behaviours", "list of entries", repr(profile.behaviours)))
    else:
        aspects = []
        for entry in profile.behaviours:
            if not isinstance(entry, BehaviourEntry):
                violations.append(Violation("behaviours", "entry type", repr(entry)))
                continue
            _check_identifier(violations, "behaviours", entry.aspect, "aspect identifier")
            _check_identifier(violations, "behaviours", entry.style, "style identifier")
            aspects.append(entry.aspect)
        _check_no_duplicates(violations, "behaviours", aspects, "aspect")

    if profile.personality is not None:
        p = profile.personality
        if not isinstance(p, PersonalityType):
            violations.append(Violation("personality", "type", repr(p)))
        else:
            for axis, pole_enum in AXIS_POLES.items():
                if not isinstance(p.pole(axis), pole_enum):
                    violations.append(
                        Violation(
                            f"personality.{axis.value}",
                            "pole enum",
                            repr(p.pole(axis)),
                        )
                    )
            if not isinstance(p.strengths, dict):
                violations.append(Violation("personality.strengths", "mapping", repr(p.strengths)))
            else:
                for axis, strength in p.strengths.items():
                    if axis not in QUIZ_AXES:
                        violations.append(
                            Violation(
                                "personality.strengths",
                                "quiz axes only",
                                f"{axis!r} is not quiz-derived",
                            )
                        )
                    if not isinstance(strength, Strength):
                        violations.append(
                            Violation("personality.strengths", "strength enum", repr(strength))
                        )

    if not isinstance(profile.tools, ToolPreference):
        violations.append(Violation("tools", "type", repr(profile.tools)))
    else:
        for field_name, values in (
            ("tools.known_tools", profile.tools.known_tools),
            ("tools.wished_functionalities", profile.tools.wished_functionalities),
        ):
            if not isinstance(values, list):
                violations.append(Violation(field_name, "list of identifiers", repr(values)))
                continue
            for value in values:
                _check_identifier(violations, field_name, value)
            _check_no_duplicates(violations, field_name, values, "entry")

    if not isinstance(profile.extensions, dict):
        violations.append(Violation("extensions", "mapping", repr(profile.extensions)))
    else:
        for key, value in profile.extensions.items():
            _check_identifier(violations, "extensions", key, "dimension identifier")
            if not isinstance(value, str):
                violations.append(Violation("extensions", "text value", f"{key}: {value!r}"))
    return violations


def default_profile(uid: int = 0, registry: list[Topic] | None = None) -> TeacherProfile:
    """The standard profile: level none for every registry topic, nothing else.

    This is what the system assumes for a teacher who never filled the
    form; the produced device is then the standard one.
    """
    topics = registry if registry is not None else load_topic_registry()
    return TeacherProfile(
        uid=uid,
        knowledge=[KnowledgeEntry(t.topic_id, KnowledgeLevel.NONE) for t in topics],
    )


def teacher_subject(uid: int) -> str:
    return f"teacher:{uid}"


def profile_to_facts(profile: TeacherProfile, registry: list[Topic] | None = None) -> FactSet:
    """Serialize a valid profile into facts about ``teacher:<uid>``.

    An entirely empty profile maps to the standard profile's facts: not
    filling the form and asking for the standard behaviour are the same
    thing, so they must persist identically.
    """
    violations = validate_profile(profile)
    if violations:
        raise ProfileError(f"invalid profile: {violations[0]}")
    if profile.is_empty():
        profile = default_profile(profile.uid, registry)
    subject = teacher_subject(profile.uid)
    facts = []

    def add(predicate: str, obj):
        facts.append(Fact(subject, predicate, obj))

    for skill in profile.skills:
        add("has_skill", Ident(skill))
    for entry in profile.knowledge:
        add("knows_level", Ident(f"{entry.topic}:{entry.level.value}"))
        add(f"knows_level_{entry.topic}", Ident(entry.level.value))
    for entry in profile.behaviours:
        add("behaves", Ident(f"{entry.aspect}:{entry.style}"))
        add(f"behaves_{entry.aspect}", Ident(entry.style))
    if profile.personality is not None:
        for axis, predicate in AXIS_PREDICATES.items():
            add(predicate, Ident(profile.personality.pole(axis).value))
        for axis in QUIZ_AXES:
            strength = profile.personality.strengths.get(axis)
            if strength is not None:
                add(f"{AXIS_PREDICATES[axis]}_strength", Ident(strength.value))
    for tool in profile.tools.known_tools:
        add("knows_tool", Ident(tool))
    for functionality in profile.tools.wished_functionalities:
        add("wishes_functionality", Ident(functionality))
    for name in sorted(profile.extensions):
        add("extension", f"{name}={profile.extensions[name]}")
    return FactSet(facts)


@dataclass
class ProfileDecode:
    """Decoded profile plus the predicates that were ignored."""

    profile: TeacherProfile
    ignored: list[str]


def _ident_name(obj) -> str | None:
    return obj.name if isinstance(obj, Ident) else None


def _split_qualified(combined: str) -> tuple[str, str]:
    head, _, tail = combined.rpartition(":")
    return head, tail


def decode_profile(uid: int, facts: FactSet, registry: list[Topic] | None = None) -> ProfileDecode:
    """Rebuild a profile from facts; inverse of :func:`profile_to_facts`.

    An empty fact set means the teacher never defined a profile and
    yields the standard profile.  Unknown predicates are ignored and
    reported.  Conflicting facts (two levels for one topic, two poles
    for one axis) raise :class:`ProfileConflictError` naming the culprit.
    """
    subject = teacher_subject(uid)
    relevant = [f for f in facts if f.subject == subject]
    if not relevant:
        return ProfileDecode(default_profile(uid, registry), [])

    skills: list[str] = []
    knowledge: dict[str, str] = {}
    behaviours: dict[str, str] = {}
    poles: dict[PersonalityAxis, str] = {}
    strengths: dict[PersonalityAxis, str] = {}
    known_tools: list[str] = []
    wished: list[str] = []
    extensions: dict[str, str] = {}
    ignored: list[str] = []

    predicate_axes = {pred: axis for axis, pred in AXIS_PREDICATES.items()}

    def record(mapping: dict, key, value, what: str):
        if key in mapping and mapping[key] != value:
            raise ProfileConflictError(
                f"conflicting facts for {what} {key}: {mapping[key]} vs {value}"
            )
        mapping[key] = value

    for fact in relevant:
        pred = fact.predicate
        name = _ident_name(fact.obj)
        if pred == "has_skill" and name:
            skills.append(name)
        elif pred == "knows_level" and name:
            topic, level = _split_qualified(name)
            record(knowledge, topic, level, "topic")
        elif pred.startswith("knows_level_") and name:
            record(knowledge, pred[len("knows_level_"):], name, "topic")
        elif pred == "behaves" and name:
            aspect, style = _split_qualified(name)
            record(behaviours, aspect, style, "aspect")
        elif pred.startswith("behaves_") and not pred.endswith("_strength") and name:
            record(behaviours, pred[len("behaves_"):], name, "aspect")
        elif pred in predicate_axes and name:
            record(poles, predicate_axes[pred], name, "axis")
        elif pred.endswith("_strength") and pred[: -len("_strength")] in predicate_axes and name:
            record(strengths, predicate_axes[pred[: -len("_strength")]], name, "axis strength")
        elif pred == "knows_tool" and name:
            known_tools.append(name)
        elif pred == "wishes_functionality" and name:
            wished.append(name)
        elif pred == "extension" and isinstance(fact.obj, str):
            key, sep, value = fact.obj.partition("=")
            if sep:
                record(extensions, key, value, "extension")
            else:
                ignored.append(f"extension without '=': {fact.obj!r}")
        else:
            ignored.append(pred)

    personality = None
    if poles or strengths:
        missing = [axis.value for axis in AXIS_POLES if axis not in poles]
        if missing:
            raise ProfileConflictError(
                f"personality facts incomplete: missing axis {', '.join(missing)}"
            )
        kwargs = {}
        for axis, pole_enum in AXIS_POLES.items():
            try:
                kwargs[axis.value] = pole_enum(poles[axis])
            except ValueError:
                raise ProfileConflictError(
                    f"unknown pole {poles[axis]!r} for axis {axis.value}"
                ) from None
        try:
            strength_map = {axis: Strength(value) for axis, value in strengths.items()}
        except ValueError:
            raise ProfileConflictError("unknown strength value") from None
        personality = PersonalityType(strengths=strength_map, **kwargs)

    def to_level(topic: str, value: str) -> KnowledgeLevel:
        try:
            return KnowledgeLevel(value)
        except ValueError:
            raise ProfileConflictError(
                f"unknown knowledge level {value!r} for topic {topic}"
            ) from None

    profile = TeacherProfile(
        uid=uid,
        skills=sorted(set(skills)),
        knowledge=[KnowledgeEntry(t, to_level(t, lv)) for t, lv in knowledge.items()],
        behaviours=[BehaviourEntry(a, s) for a, s in behaviours.items()],
        personality=personality,
        tools=ToolPreference(
            known_tools=sorted(set(known_tools)),
            wished_functionalities=sorted(set(wished)),
        ),
        extensions=extensions,
    )
    return ProfileDecode(profile, ignored)


def facts_to_profile(uid: int, facts: FactSet, registry: list[Topic] | None = None) -> TeacherProfile:
    """Like :func:`decode_profile` but returns only the profile."""
    return decode_profile(uid, facts, registry).profile
