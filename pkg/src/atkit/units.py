"""Teaching units and pedagogical method definitions.

A teaching unit captures what one course offering needs from the
generator: the domain project, client needs, hour budget, the rostered
groups (with how many project teams each supervised group splits into)
and the pedagogical resources.  Units persist as facts about the
subject ``unit:<unit_id>``; list-valued fields are stored as JSON
payloads inside text literals so arbitrary names survive the round trip.

Method definition file format (``<method_id>.method``), pipe-separated
records with a leading record type::

    method  <method_id> | <display name>
    step    <step_id> | <name> | <weight> | <delivery>,<delivery>,...
    section <section_id> | principle|example | <modality>=<locator>,...

Steps are ordered; weights are relative shares of the practical time.
Every presentation section must carry a text-modality locator, the
fallback when an adapted modality has no media.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path

from .facts import Fact, FactSet, Ident, is_identifier
from .profile import Violation
from .resources import ConfigError, config_path, read_records

Hours = Fraction


class Modality(str, Enum):
    AUDIO = "audio"
    VIDEO = "video"
    TEXT = "text"


class SectionKind(str, Enum):
    PRINCIPLE = "principle"
    EXAMPLE = "example"


class Ordering(str, Enum):
    DEDUCTIVE = "deductive"  # principles before examples
    INDUCTIVE = "inductive"  # examples before principles


@dataclass
class GroupRoster:
    """One student group; ``team_count`` > 0 marks a group this teacher
    supervises and splits into project teams."""

    members: list[str] = field(default_factory=list)
    team_count: int = 0


@dataclass
class Resource:
    label: str
    locator: str


@dataclass
class TeachingUnit:
    unit_id: str
    title: str
    domain_project: str = ""
    client_needs: str = ""
    lecture_hours: Hours = Fraction(0)
    practical_hours: Hours = Fraction(1)
    session_duration: Hours = Fraction(1)
    group_count: int = 1
    roster: list[GroupRoster] = field(default_factory=lambda: [GroupRoster()])
    resources: list[Resource] = field(default_factory=list)
    method_id: str = "maetic"


@dataclass
class MethodStep:
    step_id: str
    name: str
    weight: Fraction
    deliveries: list[str] = field(default_factory=list)


@dataclass
class PresentationSection:
    section_id: str
    kind: SectionKind
    media: dict[Modality, str] = field(default_factory=dict)


@dataclass
class MethodDefinition:
    method_id: str
    name: str
    steps: list[MethodStep]
    presentation_sections: list[PresentationSection] = field(default_factory=list)


def _as_hours(value) -> Fraction | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    return None


def validate_unit(unit: TeachingUnit) -> list[Violation]:
    """Report broken unit invariants; empty report means usable."""
    violations: list[Violation] = []

    def check(condition: bool, field_name: str, rule: str, detail: str):
        if not condition:
            violations.append(Violation(field_name, rule, detail))

    check(
        isinstance(unit.unit_id, str) and is_identifier(unit.unit_id),
        "unit_id", "identifier", repr(unit.unit_id),
    )
    check(isinstance(unit.title, str) and bool(unit.title.strip()), "title", "non-empty", repr(unit.title))

    lecture = _as_hours(unit.lecture_hours)
    practical = _as_hours(unit.practical_hours)
    session = _as_hours(unit.session_duration)
    check(lecture is not None and lecture >= 0, "lecture_hours", "non-negative hours", repr(unit.lecture_hours))
    check(practical is not None and practical > 0, "practical_hours", "positive hours", repr(unit.practical_hours))
    check(session is not None and session > 0, "session_duration", "positive hours", repr(unit.session_duration))
    if practical is not None and session is not None and practical > 0 and session > 0:
        check(session <= practical, "session_duration", "at most practical_hours",
              f"{session} > {practical}")

    if not isinstance(unit.roster, list) or not all(isinstance(g, GroupRoster) for g in unit.roster):
        violations.append(Violation("roster", "list of groups", repr(unit.roster)))
    else:
        check(
            isinstance(unit.group_count, int) and unit.group_count == len(unit.roster),
            "group_count", "equals number of roster groups",
            f"{unit.group_count!r} != {len(unit.roster)}",
        )
        check(len(unit.roster) >= 1, "roster", "at least one group", "empty roster")
        for index, group in enumerate(unit.roster, start=1):
            label = f"roster[{index}]"
            if not isinstance(group.members, list) or not all(
                isinstance(m, str) and m.strip() for m in group.members
            ):
                violations.append(Violation(label, "member names non-empty", repr(group.members)))
                continue
            if len(set(group.members)) != len(group.members):
                violations.append(Violation(label, "member names unique", "duplicate name"))
            if not isinstance(group.team_count, int) or group.team_count < 0:
                violations.append(Violation(label, "team_count non-negative integer", repr(group.team_count)))
            elif group.team_count > len(group.members):
                violations.append(
                    Violation(label, "team_count at most group size",
                              f"{group.team_count} > {len(group.members)}")
                )

    if not isinstance(unit.resources, list) or not all(isinstance(r, Resource) for r in unit.resources):
        violations.append(Violation("resources", "list of resources", repr(unit.resources)))
    else:
        for index, resource in enumerate(unit.resources, start=1):
            check(
                isinstance(resource.locator, str) and bool(resource.locator.strip()),
                f"resources[{index}]", "locator non-empty", repr(resource.locator),
            )
            check(isinstance(resource.label, str), f"resources[{index}]", "label text", repr(resource.label))

    check(
        isinstance(unit.method_id, str) and is_identifier(unit.method_id),
        "method_id", "identifier", repr(unit.method_id),
    )
    return violations


def validate_method(method: MethodDefinition) -> list[Violation]:
    violations: list[Violation] = []
    if not method.steps:
        violations.append(Violation("steps", "at least one step", "no steps"))
    seen = set()
    for step in method.steps:
        if step.step_id in seen:
            violations.append(Violation("steps", "unique step ids", step.step_id))
        seen.add(step.step_id)
        if step.weight <= 0:
            violations.append(Violation("steps", "positive weight", f"{step.step_id}: {step.weight}"))
    for section in method.presentation_sections:
        if Modality.TEXT not in section.media:
            violations.append(
                Violation("presentation_sections", "text fallback required", section.section_id)
            )
    return violations


class UnitError(ValueError):
    """Unit facts cannot be decoded."""


def unit_subject(unit_id: str) -> str:
    return f"unit:{unit_id}"


def _hours_fact(value: Hours) -> int | Fraction:
    fraction = Fraction(value)
    return int(fraction) if fraction.denominator == 1 else fraction


def unit_to_facts(unit: TeachingUnit) -> FactSet:
    """Serialize a valid unit into facts about ``unit:<unit_id>``."""
    violations = validate_unit(unit)
    if violations:
        raise UnitError(f"invalid unit: {violations[0]}")
    subject = unit_subject(unit.unit_id)
    facts = [
        Fact(subject, "title", unit.title),
        Fact(subject, "domain_project", unit.domain_project),
        Fact(subject, "client_needs", unit.client_needs),
        Fact(subject, "lecture_hours", _hours_fact(unit.lecture_hours)),
        Fact(subject, "practical_hours", _hours_fact(unit.practical_hours)),
        Fact(subject, "session_duration", _hours_fact(unit.session_duration)),
        Fact(subject, "group_count", unit.group_count),
        Fact(subject, "method", Ident(unit.method_id)),
    ]
    for group_index, group in enumerate(unit.roster, start=1):
        facts.append(Fact(subject, "team_count", json.dumps([group_index, group.team_count])))
        for position, name in enumerate(group.members, start=1):
            facts.append(
                Fact(subject, "roster_member", json.dumps([group_index, position, name]))
            )
    for position, resource in enumerate(unit.resources, start=1):
        facts.append(
            Fact(subject, "resource", json.dumps([position, resource.label, resource.locator]))
        )
    return FactSet(facts)


def _decode_json(fact: Fact, shape: tuple[type, ...]) -> list:
    if not isinstance(fact.obj, str):
        raise UnitError(f"{fact.predicate}: expected JSON text payload")
    try:
        payload = json.loads(fact.obj)
    except json.JSONDecodeError as exc:
        raise UnitError(f"{fact.predicate}: bad JSON payload: {exc}") from exc
    if not isinstance(payload, list) or len(payload) != len(shape) or not all(
        isinstance(v, t) for v, t in zip(payload, shape)
    ):
        raise UnitError(f"{fact.predicate}: malformed payload {fact.obj!r}")
    return payload


def facts_to_unit(unit_id: str, facts: FactSet) -> TeachingUnit:
    """Rebuild a unit from its facts; inverse of :func:`unit_to_facts`."""
    subject = unit_subject(unit_id)
    relevant = [f for f in facts if f.subject == subject]
    if not relevant:
        raise UnitError(f"no facts for unit {unit_id}")

    scalars: dict[str, object] = {}
    team_counts: dict[int, int] = {}
    members: dict[tuple[int, int], str] = {}
    resources: dict[int, tuple[str, str]] = {}

    for fact in relevant:
        pred = fact.predicate
        if pred in ("title", "domain_project", "client_needs", "lecture_hours",
                    "practical_hours", "session_duration", "group_count", "method"):
            if pred in scalars and scalars[pred] != fact.obj:
                raise UnitError(f"conflicting facts for {pred}")
            scalars[pred] = fact.obj
        elif pred == "team_count":
            group_index, count = _decode_json(fact, (int, int))
            if team_counts.get(group_index, count) != count:
                raise UnitError(f"conflicting team_count for group {group_index}")
            team_counts[group_index] = count
        elif pred == "roster_member":
            group_index, position, name = _decode_json(fact, (int, int, str))
            key = (group_index, position)
            if members.get(key, name) != name:
                raise UnitError(f"conflicting roster entry {key}")
            members[key] = name
        elif pred == "resource":
            position, label, locator = _decode_json(fact, (int, str, str))
            if resources.get(position, (label, locator)) != (label, locator):
                raise UnitError(f"conflicting resource at position {position}")
            resources[position] = (label, locator)
        # Unknown predicates are ignored: fact files are extensible.

    missing = [
        p for p in ("title", "practical_hours", "session_duration", "group_count", "method")
        if p not in scalars
    ]
    if missing:
        raise UnitError(f"unit {unit_id} facts incomplete: missing {', '.join(missing)}")

    def text(pred: str, default: str = "") -> str:
        value = scalars.get(pred, default)
        if not isinstance(value, str):
            raise UnitError(f"{pred}: expected text literal")
        return value

    def hours(pred: str, default=Fraction(0)) -> Fraction:
        value = scalars.get(pred, default)
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise UnitError(f"{pred}: expected a number")
        return Fraction(value)

    group_count = scalars["group_count"]
    if isinstance(group_count, bool) or not isinstance(group_count, int):
        raise UnitError("group_count: expected an integer")
    method = scalars["method"]
    if not isinstance(method, Ident):
        raise UnitError("method: expected an identifier")

    roster = []
    for group_index in range(1, group_count + 1):
        names = [
            members[key] for key in sorted(k for k in members if k[0] == group_index)
        ]
        roster.append(GroupRoster(members=names, team_count=team_counts.get(group_index, 0)))
    stray = [k for k in members if not 1 <= k[0] <= group_count]
    if stray:
        raise UnitError(f"roster entries outside declared groups: {sorted(stray)}")

    unit = TeachingUnit(
        unit_id=unit_id,
        title=text("title"),
        domain_project=text("domain_project"),
        client_needs=text("client_needs"),
        lecture_hours=hours("lecture_hours"),
        practical_hours=hours("practical_hours", Fraction(1)),
        session_duration=hours("session_duration", Fraction(1)),
        group_count=group_count,
        roster=roster,
        resources=[Resource(*resources[i]) for i in sorted(resources)],
        method_id=method.name,
    )
    violations = validate_unit(unit)
    if violations:
        raise UnitError(f"decoded unit invalid: {violations[0]}")
    return unit


def load_method(method_id: str, path: str | Path | None = None) -> MethodDefinition:
    """Load ``<method_id>.method`` from the configuration directory."""
    resolved = config_path(f"{method_id}.method", path)
    name = method_id
    declared_id = method_id
    steps: list[MethodStep] = []
    sections: list[PresentationSection] = []
    for lineno, fields in read_records(resolved):
        kind, first = (fields[0].split(None, 1) + [""])[:2]
        fields = [first] + fields[1:]
        where = f"{resolved}:{lineno}"
        if kind == "method" and len(fields) == 2:
            declared_id, name = fields
        elif kind == "step" and len(fields) == 4:
            step_id, step_name, weight_text, deliveries_text = fields
            try:
                weight = Fraction(weight_text)
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"{where}: bad step weight {weight_text!r}") from None
            deliveries = [d.strip() for d in deliveries_text.split(",") if d.strip()]
            steps.append(MethodStep(step_id, step_name, weight, deliveries))
        elif kind == "section" and len(fields) == 3:
            section_id, kind_text, media_text = fields
            try:
                section_kind = SectionKind(kind_text)
            except ValueError:
                raise ConfigError(f"{where}: section kind must be principle or example") from None
            media: dict[Modality, str] = {}
            for item in media_text.split(","):
                item = item.strip()
                if not item:
                    continue
                modality_text, sep, locator = item.partition("=")
                if not sep or not locator:
                    raise ConfigError(f"{where}: bad media entry {item!r}")
                try:
                    modality = Modality(modality_text.strip())
                except ValueError:
                    raise ConfigError(f"{where}: unknown modality {modality_text!r}") from None
                media[modality] = locator.strip()
            sections.append(PresentationSection(section_id, section_kind, media))
        else:
            raise ConfigError(f"{where}: unrecognized record {kind!r}")
    method = MethodDefinition(declared_id, name, steps, sections)
    violations = validate_method(method)
    if violations:
        raise ConfigError(f"{resolved}: {violations[0]}")
    return method
