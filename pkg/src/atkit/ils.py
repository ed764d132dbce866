"""Scoring of the 44-item two-choice learning-style questionnaire.

Four style axes are measured by 11 items each: processing
(active/reflexive), perception (sensory/intuitive), input
(visual/verbal) and understanding (sequential/global).  Each item
declares which pole an "a" answer favours; an axis score is the signed
tally of its 11 answers, oriented so that positive means the axis's
first pole (active, sensory, visual, sequential).  With 11 items a
complete sheet always yields an odd value in [-11, +11], which the
bands 1-3 / 5-7 / 9-11 turn into balanced / moderate / strong.

The fifth profile axis, reasoning (inductive/deductive), is not covered
by the instrument and stays self-declared.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .profile import (
    AXIS_POLES,
    QUIZ_AXES,
    InputStyle,
    Perception,
    PersonalityAxis,
    PersonalityType,
    Processing,
    Reasoning,
    Strength,
    Understanding,
)
from .resources import ConfigError, config_path, read_records

ITEM_COUNT = 44
ITEMS_PER_AXIS = 11

# Positive score direction per axis.
POSITIVE_POLES = {
    PersonalityAxis.PROCESSING: Processing.ACTIVE,
    PersonalityAxis.PERCEPTION: Perception.SENSORY,
    PersonalityAxis.INPUT: InputStyle.VISUAL,
    PersonalityAxis.UNDERSTANDING: Understanding.SEQUENTIAL,
}


class Choice(str, Enum):
    A = "a"
    B = "b"


class IlsError(ValueError):
    """Questionnaire definition or answer sheet cannot be used."""


class IncompleteSheetError(IlsError):
    """Sheet lacks answers; carries the missing item ids."""

    def __init__(self, missing: list[int]):
        super().__init__(f"incomplete sheet, missing items: {missing}")
        self.missing = missing


@dataclass(frozen=True)
class QuestionnaireItem:
    item_id: int
    axis: PersonalityAxis
    pole_of_a: Enum
    prompt: str


@dataclass
class QuestionnaireDefinition:
    items: list[QuestionnaireItem]

    def __post_init__(self):
        ids = [item.item_id for item in self.items]
        if sorted(ids) != list(range(1, ITEM_COUNT + 1)):
            raise IlsError(f"item ids must be exactly 1..{ITEM_COUNT}")
        per_axis = {axis: 0 for axis in QUIZ_AXES}
        for item in self.items:
            if item.axis not in per_axis:
                raise IlsError(f"item {item.item_id}: axis {item.axis} is not quiz-scored")
            if not isinstance(item.pole_of_a, AXIS_POLES[item.axis]):
                raise IlsError(
                    f"item {item.item_id}: pole {item.pole_of_a!r} does not belong to {item.axis.value}"
                )
            per_axis[item.axis] += 1
        bad = {a.value: n for a, n in per_axis.items() if n != ITEMS_PER_AXIS}
        if bad:
            raise IlsError(f"expected {ITEMS_PER_AXIS} items per axis, got {bad}")

    def item(self, item_id: int) -> QuestionnaireItem:
        return next(i for i in self.items if i.item_id == item_id)


@dataclass
class AnswerSheet:
    answers: dict[int, Choice]

    def missing_items(self) -> list[int]:
        return [i for i in range(1, ITEM_COUNT + 1) if i not in self.answers]

    def is_complete(self) -> bool:
        return not self.missing_items()

    def flipped(self) -> "AnswerSheet":
        flip = {Choice.A: Choice.B, Choice.B: Choice.A}
        return AnswerSheet({i: flip[c] for i, c in self.answers.items()})


@dataclass(frozen=True)
class AxisScore:
    axis: PersonalityAxis
    value: int
    strength: Strength


def strength_for(value: int) -> Strength:
    magnitude = abs(value)
    if magnitude % 2 == 0:
        raise IlsError(f"axis value must be odd for a complete sheet, got {value}")
    if magnitude <= 3:
        return Strength.BALANCED
    if magnitude <= 7:
        return Strength.MODERATE
    return Strength.STRONG


def load_questionnaire(path: str | Path | None = None) -> QuestionnaireDefinition:
    """Read the shipped questionnaire (``ils-44.txt``)."""
    resolved = config_path("ils-44.txt", path)
    items = []
    for lineno, fields in read_records(resolved):
        if len(fields) != 4:
            raise ConfigError(f"{resolved}:{lineno}: expected 'id | axis | pole_of_a | prompt'")
        id_text, axis_text, pole_text, prompt = fields
        try:
            axis = PersonalityAxis(axis_text)
            pole = AXIS_POLES[axis](pole_text)
            items.append(QuestionnaireItem(int(id_text), axis, pole, prompt))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"{resolved}:{lineno}: {exc}") from None
    try:
        return QuestionnaireDefinition(items)
    except IlsError as exc:
        raise ConfigError(f"{resolved}: {exc}") from None


def score(sheet: AnswerSheet, definition: QuestionnaireDefinition) -> list[AxisScore]:
    """Score a complete sheet into four axis scores.

    Each answer moves its axis by one: towards the item's ``pole_of_a``
    for an "a", towards the opposite pole for a "b".  Scores come back
    in the fixed axis order processing, perception, input, understanding.
    """
    missing = sheet.missing_items()
    if missing:
        raise IncompleteSheetError(missing)
    values = {axis: 0 for axis in QUIZ_AXES}
    for item in definition.items:
        choice = sheet.answers[item.item_id]
        towards_a = 1 if item.pole_of_a == POSITIVE_POLES[item.axis] else -1
        values[item.axis] += towards_a if choice is Choice.A else -towards_a
    return [AxisScore(axis, values[axis], strength_for(values[axis])) for axis in QUIZ_AXES]


def classify(scores: list[AxisScore], declared_reasoning: Reasoning) -> PersonalityType:
    """Turn axis scores plus the self-declared reasoning pole into a type.

    Positive values map to the axis's positive pole, negative to the
    other; a zero value cannot come from a complete sheet and is
    rejected.  Strengths are kept for the four quiz axes only.
    """
    by_axis = {s.axis: s for s in scores}
    for axis in QUIZ_AXES:
        if axis not in by_axis:
            raise IlsError(f"missing axis score: {axis.value}")
    poles = {}
    strengths = {}
    for axis in QUIZ_AXES:
        axis_score = by_axis[axis]
        if axis_score.value == 0:
            raise IlsError(f"axis {axis.value} scored 0; sheet cannot have been complete")
        positive = POSITIVE_POLES[axis]
        if axis_score.value > 0:
            poles[axis] = positive
        else:
            pole_enum = AXIS_POLES[axis]
            poles[axis] = next(p for p in pole_enum if p is not positive)
        strengths[axis] = axis_score.strength
    return PersonalityType(
        perception=poles[PersonalityAxis.PERCEPTION],
        input=poles[PersonalityAxis.INPUT],
        reasoning=declared_reasoning,
        processing=poles[PersonalityAxis.PROCESSING],
        understanding=poles[PersonalityAxis.UNDERSTANDING],
        strengths=strengths,
    )
