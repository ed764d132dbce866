"""Pedagogical scenario computation and student team composition.

Teams: members are sorted and dealt round-robin, so team sizes differ
by at most one and the outcome does not depend on roster order.

Scenario: the practical hours are cut into equal sessions, and sessions
are apportioned to the method's ordered steps by largest remainder over
the normalized step weights, with every step getting at least one
session.  Deliveries fall due in the last session of their step.
Leftover hours that do not fill a whole session stay unscheduled and
are reported, never silently stretched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .units import MethodDefinition, TeachingUnit


class ScenarioError(ValueError):
    """Inputs cannot produce a valid scenario or team partition."""


@dataclass
class Team:
    team_id: str
    group_index: int
    members: list[str]


def compose_teams(group_members: list[str], team_count: int, group_index: int = 1) -> list[Team]:
    """Partition one group into ``team_count`` balanced teams.

    Deterministic: members are sorted lexicographically and dealt
    round-robin, so sizes differ by at most 1 and any permutation of the
    input yields the same teams (``team-1`` .. ``team-<k>``).
    """
    if team_count <= 0:
        raise ScenarioError("team_count must be positive")
    if team_count > len(group_members):
        raise ScenarioError(
            f"cannot split {len(group_members)} members into {team_count} teams"
        )
    if len(set(group_members)) != len(group_members):
        raise ScenarioError("duplicate member names in group")
    teams = [Team(f"team-{i + 1}", group_index, []) for i in range(team_count)]
    for position, member in enumerate(sorted(group_members)):
        teams[position % team_count].members.append(member)
    return teams


class SessionBudget(NamedTuple):
    count: int
    leftover_hours: Fraction


def session_count(practical_hours, session_duration) -> SessionBudget:
    """How many whole sessions fit, and the unscheduled remainder."""
    practical = Fraction(practical_hours)
    duration = Fraction(session_duration)
    if practical <= 0 or duration <= 0:
        raise ScenarioError("hours must be positive")
    if duration > practical:
        raise ScenarioError("session_duration exceeds practical_hours")
    count = int(practical / duration)
    return SessionBudget(count, practical - count * duration)


def apportion(weights: list[Fraction], total: int) -> list[int]:
    """Largest-remainder apportionment of ``total`` with a floor of 1.

    Ties on the fractional part favour earlier entries.  When a weight's
    exact share falls below one session the floor takes over, paid for
    by whichever entry is furthest above its share.
    """
    if not weights or any(w <= 0 for w in weights):
        raise ScenarioError("weights must be positive")
    if total < len(weights):
        raise ScenarioError(
            f"{len(weights)} steps need at least {len(weights)} sessions, "
            f"have {total} (deficit {len(weights) - total})"
        )
    weight_sum = sum(weights)
    shares = [Fraction(total) * w / weight_sum for w in weights]
    alloc = [math.floor(s) for s in shares]
    remainder = total - sum(alloc)
    order = sorted(range(len(weights)), key=lambda i: (-(shares[i] - alloc[i]), i))
    for i in order[:remainder]:
        alloc[i] += 1
    while any(a == 0 for a in alloc):
        zero_index = alloc.index(0)
        donor = max(
            (i for i in range(len(alloc)) if alloc[i] >= 2),
            key=lambda i: (alloc[i] - shares[i], alloc[i], -i),
        )
        alloc[donor] -= 1
        alloc[zero_index] += 1
    return alloc


@dataclass
class Session:
    index: int
    duration: Fraction
    assigned_step: str
    due_deliveries: list[str] = field(default_factory=list)


@dataclass
class Scenario:
    unit_id: str
    sessions: list[Session]
    step_spans: dict[str, tuple[int, int]]
    unscheduled_hours: Fraction = Fraction(0)


def compose_scenario(unit: TeachingUnit, method: MethodDefinition) -> Scenario:
    """Allocate the unit's sessions to the method's ordered steps."""
    if unit.method_id != method.method_id:
        raise ScenarioError(
            f"unit uses method {unit.method_id!r}, definition is {method.method_id!r}"
        )
    budget = session_count(unit.practical_hours, unit.session_duration)
    counts = apportion([Fraction(s.weight) for s in method.steps], budget.count)

    duration = Fraction(unit.session_duration)
    sessions: list[Session] = []
    spans: dict[str, tuple[int, int]] = {}
    next_index = 1
    for step, count in zip(method.steps, counts):
        first = next_index
        for _ in range(count):
            sessions.append(Session(next_index, duration, step.step_id))
            next_index += 1
        last = next_index - 1
        spans[step.step_id] = (first, last)
        sessions[last - 1].due_deliveries = list(step.deliveries)
    return Scenario(unit.unit_id, sessions, spans, budget.leftover_hours)
