import random
from fractions import Fraction

import pytest

from atkit.scenario import (
    ScenarioError,
    SessionBudget,
    apportion,
    compose_scenario,
    compose_teams,
    session_count,
)
from atkit.units import MethodDefinition, MethodStep

from conftest import student_names


def equal_weight_method(step_count: int, deliveries=None) -> MethodDefinition:
    steps = [
        MethodStep(f"s{i}", f"Step {i}", Fraction(1), deliveries or [f"d{i}"])
        for i in range(1, step_count + 1)
    ]
    return MethodDefinition("maetic", "M", steps)


class TestComposeTeams:
    def test_twenty_members_five_teams_of_four(self):
        teams = compose_teams(student_names(20, 1), 5)
        assert [len(t.members) for t in teams] == [4, 4, 4, 4, 4]

    def test_twentytwo_members_sizes_5_5_4_4_4(self):
        teams = compose_teams(student_names(22, 1), 5)
        assert [len(t.members) for t in teams] == [5, 5, 4, 4, 4]

    def test_target_group_of_25_gives_five_teams_of_five(self):
        teams = compose_teams(student_names(25, 1), 5)
        assert [len(t.members) for t in teams] == [5, 5, 5, 5, 5]
        assert [t.team_id for t in teams] == [f"team-{i}" for i in range(1, 6)]

    def test_partition_properties_randomized(self):
        rng = random.Random(17)
        for _ in range(50):
            size = rng.randint(1, 200)
            members = [f"m{i:03d}" for i in range(size)]
            rng.shuffle(members)
            k = rng.randint(1, size)
            teams = compose_teams(members, k)
            combined = [m for t in teams for m in t.members]
            assert sorted(combined) == sorted(members)
            sizes = [len(t.members) for t in teams]
            assert max(sizes) - min(sizes) <= 1

    def test_permutation_invariance(self):
        members = student_names(13, 2)
        shuffled = members[::-1]
        direct = compose_teams(members, 4, group_index=2)
        reversed_in = compose_teams(shuffled, 4, group_index=2)
        assert direct == reversed_in

    def test_zero_teams_rejected(self):
        with pytest.raises(ScenarioError):
            compose_teams(["a"], 0)

    def test_more_teams_than_members_rejected(self):
        with pytest.raises(ScenarioError):
            compose_teams(["a", "b"], 3)


class TestSessionCount:
    def test_26_hours_2h_sessions_gives_13(self):
        assert session_count(26, 2) == SessionBudget(13, Fraction(0))

    def test_26_hours_4h_sessions_gives_6_remainder_2(self):
        assert session_count(26, 4) == SessionBudget(6, Fraction(2))

    def test_duration_equal_to_hours_gives_1(self):
        for d in (1, 2, Fraction(7, 2)):
            assert session_count(d, d).count == 1

    def test_bounds_property(self):
        rng = random.Random(5)
        for _ in range(50):
            practical = Fraction(rng.randint(1, 400), rng.randint(1, 4))
            duration = Fraction(rng.randint(1, 40), rng.randint(1, 4))
            if duration > practical:
                continue
            count, leftover = session_count(practical, duration)
            assert count * duration <= practical < (count + 1) * duration
            assert leftover == practical - count * duration

    def test_oversized_session_rejected(self):
        with pytest.raises(ScenarioError):
            session_count(2, 4)


class TestApportion:
    def test_13_sessions_5_equal_steps(self):
        assert apportion([Fraction(1)] * 5, 13) == [3, 3, 3, 2, 2]

    def test_single_step_takes_all(self):
        assert apportion([Fraction(3)], 9) == [9]

    def test_exactly_one_each_when_total_equals_steps(self):
        assert apportion([Fraction(9), Fraction(1), Fraction(4)], 3) == [1, 1, 1]

    def test_floor_of_one_repair(self):
        # A tiny weight still gets one session, funded by the largest
        # over-allocated step.
        assert apportion([Fraction(10), Fraction(1), Fraction(1), Fraction(1), Fraction(1)], 5) == [1, 1, 1, 1, 1]

    def test_largest_remainder_quota_property(self):
        rng = random.Random(23)
        for _ in range(100):
            k = rng.randint(1, 8)
            weights = [Fraction(rng.randint(1, 5)) for _ in range(k)]
            total = 5 * k + rng.randint(0, 10)
            alloc = apportion(weights, total)
            assert sum(alloc) == total
            weight_sum = sum(weights)
            for a, w in zip(alloc, weights):
                share = Fraction(total) * w / weight_sum
                assert abs(a - share) <= 1

    def test_deficit_error_names_numbers(self):
        with pytest.raises(ScenarioError, match="deficit 2"):
            apportion([Fraction(1)] * 5, 3)


class TestComposeScenario:
    def test_webprog_scenario_shape(self, webprog_unit, maetic_method):
        scenario = compose_scenario(webprog_unit, maetic_method)
        assert len(scenario.sessions) == 13
        counts = [
            scenario.step_spans[s.step_id][1] - scenario.step_spans[s.step_id][0] + 1
            for s in maetic_method.steps
        ]
        assert counts == [3, 3, 3, 2, 2]
        assert scenario.unscheduled_hours == 0

    def test_spans_contiguous_and_ordered(self, webprog_unit, maetic_method):
        scenario = compose_scenario(webprog_unit, maetic_method)
        expected_start = 1
        for step in maetic_method.steps:
            first, last = scenario.step_spans[step.step_id]
            assert first == expected_start
            expected_start = last + 1
        assert expected_start == len(scenario.sessions) + 1

    def test_deliveries_due_once_in_last_step_session(self, webprog_unit, maetic_method):
        scenario = compose_scenario(webprog_unit, maetic_method)
        due = [d for s in scenario.sessions for d in s.due_deliveries]
        all_deliveries = [d for step in maetic_method.steps for d in step.deliveries]
        assert sorted(due) == sorted(all_deliveries)
        for step in maetic_method.steps:
            last = scenario.step_spans[step.step_id][1]
            assert scenario.sessions[last - 1].due_deliveries == step.deliveries

    def test_single_step_all_sessions(self, webprog_unit):
        method = equal_weight_method(1, deliveries=["the product"])
        scenario = compose_scenario(webprog_unit, method)
        assert len(scenario.sessions) == 13
        assert scenario.sessions[-1].due_deliveries == ["the product"]
        assert all(s.assigned_step == "s1" for s in scenario.sessions)

    def test_too_many_steps_rejected(self, webprog_unit):
        with pytest.raises(ScenarioError, match="deficit"):
            compose_scenario(webprog_unit, equal_weight_method(14))

    def test_method_mismatch_rejected(self, webprog_unit, maetic_method):
        webprog_unit.method_id = "other"
        with pytest.raises(ScenarioError, match="other"):
            compose_scenario(webprog_unit, maetic_method)
