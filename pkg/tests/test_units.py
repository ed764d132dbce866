from fractions import Fraction

import pytest

from atkit.resources import ConfigError
from atkit.units import (
    GroupRoster,
    MethodDefinition,
    MethodStep,
    Modality,
    Resource,
    SectionKind,
    TeachingUnit,
    UnitError,
    facts_to_unit,
    load_method,
    unit_to_facts,
    validate_method,
    validate_unit,
)


class TestUnitValidation:
    def test_webprog_unit_valid(self, webprog_unit):
        assert validate_unit(webprog_unit) == []

    def test_group_count_must_match_roster(self, webprog_unit):
        webprog_unit.group_count = 3
        assert any(v.field == "group_count" for v in validate_unit(webprog_unit))

    def test_session_duration_bounded_by_practical_hours(self, webprog_unit):
        webprog_unit.session_duration = Fraction(30)
        assert any(v.field == "session_duration" for v in validate_unit(webprog_unit))

    def test_empty_resource_locator_flagged(self, webprog_unit):
        webprog_unit.resources.append(Resource("broken", "  "))
        assert any("locator" in v.rule for v in validate_unit(webprog_unit))

    def test_team_count_beyond_group_size_flagged(self):
        unit = TeachingUnit(
            unit_id="u1",
            title="T",
            roster=[GroupRoster(members=["a", "b"], team_count=3)],
        )
        assert any("team_count" in v.rule for v in validate_unit(unit))


class TestUnitFacts:
    def test_round_trip(self, webprog_unit):
        assert facts_to_unit("webprog", unit_to_facts(webprog_unit)) == webprog_unit

    def test_round_trip_fractional_session(self, webprog_unit):
        webprog_unit.session_duration = Fraction(3, 2)
        assert facts_to_unit("webprog", unit_to_facts(webprog_unit)) == webprog_unit

    def test_missing_unit_rejected(self, webprog_unit):
        facts = unit_to_facts(webprog_unit)
        with pytest.raises(UnitError, match="no facts"):
            facts_to_unit("other", facts)

    def test_names_with_delimiters_survive(self):
        unit = TeachingUnit(
            unit_id="u1",
            title="T",
            roster=[GroupRoster(members=['Ann "A" B|c', "D/e, f"], team_count=1)],
        )
        assert facts_to_unit("u1", unit_to_facts(unit)) == unit

    def test_invalid_unit_rejected_on_encode(self, webprog_unit):
        webprog_unit.practical_hours = Fraction(0)
        with pytest.raises(UnitError, match="practical_hours"):
            unit_to_facts(webprog_unit)


class TestMethodLoading:
    def test_shipped_maetic_method(self, maetic_method):
        assert maetic_method.method_id == "maetic"
        assert len(maetic_method.steps) == 5
        assert validate_method(maetic_method) == []
        kinds = [s.kind for s in maetic_method.presentation_sections]
        assert SectionKind.PRINCIPLE in kinds and SectionKind.EXAMPLE in kinds
        for section in maetic_method.presentation_sections:
            assert Modality.TEXT in section.media
            assert Modality.AUDIO in section.media

    def test_unknown_method_raises(self):
        with pytest.raises(ConfigError):
            load_method("nonexistent")

    def test_method_without_steps_invalid(self):
        method = MethodDefinition("m", "M", steps=[])
        assert any(v.field == "steps" for v in validate_method(method))

    def test_step_weight_positive(self):
        method = MethodDefinition(
            "m", "M", steps=[MethodStep("s1", "S", Fraction(0), [])]
        )
        assert any("weight" in v.rule for v in validate_method(method))
