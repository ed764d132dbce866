from pathlib import Path

import pytest
from click.testing import CliRunner

from atkit.cli import main
from atkit.facts import serialize_facts
from atkit.profile import profile_to_facts
from atkit.resources import config_path
from atkit.storage import Storage
from atkit.units import unit_to_facts

from conftest import make_jones_profile, make_webprog_unit


@pytest.fixture
def runner():
    return CliRunner()


def seed_storage(data_dir: Path, email="jones@example.edu") -> tuple[Storage, int]:
    storage = Storage(data_dir)
    uid = storage.register("M", "Jones", email, "pw")
    profile = make_jones_profile(uid=uid)
    storage.save_profile_facts(uid, profile_to_facts(profile))
    unit = make_webprog_unit("webprog")
    storage.save_unit_facts(uid, "webprog", unit_to_facts(unit))
    return storage, uid


class TestInferCommand:
    def test_fixture_directives_canonical_and_sorted(self, runner, tmp_path, jones_profile):
        facts_file = tmp_path / "jones.facts"
        facts_file.write_text(serialize_facts(profile_to_facts(jones_profile)))
        rules_file = config_path("adaptation.rules")
        result = runner.invoke(
            main, ["infer", "--facts", str(facts_file), "--rules", str(rules_file)]
        )
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines == sorted(lines)
        assert "present(maetic,audio,deductive)" in lines
        assert "skip(active_pedagogy)" in lines
        assert "skip(group_pedagogy)" in lines
        assert "skip(project_pedagogy)" in lines
        assert "embed_tool(spreadsheet)" in lines

    def test_bad_rule_file_reports_position(self, runner, tmp_path):
        facts_file = tmp_path / "empty.facts"
        facts_file.write_text("")
        rules_file = tmp_path / "broken.rules"
        rules_file.write_text("RULE oops WHEN (a, b THEN directive skip(a) END")
        result = runner.invoke(
            main, ["infer", "--facts", str(facts_file), "--rules", str(rules_file)]
        )
        assert result.exit_code != 0
        assert "line 1" in result.output


class TestGenCommand:
    def test_generates_bundle_on_disk(self, runner, tmp_path):
        storage, uid = seed_storage(tmp_path / "data")
        result = runner.invoke(
            main,
            [
                "gen",
                "--data-dir", str(tmp_path / "data"),
                "--user", "jones@example.edu",
                "--unit", "webprog",
            ],
        )
        assert result.exit_code == 0, result.output
        device_dir = storage.device_dir(uid, "webprog")
        assert (device_dir / "toolbox.manifest").is_file()
        assert (device_dir / "esuitcase" / "present-maetic.html").is_file()
        blog_dirs = sorted(p.name for p in (device_dir / "blogs").iterdir())
        assert blog_dirs == [f"team-{i}" for i in range(1, 6)]

    def test_unknown_email_exits_nonzero(self, runner, tmp_path):
        seed_storage(tmp_path / "data")
        result = runner.invoke(
            main,
            [
                "gen",
                "--data-dir", str(tmp_path / "data"),
                "--user", "ghost@example.edu",
                "--unit", "webprog",
            ],
        )
        assert result.exit_code != 0
        assert "ghost@example.edu" in result.output

    def test_unknown_unit_exits_nonzero(self, runner, tmp_path):
        seed_storage(tmp_path / "data")
        result = runner.invoke(
            main,
            [
                "gen",
                "--data-dir", str(tmp_path / "data"),
                "--user", "jones@example.edu",
                "--unit", "nope",
            ],
        )
        assert result.exit_code != 0
        assert "nope" in result.output
