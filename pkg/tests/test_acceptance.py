"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``)."""

import random
import re
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from atkit.cli import main as cli_main
from atkit.facts import parse_facts, serialize_facts
from atkit.ils import AnswerSheet, Choice, ITEM_COUNT, load_questionnaire, score
from atkit.profile import Strength, default_profile, profile_to_facts
from atkit.rules import infer, parse_rules
from atkit.scenario import apportion, compose_teams, session_count
from atkit.service import create_app, profile_to_payload, unit_to_payload
from atkit.storage import Storage
from atkit.units import load_method, unit_to_facts

from conftest import make_jones_profile, make_webprog_unit
from rulegen import naive_infer, random_factset, random_rulebase_text
from test_ils import random_sheet, tally_oracle


@contextmanager
def criterion(name: str):
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def seed(data_dir: Path, email: str, profile=None) -> tuple[Storage, int]:
    storage = Storage(data_dir)
    uid = storage.register("M", "Jones", email, "pw")
    if profile is not None:
        profile.uid = uid
        storage.save_profile_facts(uid, profile_to_facts(profile))
    storage.save_unit_facts(uid, "webprog", unit_to_facts(make_webprog_unit("webprog")))
    return storage, uid


def run_gen(data_dir: Path, email: str, unit_id: str = "webprog"):
    runner = CliRunner()
    started = time.monotonic()
    result = runner.invoke(
        cli_main,
        ["gen", "--data-dir", str(data_dir), "--user", email, "--unit", unit_id],
    )
    elapsed = time.monotonic() - started
    assert result.exit_code == 0, result.output
    return elapsed


def device_snapshot(device_dir: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(device_dir)): p.read_bytes()
        for p in device_dir.rglob("*")
        if p.is_file()
    }


def test_mr_jones_end_to_end(tmp_path):
    with criterion("Mr Jones end-to-end"):
        storage, uid = seed(tmp_path / "data", "jones@example.edu", make_jones_profile())
        elapsed = run_gen(tmp_path / "data", "jones@example.edu")
        assert elapsed < 5.0, f"generation took {elapsed:.2f}s"
        device = storage.device_dir(uid, "webprog")

        blog_dirs = sorted(p.name for p in (device / "blogs").iterdir() if p.is_dir())
        assert len(blog_dirs) == 5
        for blog in blog_dirs:
            assert (device / "blogs" / blog / "index.html").is_file()

        blogs_page = (device / "esuitcase" / "blogs.html").read_text()
        links = re.findall(r'href="\.\./blogs/([^/"]+)/index\.html"', blogs_page)
        assert sorted(links) == blog_dirs

        maetic_page = (device / "esuitcase" / "present-maetic.html").read_text()
        modalities = set(re.findall(r'data-modality="([a-z]+)"', maetic_page))
        assert modalities == {"audio"}
        method = load_method("maetic")
        principles = [s.section_id for s in method.presentation_sections if s.kind.value == "principle"]
        examples = [s.section_id for s in method.presentation_sections if s.kind.value == "example"]
        positions = {s.section_id: maetic_page.index(f">{s.section_id}<") for s in method.presentation_sections}
        assert max(positions[p] for p in principles) < min(positions[e] for e in examples)

        for skipped in ("active_pedagogy", "group_pedagogy", "project_pedagogy"):
            assert not (device / "esuitcase" / f"present-{skipped}.html").exists()

        manifest = (device / "toolbox.manifest").read_text()
        entries = {
            parts[0].strip(): parts[2].strip()
            for parts in (line.split("|") for line in manifest.splitlines())
        }
        assert entries.get("spreadsheet") == "directive"


def test_standard_behaviour_byte_identical(tmp_path):
    with criterion("Standard behaviour"):
        storage_a, uid_a = seed(tmp_path / "a", "empty@example.edu", profile=None)
        storage_b, uid_b = seed(tmp_path / "b", "default@example.edu", default_profile())
        run_gen(tmp_path / "a", "empty@example.edu")
        run_gen(tmp_path / "b", "default@example.edu")
        snap_a = device_snapshot(storage_a.device_dir(uid_a, "webprog"))
        snap_b = device_snapshot(storage_b.device_dir(uid_b, "webprog"))
        assert snap_a == snap_b
        assert len(snap_a) > 0


def test_rule_engine_oracle_equivalence():
    with criterion("Rule-engine oracle equivalence"):
        rng = random.Random(20260809)
        mismatches = 0
        for _ in range(200):
            rulebase = parse_rules(random_rulebase_text(rng))
            facts = random_factset(rng)
            result = infer(facts, rulebase)
            oracle_derived, oracle_directives = naive_infer(facts, rulebase)
            if result.derived != oracle_derived or result.directives != oracle_directives:
                mismatches += 1
        assert mismatches == 0


def test_ils_scoring():
    with criterion("ILS scoring"):
        definition = load_questionnaire()
        all_a = AnswerSheet({i: Choice.A for i in range(1, ITEM_COUNT + 1)})
        for axis_score in score(all_a, definition):
            assert axis_score.value == 11
            assert axis_score.strength is Strength.STRONG
        rng = random.Random(7)
        for _ in range(50):
            sheet = random_sheet(rng)
            values = {s.axis: s.value for s in score(sheet, definition)}
            flipped = {s.axis: s.value for s in score(sheet.flipped(), definition)}
            assert all(flipped[a] == -values[a] for a in values)
            expected = tally_oracle(sheet, definition)
            assert values == expected


IDENT_CHARS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_:.-"
TEXT_CHARS = 'abc XYZ "\\\n\r\t!#.|=%\x1eé'


def random_rich_factset(rng: random.Random):
    from atkit.facts import Fact, FactSet, Ident, is_identifier

    def ident():
        while True:
            token = "".join(rng.choice(IDENT_CHARS) for _ in range(rng.randint(1, 10)))
            if is_identifier(token):
                return token

    def obj():
        roll = rng.random()
        if roll < 0.4:
            return Ident(ident())
        if roll < 0.7:
            return "".join(rng.choice(TEXT_CHARS) for _ in range(rng.randint(0, 12)))
        if roll < 0.85:
            return rng.randint(-10**6, 10**6)
        return Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))

    return FactSet(Fact(ident(), ident(), obj()) for _ in range(rng.randint(0, 30)))


def test_fact_store_round_trips(tmp_path):
    with criterion("Fact-store round trips"):
        rng = random.Random(99)
        for fs in (random_rich_factset(rng) for _ in range(500)):
            text = serialize_facts(fs)
            assert parse_facts(text) == fs
            assert serialize_facts(parse_facts(text)) == text
            lines = text.split("\n")[:-1]
            rng.shuffle(lines)
            assert serialize_facts(parse_facts("".join(l + "\n" for l in lines))) == text

        sentinel_email = "sentinel.teacher@example.edu"
        sentinel_name = "SentinelName"
        sentinel_surname = "SentinelSurname"
        sentinel_password = "sentinel-password-42"
        storage = Storage(tmp_path / "data")
        uid = storage.register(sentinel_name, sentinel_surname, sentinel_email, sentinel_password)
        storage.save_profile_facts(uid, profile_to_facts(make_jones_profile(uid)))
        storage.save_unit_facts(uid, "webprog", unit_to_facts(make_webprog_unit()))
        leaks = []
        for path in storage.users_dir.rglob("*"):
            if path.is_file():
                content = path.read_text(errors="replace")
                for sentinel in (sentinel_email, sentinel_name, sentinel_surname, sentinel_password):
                    if sentinel in content:
                        leaks.append((str(path), sentinel))
        assert leaks == []


def test_team_composition():
    with criterion("Team composition"):
        rng = random.Random(13)
        for _ in range(60):
            size = rng.randint(1, 200)
            members = [f"s{i:03d}" for i in range(size)]
            rng.shuffle(members)
            team_count = rng.randint(1, size)
            teams = compose_teams(members, team_count)
            gathered = sorted(m for t in teams for m in t.members)
            assert gathered == sorted(members)
            sizes = [len(t.members) for t in teams]
            assert max(sizes) - min(sizes) <= 1
        assert [
            len(t.members) for t in compose_teams([f"s{i:02d}" for i in range(22)], 5)
        ] == [5, 5, 4, 4, 4]
        assert session_count(26, 2).count == 13


def test_scenario_apportionment():
    with criterion("Scenario apportionment"):
        rng = random.Random(5)
        for _ in range(100):
            step_count = rng.randint(1, 8)
            weights = [Fraction(rng.randint(1, 5)) for _ in range(step_count)]
            total = 5 * step_count + rng.randint(0, 10)
            alloc = apportion(weights, total)
            assert sum(alloc) == total
            weight_sum = sum(weights)
            for allocated, weight in zip(alloc, weights):
                assert abs(allocated - Fraction(total) * weight / weight_sum) <= 1


def test_service_isolation_and_parity(tmp_path):
    with criterion("Service isolation and parity"):
        storage = Storage(tmp_path / "data")
        app = create_app(storage)
        with TestClient(app) as client:
            def register(email):
                client.post(
                    "/api/register",
                    json={"name": "n", "surname": "s", "email": email, "password": "pw"},
                )
                token = client.post(
                    "/api/login", json={"email": email, "password": "pw"}
                ).json()["token"]
                return {"Authorization": f"Bearer {token}"}

            headers_a = register("a@example.edu")
            headers_b = register("b@example.edu")
            uid_a = storage.uid_for_email("a@example.edu")

            profile_payload = profile_to_payload(make_jones_profile())
            profile_payload.pop("uid")
            assert (
                client.put("/api/profile", json=profile_payload, headers=headers_a).status_code
                == 204
            )
            unit_payload = unit_to_payload(make_webprog_unit())
            unit_id = client.post(
                "/api/units", json=unit_payload, headers=headers_a
            ).json()["unit_id"]

            # isolation
            assert client.get("/api/profile", headers=headers_b).json()["standard"] is True
            assert client.get(f"/api/units/{unit_id}", headers=headers_b).status_code == 404

            job_id = client.post(
                f"/api/units/{unit_id}/generate", headers=headers_a
            ).json()["job_id"]
            app.state.runner.wait_idle()
            job = client.get(f"/api/jobs/{job_id}", headers=headers_a).json()
            assert job["state"] == "done"
            assert client.get(f"/api/jobs/{job_id}", headers=headers_b).status_code == 404
            assert client.get(f"/api/device/{unit_id}", headers=headers_b).status_code == 404

            http_snapshot = device_snapshot(storage.device_dir(uid_a, unit_id))
            assert http_snapshot

        # parity: regenerate the same stored state through the CLI
        import shutil

        shutil.rmtree(storage.device_dir(uid_a, unit_id))
        run_gen(tmp_path / "data", "a@example.edu", unit_id)
        cli_snapshot = device_snapshot(storage.device_dir(uid_a, unit_id))
        assert cli_snapshot == http_snapshot
