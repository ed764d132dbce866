import threading

import pytest

import atkit.storage as storage_module
from atkit.facts import Fact, FactSet, Ident
from atkit.storage import AuthError, DuplicateEmailError, Storage, StorageError

SENTINEL_NAME = "Zebulon"
SENTINEL_SURNAME = "Quixote"
SENTINEL_EMAIL = "zebulon.quixote@example.edu"
SENTINEL_PASSWORD = "hunter2-sentinel"


@pytest.fixture
def storage(tmp_path) -> Storage:
    return Storage(tmp_path / "data")


@pytest.fixture
def uid(storage) -> int:
    return storage.register(SENTINEL_NAME, SENTINEL_SURNAME, SENTINEL_EMAIL, SENTINEL_PASSWORD)


def sample_facts(uid: int) -> FactSet:
    return FactSet(
        [
            Fact(f"teacher:{uid}", "inputs", Ident("verbal")),
            Fact(f"teacher:{uid}", "has_skill", Ident("coach")),
        ]
    )


class TestCredentials:
    def test_register_then_login_roundtrip(self, storage, uid):
        token = storage.login(SENTINEL_EMAIL, SENTINEL_PASSWORD)
        assert storage.resolve_token(token) == uid

    def test_duplicate_email_rejected(self, storage, uid):
        with pytest.raises(DuplicateEmailError):
            storage.register("Other", "Person", SENTINEL_EMAIL, "pw")

    def test_wrong_password_and_unknown_email_same_error(self, storage, uid):
        with pytest.raises(AuthError) as wrong_pw:
            storage.login(SENTINEL_EMAIL, "incorrect")
        with pytest.raises(AuthError) as unknown:
            storage.login("nobody@example.edu", "incorrect")
        assert str(wrong_pw.value) == str(unknown.value)

    def test_password_stored_salted_never_plain(self, storage, uid):
        text = (storage.root / "credentials.json").read_text()
        assert SENTINEL_PASSWORD not in text
        identity = storage.identity(uid)
        assert "$" in identity.password_hash

    def test_uid_for_email(self, storage, uid):
        assert storage.uid_for_email(SENTINEL_EMAIL) == uid
        with pytest.raises(StorageError):
            storage.uid_for_email("ghost@example.edu")

    def test_email_case_insensitive(self, storage, uid):
        assert storage.uid_for_email(SENTINEL_EMAIL.upper()) == uid


class TestTokens:
    def test_expired_token_rejected(self, storage, uid):
        token = storage.issue_token(uid, ttl_seconds=-1)
        with pytest.raises(AuthError, match="expired"):
            storage.resolve_token(token)

    def test_tampered_token_rejected(self, storage, uid):
        token = storage.issue_token(uid)
        mangled = token[:-6] + ("AAAAAA" if not token.endswith("AAAAAA") else "BBBBBB")
        with pytest.raises(AuthError):
            storage.resolve_token(mangled)

    def test_garbage_token_rejected(self, storage):
        with pytest.raises(AuthError):
            storage.resolve_token("not-a-token")

    def test_token_never_embeds_credentials(self, storage, uid):
        import base64

        token = storage.login(SENTINEL_EMAIL, SENTINEL_PASSWORD)
        raw = base64.urlsafe_b64decode(token.encode()).decode()
        assert SENTINEL_EMAIL not in raw
        assert SENTINEL_PASSWORD not in raw


class TestFactFiles:
    def test_save_then_load_equal(self, storage, uid):
        facts = sample_facts(uid)
        storage.save_profile_facts(uid, facts)
        assert storage.load_profile_facts(uid) == facts

    def test_fresh_uid_loads_empty_set(self, storage, uid):
        assert storage.load_profile_facts(uid) == FactSet()
        assert storage.load_unit_facts(uid, "u1") == FactSet()

    def test_two_units_are_independent_files(self, storage, uid):
        storage.save_unit_facts(uid, "u1", FactSet([Fact("unit:u1", "title", "one")]))
        storage.save_unit_facts(uid, "u2", FactSet([Fact("unit:u2", "title", "two")]))
        assert storage.list_units(uid) == ["u1", "u2"]
        assert (storage.user_dir(uid) / "units" / "u1.facts").exists()
        assert (storage.user_dir(uid) / "units" / "u2.facts").exists()
        assert storage.load_unit_facts(uid, "u1") != storage.load_unit_facts(uid, "u2")

    def test_unregistered_uid_rejected(self, storage):
        with pytest.raises(StorageError, match="unregistered"):
            storage.save_profile_facts(999, FactSet())
        with pytest.raises(StorageError, match="unregistered"):
            storage.load_profile_facts(999)

    def test_corrupt_file_error_names_path(self, storage, uid):
        storage.save_profile_facts(uid, sample_facts(uid))
        path = storage.user_dir(uid) / "profile.facts"
        path.write_text("this is not a fact line\n")
        with pytest.raises(StorageError, match="profile.facts"):
            storage.load_profile_facts(uid)

    def test_delete_unit(self, storage, uid):
        storage.save_unit_facts(uid, "u1", FactSet())
        storage.delete_unit(uid, "u1")
        assert storage.list_units(uid) == []
        with pytest.raises(StorageError):
            storage.delete_unit(uid, "u1")

    def test_traversal_unit_ids_rejected(self, storage, uid):
        with pytest.raises(StorageError):
            storage.save_unit_facts(uid, "../evil", FactSet())
        with pytest.raises(StorageError):
            storage.device_dir(uid, "a/b")


class TestAtomicity:
    def test_crash_between_write_and_rename_preserves_old_file(self, storage, uid):
        before = sample_facts(uid)
        storage.save_profile_facts(uid, before)

        class Boom(RuntimeError):
            pass

        def crash(tmp_path):
            raise Boom("injected crash")

        storage_module._before_replace = crash
        try:
            with pytest.raises(Boom):
                storage.save_profile_facts(
                    uid, FactSet([Fact(f"teacher:{uid}", "inputs", Ident("visual"))])
                )
        finally:
            storage_module._before_replace = None
        assert storage.load_profile_facts(uid) == before

    def test_concurrent_saves_serialize(self, storage, uid):
        fact_sets = [
            FactSet([Fact(f"teacher:{uid}", "knows_tool", Ident(f"tool{i}"))])
            for i in range(8)
        ]
        threads = [
            threading.Thread(target=storage.save_profile_facts, args=(uid, fs))
            for fs in fact_sets
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert storage.load_profile_facts(uid) in fact_sets


class TestAnonymity:
    def test_users_tree_never_contains_identity_strings(self, storage, uid):
        storage.save_profile_facts(uid, sample_facts(uid))
        storage.save_unit_facts(
            uid, "u1", FactSet([Fact("unit:u1", "title", "Web programming")])
        )
        leaks = []
        for path in storage.users_dir.rglob("*"):
            if not path.is_file():
                continue
            content = path.read_text(encoding="utf-8", errors="replace")
            for sentinel in (SENTINEL_NAME, SENTINEL_SURNAME, SENTINEL_EMAIL, SENTINEL_PASSWORD):
                if sentinel in content:
                    leaks.append((path, sentinel))
        assert leaks == []

    def test_credentials_live_outside_users_tree(self, storage, uid):
        assert storage._credentials_path.exists()
        assert storage.users_dir not in storage._credentials_path.parents
