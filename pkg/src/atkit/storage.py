"""Per-user persistence and the credentials/facts anonymity split.

Layout under the data directory (``AT_DATA_DIR``, default ``./data``)::

    credentials.json          # identities: the ONLY place personal data lives
    server.key                # HMAC key for session tokens
    jobs.json                 # generation job records (ids, states, no PII)
    users/<uid>/profile.facts
    users/<uid>/units/<unit_id>.facts
    users/<uid>/device/<unit_id>/...

Fact files under ``users/`` reference teachers only through the numeric
uid, never by name or email.  Passwords are stored as salted PBKDF2
hashes.  Saves are atomic (write to a temp file, then rename), and
save/load for one user is serialized by a per-user lock.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import json
import os
import re
import secrets
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from .facts import FactSet, FactSyntaxError, parse_facts, serialize_facts

# Test hook: called with the temp path right before the atomic rename.
_before_replace = None


class StorageError(Exception):
    """Persistence failed (unknown user, corrupt file, bad layout)."""


class AuthError(StorageError):
    """Registration or login failed.

    Login failures carry one fixed message whether the email is unknown
    or the password wrong, so responses cannot leak which emails exist.
    """


class DuplicateEmailError(StorageError):
    pass


@dataclass
class TeacherIdentity:
    uid: int
    name: str
    surname: str
    email: str
    password_hash: str  # "<salt_hex>$<pbkdf2_hex>"


_PBKDF2_ITERATIONS = 120_000
_TOKEN_TTL_SECONDS = 24 * 3600


def _hash_password(password: str, salt: bytes) -> str:
    digest = hashlib.pbkdf2_hmac("sha256", password.encode(), salt, _PBKDF2_ITERATIONS)
    return f"{salt.hex()}${digest.hex()}"


def _verify_password(password: str, stored: str) -> bool:
    try:
        salt_hex, _ = stored.split("$", 1)
    except ValueError:
        return False
    return hmac.compare_digest(_hash_password(password, bytes.fromhex(salt_hex)), stored)


def default_data_dir() -> Path:
    return Path(os.environ.get("AT_DATA_DIR", "data"))


class Storage:
    def __init__(self, data_dir: str | Path | None = None):
        self.root = Path(data_dir) if data_dir is not None else default_data_dir()
        self.users_dir = self.root / "users"
        self._credentials_path = self.root / "credentials.json"
        self._key_path = self.root / "server.key"
        self._guard = threading.RLock()
        self._user_locks: dict[int, threading.RLock] = {}

    # -- locking ------------------------------------------------------------

    def user_lock(self, uid: int) -> threading.RLock:
        with self._guard:
            lock = self._user_locks.get(uid)
            if lock is None:
                lock = self._user_locks[uid] = threading.RLock()
            return lock

    # -- low-level atomic files ----------------------------------------------

    def write_text_atomic(self, path: Path, text: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + f".tmp{os.getpid()}")
        tmp.write_text(text, encoding="utf-8")
        if _before_replace is not None:
            _before_replace(tmp)
        os.replace(tmp, path)

    def read_json(self, path: Path, default):
        if not path.exists():
            return default
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise StorageError(f"{path}: corrupt JSON: {exc}") from exc

    def write_json_atomic(self, path: Path, payload) -> None:
        self.write_text_atomic(path, json.dumps(payload, indent=1, sort_keys=True) + "\n")

    # -- credentials ----------------------------------------------------------

    def _load_credentials(self) -> dict:
        return self.read_json(self._credentials_path, {"next_uid": 1, "users": []})

    def register(self, name: str, surname: str, email: str, password: str) -> int:
        email = email.strip().lower()
        if "@" not in email:
            raise AuthError("email must contain '@'")
        if not password:
            raise AuthError("password must not be empty")
        with self._guard:
            store = self._load_credentials()
            if any(u["email"] == email for u in store["users"]):
                raise DuplicateEmailError(f"already registered: {email}")
            uid = store["next_uid"]
            store["next_uid"] = uid + 1
            store["users"].append(
                {
                    "uid": uid,
                    "name": name,
                    "surname": surname,
                    "email": email,
                    "password_hash": _hash_password(password, secrets.token_bytes(16)),
                }
            )
            self.write_json_atomic(self._credentials_path, store)
        return uid

    def identity(self, uid: int) -> TeacherIdentity:
        for user in self._load_credentials()["users"]:
            if user["uid"] == uid:
                return TeacherIdentity(**user)
        raise StorageError(f"unregistered uid: {uid}")

    def uid_for_email(self, email: str) -> int:
        email = email.strip().lower()
        for user in self._load_credentials()["users"]:
            if user["email"] == email:
                return user["uid"]
        raise StorageError(f"no such user: {email}")

    def is_registered(self, uid: int) -> bool:
        return any(u["uid"] == uid for u in self._load_credentials()["users"])

    # -- session tokens --------------------------------------------------------

    def _server_key(self) -> bytes:
        with self._guard:
            if not self._key_path.exists():
                self.root.mkdir(parents=True, exist_ok=True)
                self._key_path.write_bytes(secrets.token_bytes(32))
                self._key_path.chmod(0o600)
            return self._key_path.read_bytes()

    def _sign(self, payload: str) -> str:
        return hmac.new(self._server_key(), payload.encode(), hashlib.sha256).hexdigest()

    def login(self, email: str, password: str, ttl_seconds: int = _TOKEN_TTL_SECONDS) -> str:
        email = email.strip().lower()
        user = next(
            (u for u in self._load_credentials()["users"] if u["email"] == email), None
        )
        if user is None or not _verify_password(password, user["password_hash"]):
            raise AuthError("invalid credentials")
        return self.issue_token(user["uid"], ttl_seconds)

    def issue_token(self, uid: int, ttl_seconds: int = _TOKEN_TTL_SECONDS) -> str:
        expiry = int(time.time()) + ttl_seconds
        nonce = secrets.token_hex(8)
        payload = f"{uid}.{expiry}.{nonce}"
        raw = f"{payload}.{self._sign(payload)}"
        return base64.urlsafe_b64encode(raw.encode()).decode()

    def resolve_token(self, token: str) -> int:
        try:
            raw = base64.urlsafe_b64decode(token.encode()).decode()
            uid_text, expiry_text, nonce, signature = raw.split(".")
            payload = f"{uid_text}.{expiry_text}.{nonce}"
        except Exception:
            raise AuthError("malformed token") from None
        if not hmac.compare_digest(signature, self._sign(payload)):
            raise AuthError("invalid token")
        if int(expiry_text) < time.time():
            raise AuthError("expired token")
        return int(uid_text)

    # -- fact files --------------------------------------------------------------

    def user_dir(self, uid: int) -> Path:
        return self.users_dir / str(uid)

    def _fact_path(self, uid: int, kind: str, unit_id: str | None = None) -> Path:
        if kind == "profile":
            return self.user_dir(uid) / "profile.facts"
        if kind == "unit":
            if not unit_id or not re.fullmatch(r"[A-Za-z0-9_.\-]+", unit_id):
                raise StorageError(f"bad unit id: {unit_id!r}")
            return self.user_dir(uid) / "units" / f"{unit_id}.facts"
        raise StorageError(f"unknown kind: {kind}")

    def _require_registered(self, uid: int) -> None:
        if not self.is_registered(uid):
            raise StorageError(f"unregistered uid: {uid}")

    def save_user_facts(self, uid: int, kind: str, facts: FactSet, unit_id: str | None = None) -> None:
        self._require_registered(uid)
        path = self._fact_path(uid, kind, unit_id)
        with self.user_lock(uid):
            self.write_text_atomic(path, serialize_facts(facts))

    def load_user_facts(self, uid: int, kind: str, unit_id: str | None = None) -> FactSet:
        self._require_registered(uid)
        path = self._fact_path(uid, kind, unit_id)
        with self.user_lock(uid):
            if not path.exists():
                return FactSet()
            try:
                return parse_facts(path.read_text(encoding="utf-8"))
            except FactSyntaxError as exc:
                raise StorageError(f"{path}: {exc}") from exc

    def save_profile_facts(self, uid: int, facts: FactSet) -> None:
        self.save_user_facts(uid, "profile", facts)

    def load_profile_facts(self, uid: int) -> FactSet:
        return self.load_user_facts(uid, "profile")

    def save_unit_facts(self, uid: int, unit_id: str, facts: FactSet) -> None:
        self.save_user_facts(uid, "unit", facts, unit_id)

    def load_unit_facts(self, uid: int, unit_id: str) -> FactSet:
        return self.load_user_facts(uid, "unit", unit_id)

    def unit_exists(self, uid: int, unit_id: str) -> bool:
        return self._fact_path(uid, "unit", unit_id).exists()

    def list_units(self, uid: int) -> list[str]:
        self._require_registered(uid)
        units_dir = self.user_dir(uid) / "units"
        if not units_dir.is_dir():
            return []
        return sorted(p.stem for p in units_dir.glob("*.facts"))

    def delete_unit(self, uid: int, unit_id: str) -> None:
        self._require_registered(uid)
        path = self._fact_path(uid, "unit", unit_id)
        with self.user_lock(uid):
            if not path.exists():
                raise StorageError(f"no such unit: {unit_id}")
            path.unlink()

    def device_dir(self, uid: int, unit_id: str) -> Path:
        if not re.fullmatch(r"[A-Za-z0-9_.\-]+", unit_id or ""):
            raise StorageError(f"bad unit id: {unit_id!r}")
        return self.user_dir(uid) / "device" / unit_id
