"""HTTP API: authentication, profile, units, generation jobs, device files.

Two communication flows: a request either answers immediately (first
flow) or, for device generation, enqueues a job and returns its id; the
client then polls ``/api/jobs/{job_id}`` until the answer is ready
(second flow).  Jobs run on a single background worker; job records are
persisted (without any personal data) so an interrupted run surfaces as
a failed job after restart instead of a silent loss.

All protected routes take ``Authorization: Bearer <token>`` from
``POST /api/login``.  A teacher can only ever see their own profile,
units, jobs and device files; anything else answers 404.
"""

from __future__ import annotations

import queue
import threading
import time
import uuid
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from fastapi import Body, Depends, FastAPI, Header, HTTPException, Response
from fastapi.responses import FileResponse, JSONResponse

from .ils import AnswerSheet, Choice, IncompleteSheetError, classify, load_questionnaire, score
from .pipeline import generate_for_user, rules_path_from_env
from .profile import (
    AXIS_POLES,
    BehaviourEntry,
    KnowledgeEntry,
    KnowledgeLevel,
    PersonalityAxis,
    PersonalityType,
    Reasoning,
    Strength,
    TeacherProfile,
    ToolPreference,
    facts_to_profile,
    profile_to_facts,
    validate_profile,
)
from .storage import AuthError, DuplicateEmailError, Storage, StorageError
from .units import GroupRoster, Resource, TeachingUnit, facts_to_unit, unit_to_facts, validate_unit


# ---------------------------------------------------------------------------
# Payload codecs: tolerate garbage on the way in (validation reports it),
# stay JSON-safe on the way out.


def _maybe_enum(enum_cls, value):
    try:
        return enum_cls(value)
    except (ValueError, TypeError):
        return value


def profile_from_payload(uid: int, payload: dict) -> TeacherProfile:
    def get(key, default):
        value = payload.get(key, default)
        return value if value is not None else default

    knowledge = []
    for entry in get("knowledge", []) or []:
        if isinstance(entry, dict):
            knowledge.append(
                KnowledgeEntry(entry.get("topic"), _maybe_enum(KnowledgeLevel, entry.get("level")))
            )
        else:
            knowledge.append(entry)
    behaviours = []
    for entry in get("behaviours", []) or []:
        if isinstance(entry, dict):
            behaviours.append(BehaviourEntry(entry.get("aspect"), entry.get("style")))
        else:
            behaviours.append(entry)
    personality = None
    raw_personality = payload.get("personality")
    if isinstance(raw_personality, dict):
        strengths = {}
        for axis_text, strength_text in (raw_personality.get("strengths") or {}).items():
            strengths[_maybe_enum(PersonalityAxis, axis_text)] = _maybe_enum(
                Strength, strength_text
            )
        kwargs = {}
        for axis, pole_enum in AXIS_POLES.items():
            kwargs[axis.value] = _maybe_enum(pole_enum, raw_personality.get(axis.value))
        personality = PersonalityType(strengths=strengths, **kwargs)
    raw_tools = get("tools", {}) or {}
    tools = ToolPreference(
        known_tools=list(raw_tools.get("known_tools") or []),
        wished_functionalities=list(raw_tools.get("wished_functionalities") or []),
    )
    return TeacherProfile(
        uid=uid,
        skills=list(get("skills", []) or []),
        knowledge=knowledge,
        behaviours=behaviours,
        personality=personality,
        tools=tools,
        extensions=dict(get("extensions", {}) or {}),
    )


def profile_to_payload(profile: TeacherProfile) -> dict:
    personality = None
    if profile.personality is not None:
        p = profile.personality
        personality = {
            "perception": p.perception.value,
            "input": p.input.value,
            "reasoning": p.reasoning.value,
            "processing": p.processing.value,
            "understanding": p.understanding.value,
            "strengths": {axis.value: s.value for axis, s in sorted(p.strengths.items())},
        }
    return {
        "uid": profile.uid,
        "skills": list(profile.skills),
        "knowledge": [{"topic": e.topic, "level": e.level.value} for e in profile.knowledge],
        "behaviours": [{"aspect": e.aspect, "style": e.style} for e in profile.behaviours],
        "personality": personality,
        "tools": {
            "known_tools": list(profile.tools.known_tools),
            "wished_functionalities": list(profile.tools.wished_functionalities),
        },
        "extensions": dict(profile.extensions),
    }


def _hours_in(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    return value


def _hours_out(value) -> int | float:
    fraction = Fraction(value)
    return int(fraction) if fraction.denominator == 1 else float(fraction)


def unit_from_payload(unit_id: str, payload: dict) -> TeachingUnit:
    groups = []
    for raw in payload.get("groups") or []:
        if isinstance(raw, dict):
            groups.append(
                GroupRoster(
                    members=list(raw.get("members") or []),
                    team_count=raw.get("team_count", 0),
                )
            )
        else:
            groups.append(raw)
    resources = []
    for raw in payload.get("resources") or []:
        if isinstance(raw, dict):
            resources.append(Resource(raw.get("label", ""), raw.get("locator", "")))
        else:
            resources.append(raw)
    return TeachingUnit(
        unit_id=unit_id,
        title=payload.get("title", ""),
        domain_project=payload.get("domain_project", ""),
        client_needs=payload.get("client_needs", ""),
        lecture_hours=_hours_in(payload.get("lecture_hours", 0)),
        practical_hours=_hours_in(payload.get("practical_hours", 0)),
        session_duration=_hours_in(payload.get("session_duration", 0)),
        group_count=payload.get("group_count", len(groups)),
        roster=groups,
        resources=resources,
        method_id=payload.get("method_id", "maetic"),
    )


def unit_to_payload(unit: TeachingUnit) -> dict:
    return {
        "unit_id": unit.unit_id,
        "title": unit.title,
        "domain_project": unit.domain_project,
        "client_needs": unit.client_needs,
        "lecture_hours": _hours_out(unit.lecture_hours),
        "practical_hours": _hours_out(unit.practical_hours),
        "session_duration": _hours_out(unit.session_duration),
        "group_count": unit.group_count,
        "groups": [
            {"members": list(g.members), "team_count": g.team_count} for g in unit.roster
        ],
        "resources": [{"label": r.label, "locator": r.locator} for r in unit.resources],
        "method_id": unit.method_id,
    }


# ---------------------------------------------------------------------------
# Generation jobs


class JobState:
    QUEUED = "queued"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"


@dataclass
class Job:
    job_id: str
    uid: int
    unit_id: str
    state: str = JobState.QUEUED
    result: str | None = None
    error: str | None = None
    created: float = field(default_factory=time.time)
    started: float | None = None
    finished: float | None = None


class JobRunner:
    """One worker thread draining a FIFO of generation jobs.

    Job records persist in ``jobs.json`` (ids and states only); records
    found queued/running at startup are marked failed: the process died
    under them.
    """

    def __init__(self, storage: Storage, rules_path=None):
        self.storage = storage
        self.rules_path = rules_path
        self.jobs: dict[str, Job] = {}
        self._lock = threading.Lock()
        self._queue: "queue.Queue[str]" = queue.Queue()
        self._jobs_path = storage.root / "jobs.json"
        self._recover()
        self._worker = threading.Thread(target=self._run, name="at-generation", daemon=True)
        self._worker.start()

    def _recover(self) -> None:
        for record in self.storage.read_json(self._jobs_path, []):
            job = Job(**record)
            if job.state in (JobState.QUEUED, JobState.RUNNING):
                job.state = JobState.FAILED
                job.error = "interrupted by restart"
                job.finished = time.time()
            self.jobs[job.job_id] = job
        if self.jobs:
            self._persist()

    def _persist(self) -> None:
        records = [asdict(job) for job in self.jobs.values()]
        self.storage.write_json_atomic(self._jobs_path, records)

    def submit(self, uid: int, unit_id: str) -> Job:
        job = Job(job_id=uuid.uuid4().hex, uid=uid, unit_id=unit_id)
        with self._lock:
            self.jobs[job.job_id] = job
            self._persist()
        self._queue.put(job.job_id)
        return job

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self.jobs.get(job_id)

    def wait_idle(self, timeout: float = 30.0) -> None:
        deadline = time.time() + timeout
        while time.time() < deadline:
            with self._lock:
                busy = any(
                    j.state in (JobState.QUEUED, JobState.RUNNING) for j in self.jobs.values()
                )
            if not busy:
                return
            time.sleep(0.02)

    def _run(self) -> None:
        while True:
            job_id = self._queue.get()
            with self._lock:
                job = self.jobs.get(job_id)
                if job is None:
                    continue
                job.state = JobState.RUNNING
                job.started = time.time()
                self._persist()
            try:
                generate_for_user(self.storage, job.uid, job.unit_id, self.rules_path)
                with self._lock:
                    job.state = JobState.DONE
                    job.result = f"/api/device/{job.unit_id}"
                    job.finished = time.time()
                    self._persist()
            except Exception as exc:
                with self._lock:
                    job.state = JobState.FAILED
                    job.error = str(exc)
                    job.finished = time.time()
                    self._persist()


# ---------------------------------------------------------------------------
# Application


def create_app(
    storage: Storage | None = None,
    rules_path: str | Path | None = None,
    webui_dir: str | Path | None = None,
) -> FastAPI:
    storage = storage if storage is not None else Storage()
    rules_path = rules_path if rules_path is not None else rules_path_from_env()
    app = FastAPI(title="Assistance tool service")
    runner = JobRunner(storage, rules_path)
    app.state.storage = storage
    app.state.runner = runner
    questionnaire = load_questionnaire()

    def current_uid(authorization: str | None = Header(default=None)) -> int:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(401, "missing bearer token")
        try:
            return storage.resolve_token(authorization[len("Bearer "):].strip())
        except AuthError as exc:
            raise HTTPException(401, str(exc)) from exc

    # -- auth ----------------------------------------------------------------

    @app.post("/api/register", status_code=201)
    def register(payload: dict = Body(...)):
        try:
            uid = storage.register(
                str(payload.get("name", "")),
                str(payload.get("surname", "")),
                str(payload.get("email", "")),
                str(payload.get("password", "")),
            )
        except DuplicateEmailError as exc:
            raise HTTPException(409, str(exc)) from exc
        except AuthError as exc:
            raise HTTPException(422, str(exc)) from exc
        return {"uid": uid}

    @app.post("/api/login")
    def login(payload: dict = Body(...)):
        try:
            token = storage.login(
                str(payload.get("email", "")), str(payload.get("password", ""))
            )
        except AuthError as exc:
            raise HTTPException(401, str(exc)) from exc
        return {"token": token, "uid": storage.resolve_token(token)}

    # -- profile ----------------------------------------------------------------

    @app.get("/api/profile")
    def get_profile(uid: int = Depends(current_uid)):
        facts = storage.load_profile_facts(uid)
        payload = profile_to_payload(facts_to_profile(uid, facts))
        payload["standard"] = len(facts) == 0
        return payload

    @app.put("/api/profile")
    def put_profile(payload: dict = Body(...), uid: int = Depends(current_uid)):
        profile = profile_from_payload(uid, payload)
        violations = validate_profile(profile)
        if violations:
            raise HTTPException(
                422,
                {"violations": [{"field": v.field, "rule": v.rule, "detail": v.detail} for v in violations]},
            )
        storage.save_profile_facts(uid, profile_to_facts(profile))
        return Response(status_code=204)

    @app.post("/api/profile/quiz")
    def submit_quiz(payload: dict = Body(...), uid: int = Depends(current_uid)):
        raw_answers = payload.get("answers") or {}
        answers = {}
        for key, value in raw_answers.items():
            try:
                answers[int(key)] = Choice(value)
            except (ValueError, TypeError):
                raise HTTPException(422, f"bad answer for item {key!r}: {value!r}") from None
        try:
            reasoning = Reasoning(payload.get("reasoning"))
        except ValueError:
            raise HTTPException(
                422, "reasoning must be 'inductive' or 'deductive'"
            ) from None
        try:
            personality = classify(score(AnswerSheet(answers), questionnaire), reasoning)
        except IncompleteSheetError as exc:
            raise HTTPException(422, {"missing_items": exc.missing}) from exc

        # Most recent submission wins: overwrite whatever personality the
        # stored profile had.
        profile = facts_to_profile(uid, storage.load_profile_facts(uid))
        profile.personality = personality
        storage.save_profile_facts(uid, profile_to_facts(profile))
        return profile_to_payload(profile)["personality"]

    # -- units ---------------------------------------------------------------

    def _allocate_unit_id(uid: int) -> str:
        existing = set(storage.list_units(uid))
        index = 1
        while f"u{index}" in existing:
            index += 1
        return f"u{index}"

    def _unit_or_404(uid: int, unit_id: str) -> TeachingUnit:
        if not storage.unit_exists(uid, unit_id):
            raise HTTPException(404, f"no such unit: {unit_id}")
        return facts_to_unit(unit_id, storage.load_unit_facts(uid, unit_id))

    def _validate_and_save(uid: int, unit: TeachingUnit) -> None:
        violations = validate_unit(unit)
        if violations:
            raise HTTPException(
                422,
                {"violations": [{"field": v.field, "rule": v.rule, "detail": v.detail} for v in violations]},
            )
        storage.save_unit_facts(uid, unit.unit_id, unit_to_facts(unit))

    @app.post("/api/units", status_code=201)
    def create_unit(payload: dict = Body(...), uid: int = Depends(current_uid)):
        unit_id = payload.get("unit_id") or _allocate_unit_id(uid)
        if storage.unit_exists(uid, unit_id):
            raise HTTPException(409, f"unit already exists: {unit_id}")
        unit = unit_from_payload(unit_id, payload)
        _validate_and_save(uid, unit)
        return {"unit_id": unit_id}

    @app.get("/api/units")
    def list_units(uid: int = Depends(current_uid)):
        units = [
            unit_to_payload(facts_to_unit(unit_id, storage.load_unit_facts(uid, unit_id)))
            for unit_id in storage.list_units(uid)
        ]
        return {"units": units}

    @app.get("/api/units/{unit_id}")
    def get_unit(unit_id: str, uid: int = Depends(current_uid)):
        return unit_to_payload(_unit_or_404(uid, unit_id))

    @app.put("/api/units/{unit_id}")
    def update_unit(unit_id: str, payload: dict = Body(...), uid: int = Depends(current_uid)):
        _unit_or_404(uid, unit_id)
        _validate_and_save(uid, unit_from_payload(unit_id, payload))
        return Response(status_code=204)

    @app.delete("/api/units/{unit_id}")
    def delete_unit(unit_id: str, uid: int = Depends(current_uid)):
        _unit_or_404(uid, unit_id)
        storage.delete_unit(uid, unit_id)
        return Response(status_code=204)

    # -- generation: enqueue, poll, fetch ---------------------------------------

    @app.post("/api/units/{unit_id}/generate", status_code=202)
    def generate(unit_id: str, uid: int = Depends(current_uid)):
        _unit_or_404(uid, unit_id)
        job = runner.submit(uid, unit_id)
        return {"job_id": job.job_id, "state": job.state}

    @app.get("/api/jobs/{job_id}")
    def poll_job(job_id: str, uid: int = Depends(current_uid)):
        job = runner.get(job_id)
        if job is None or job.uid != uid:
            raise HTTPException(404, "no such job")
        return {
            "job_id": job.job_id,
            "unit_id": job.unit_id,
            "state": job.state,
            "result": job.result,
            "error": job.error,
        }

    @app.get("/api/device/{unit_id}")
    def device_listing(unit_id: str, uid: int = Depends(current_uid)):
        device_dir = storage.device_dir(uid, unit_id)
        if not device_dir.is_dir():
            raise HTTPException(404, "device not generated")
        files = sorted(
            str(p.relative_to(device_dir)) for p in device_dir.rglob("*") if p.is_file()
        )
        return {"unit_id": unit_id, "files": files}

    @app.get("/api/device/{unit_id}/{file_path:path}")
    def device_file(unit_id: str, file_path: str, uid: int = Depends(current_uid)):
        device_dir = storage.device_dir(uid, unit_id)
        target = (device_dir / file_path).resolve()
        if not str(target).startswith(str(device_dir.resolve()) + "/") or not target.is_file():
            raise HTTPException(404, "no such device file")
        media_type = "text/html" if target.suffix == ".html" else "text/plain"
        return FileResponse(target, media_type=media_type)

    # -- optional static client -------------------------------------------------

    resolved_webui = _resolve_webui_dir(webui_dir)
    if resolved_webui is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=resolved_webui, html=True), name="webui")

    return app


def _resolve_webui_dir(explicit: str | Path | None) -> Path | None:
    import os

    candidates = []
    if explicit:
        candidates.append(Path(explicit))
    env = os.environ.get("AT_WEBUI_DIR")
    if env:
        candidates.append(Path(env))
    candidates.append(Path("frontend") / "dist")
    for candidate in candidates:
        if candidate.is_dir():
            return candidate
    return None
