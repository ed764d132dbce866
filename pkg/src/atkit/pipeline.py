"""End-to-end generation from stored state.

This is the single code path behind both the HTTP generate endpoint and
the headless ``at gen`` command, so the two produce byte-identical
bundles for identical stored state.
"""

from __future__ import annotations

import os
import shutil
from pathlib import Path

from .device import generate_device, write_bundle
from .profile import facts_to_profile
from .rules import load_rulebase
from .storage import Storage
from .units import facts_to_unit, load_method


def rules_path_from_env() -> str | None:
    return os.environ.get("AT_RULES") or None


def generate_for_user(
    storage: Storage,
    uid: int,
    unit_id: str,
    rules_path: str | Path | None = None,
) -> Path:
    """Generate and write the device for one stored unit; returns its root.

    Regeneration wipes the previous device directory first, so repeated
    runs are byte-identical rather than accumulating stale files.
    """
    profile = facts_to_profile(uid, storage.load_profile_facts(uid))
    unit = facts_to_unit(unit_id, storage.load_unit_facts(uid, unit_id))
    method = load_method(unit.method_id)
    rulebase = load_rulebase(rules_path if rules_path is not None else rules_path_from_env())
    bundle = generate_device(profile, unit, method, rulebase)

    device_dir = storage.device_dir(uid, unit_id)
    with storage.user_lock(uid):
        if device_dir.exists():
            shutil.rmtree(device_dir)
        write_bundle(bundle, device_dir)
    return device_dir
