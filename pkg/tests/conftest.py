from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from paracurate.admin import add_user, create_workflows, load_dataset
from paracurate.models import UserProfile
from paracurate.store import MemoryStore, write_corpus_file

START = datetime(2024, 1, 1, tzinfo=timezone.utc)


class StepClock:
    """Deterministic clock: each call advances by a fixed step."""

    def __init__(self, start: datetime = START, step: timedelta = timedelta(seconds=1)):
        self.now = start
        self.step = step

    def __call__(self) -> datetime:
        current = self.now
        self.now = current + self.step
        return current

    def jump(self, delta: timedelta) -> None:
        self.now += delta


@pytest.fixture
def store():
    return MemoryStore()


def make_user(
    user_id: str,
    translator: bool = True,
    level: int = 0,
    max_open: int = 5,
    sources: tuple[str, ...] = ("eng_Latn",),
    secret_hash: str | None = None,
) -> UserProfile:
    return UserProfile(
        user_id=user_id,
        is_active_translator=translator,
        is_active_verifier=level > 0,
        verifier_level=level,
        preferred_source_languages=list(sources),
        ui_language="eng_Latn",
        max_open_tasks=max_open,
        secret_hash=secret_hash,
    )


@pytest.fixture
def crew(store):
    """Four users: one translator-only, verifiers at levels 1..3."""
    users = [
        make_user("ada", translator=True, level=0),
        make_user("bob", translator=True, level=1),
        make_user("cyn", translator=True, level=2),
        make_user("dee", translator=True, level=3),
    ]
    for user in users:
        add_user(store, user)
    return users


def seed_dataset(store, tmp_path, dataset_id="tiny", lines=3, with_workflows=True):
    """Import a small English/French parallel dataset and its workflows."""
    src = tmp_path / "src" / dataset_id
    eng = [f"english sentence {i}" for i in range(lines)]
    fra = [f"phrase française {i}" for i in range(lines)]
    write_corpus_file(src / "eng_Latn", eng)
    write_corpus_file(src / "fra_Latn", fra)
    load_dataset(store, src, dataset_id, ["eng_Latn", "fra_Latn"], "nqo_Nkoo")
    if with_workflows:
        create_workflows(store, dataset_id)
    return eng, fra
