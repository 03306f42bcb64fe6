from __future__ import annotations

import itertools
import json
from datetime import timedelta

import pytest
from fastapi.testclient import TestClient

from paracurate.admin import add_user
from paracurate.api import create_app, hash_secret
from paracurate.config import SystemConfig
from paracurate.models import STATUS_ASSIGNED
from paracurate.store import MemoryStore, set_language_direction
from paracurate.tasks import assign_tasks
from paracurate.workflow import advance_all

from conftest import START, StepClock, make_user, seed_dataset


def counter_tokens():
    counter = itertools.count()
    return lambda: f"token-{next(counter):04d}"


@pytest.fixture
def rig(tmp_path):
    """Store with one dataset, three users, and a running app client."""
    store = MemoryStore()
    clock = StepClock()
    # amy is the only translator so she holds every translation task;
    # bob and cyn are verifier-only at levels 2 and 3.
    for name, translator, level in (("amy", True, 0), ("bob", False, 2), ("cyn", False, 3)):
        add_user(store, make_user(name, translator=translator, level=level,
                                  sources=("eng_Latn", "fra_Latn"),
                                  secret_hash=hash_secret(f"pw-{name}")))
    seed_dataset(store, tmp_path, lines=2)
    set_language_direction(store, "nqo_Nkoo", "rtl")
    app = create_app(store, SystemConfig(), clock=clock, token_factory=counter_tokens())
    client = TestClient(app)
    return store, clock, client


def login(client, user="amy") -> dict[str, str]:
    response = client.post("/v1/auth/login", json={"userId": user, "secret": f"pw-{user}"})
    assert response.status_code == 200
    return {"Authorization": f"Bearer {response.json()['token']}"}


def first_assignment(store, clock, user_id):
    advance_all(store)
    pairs = assign_tasks(store, clock.now)
    mine = [task_id for task_id, uid in pairs if uid == user_id]
    return mine


# --- auth -----------------------------------------------------------------------


def test_ping_needs_no_auth(rig):
    _, _, client = rig
    assert client.get("/v1/ping").json() == {"status": "ok"}


def test_login_bad_credentials(rig):
    _, _, client = rig
    response = client.post("/v1/auth/login", json={"userId": "amy", "secret": "wrong"})
    assert response.status_code == 401


def test_workspace_requires_auth(rig):
    _, _, client = rig
    assert client.get("/v1/me/workspace").status_code == 401
    assert client.get("/v1/me/workspace", headers={"Authorization": "Bearer junk"}).status_code == 401


def test_token_dies_on_logout(rig):
    _, _, client = rig
    headers = login(client)
    assert client.get("/v1/me/workspace", headers=headers).status_code == 200
    client.post("/v1/auth/logout", headers=headers)
    assert client.get("/v1/me/workspace", headers=headers).status_code == 401


def test_token_expires(rig):
    _, clock, client = rig
    headers = login(client)
    clock.jump(SystemConfig().token_ttl + timedelta(minutes=1))
    assert client.get("/v1/me/workspace", headers=headers).status_code == 401


# --- config/languages -------------------------------------------------------------


def test_language_direction_endpoints(rig):
    _, _, client = rig
    body = client.get("/v1/config/languages").json()
    assert body["rtl"] == ["nqo_Nkoo"] and body["default"] == "ltr"
    assert client.get("/v1/config/languages/nqo_Nkoo").json()["direction"] == "rtl"
    assert client.get("/v1/config/languages/zul_Latn").json()["direction"] == "ltr"
    assert client.get("/v1/config/languages/not-a-tag").status_code == 400


# --- workspace ---------------------------------------------------------------------


def test_empty_workspace(rig):
    _, _, client = rig
    view = client.get("/v1/me/workspace", headers=login(client)).json()
    assert view["tasks"] == []
    assert view["counters"] == {
        "translation": {"open": 0, "completed": 0},
        "copyedit": {"open": 0, "completed": 0},
    }


def test_workspace_translation_panes_and_directions(rig):
    store, clock, client = rig
    assert first_assignment(store, clock, "amy")
    view = client.get("/v1/me/workspace", headers=login(client)).json()
    assert view["counters"]["translation"]["open"] >= 1
    item = view["tasks"][0]
    assert item["task"]["type"] == "translation"
    assert [s["language"] for s in item["sources"]] == ["eng_Latn", "fra_Latn"]
    assert all(s["direction"] == "ltr" for s in item["sources"])
    assert item["targetLanguage"] == {"code": "nqo_Nkoo", "direction": "rtl"}
    assert item["seedText"] is None
    assert view["languageDirections"]["nqo_Nkoo"] == "rtl"


def test_workspace_excludes_unavailable_preferred_language(rig, tmp_path):
    store, clock, client = rig
    # amy prefers eng+fra, but this dataset only carries eng.
    from paracurate.store import put_segment, write_corpus_file  # noqa: F401
    from paracurate.admin import create_workflows, load_dataset

    src = tmp_path / "second"
    write_corpus_file(src / "eng_Latn", ["only english"])
    load_dataset(store, src, "second", ["eng_Latn"], "nqo_Nkoo")
    create_workflows(store, "second", priority_start=1000)
    advance_all(store)
    pairs = assign_tasks(store, clock.now)
    (holder,) = [uid for task_id, uid in pairs if task_id.startswith("second/")]
    view = client.get("/v1/me/workspace", headers=login(client, holder)).json()
    langs = {s["language"] for item in view["tasks"] for s in item["sources"]
             if item["task"]["datasetId"] == "second"}
    assert langs == {"eng_Latn"}


def complete_translations(store, clock, client):
    """Drive both segments through translation via the API, per assignee."""
    advance_all(store)
    pairs = assign_tasks(store, clock.now)
    for i, (task_id, user_id) in enumerate(pairs):
        headers = login(client, user_id)
        response = client.post(
            "/v1/submissions",
            headers=headers,
            json={
                "envelopes": [
                    {
                        "clientOpId": f"{user_id}-op-{i}",
                        "taskId": task_id,
                        "action": "submit",
                        "text": f"draft {i}",
                        "clientTimestamp": "2024-01-01T00:00:00+00:00",
                    }
                ]
            },
        )
        assert response.json()["results"][0]["result"] == "applied"


def test_copyedit_view_carries_seed(rig):
    store, clock, client = rig
    complete_translations(store, clock, client)
    advance_all(store)
    pairs = assign_tasks(store, clock.now)
    assert pairs, "copyedit round one should have been assigned"
    holders = {uid for _, uid in pairs}
    for holder in holders:
        view = client.get("/v1/me/workspace", headers=login(client, holder)).json()
        copyedits = [i for i in view["tasks"] if i["task"]["type"] == "copyedit"]
        assert copyedits
        for item in copyedits:
            assert item["seedVersionLabel"] == "v1"
            assert item["seedText"].startswith("draft")


# --- submissions ---------------------------------------------------------------------


def envelope(op_id, task_id, text="text", action="submit", ts="2024-01-01T00:00:00+00:00"):
    env = {"clientOpId": op_id, "taskId": task_id, "action": action, "clientTimestamp": ts}
    if action == "submit":
        env["text"] = text
    return env


def test_duplicate_envelope_applies_once(rig):
    store, clock, client = rig
    (task_id,) = first_assignment(store, clock, "amy")[:1]
    headers = login(client)
    env = envelope("op-1", task_id)
    first = client.post("/v1/submissions", headers=headers, json={"envelopes": [env]})
    second = client.post("/v1/submissions", headers=headers, json={"envelopes": [env]})
    assert first.json()["results"][0]["result"] == "applied"
    assert second.json()["results"][0]["result"] == "duplicate"
    versions = store.get("datasets", "tiny/000000")["targetVersions"]
    assert len(versions) == 1


def test_batch_isolates_lease_violation(rig):
    """A mid-batch expired lease fails that envelope alone."""
    store, clock, client = rig
    task_ids = first_assignment(store, clock, "amy")
    assert len(task_ids) == 2

    # Force the second task's lease into the past.
    doc = store.get("annotation-tasks", task_ids[1])
    rev = doc.pop("_rev")
    doc["leaseExpiresAt"] = "2023-12-31T00:00:00+00:00"
    store.replace("annotation-tasks", task_ids[1], doc, rev)

    headers = login(client)
    batch = [
        envelope("op-a", task_ids[0], ts="2024-01-01T00:00:00+00:00"),
        envelope("op-b", task_ids[1], ts="2024-01-01T00:00:01+00:00"),
        envelope("op-c", "tiny/000009/translation", ts="2024-01-01T00:00:02+00:00"),
    ]
    results = client.post("/v1/submissions", headers=headers, json={"envelopes": batch}).json()["results"]
    assert [r["result"] for r in results] == ["applied", "lease-violation", "not-found"]
    assert [r["status"] for r in results] == [200, 409, 404]


def test_expired_lease_rejected_as_lease_violation(rig):
    store, clock, client = rig
    (task_id,) = first_assignment(store, clock, "amy")[:1]
    headers = login(client)
    clock.jump(SystemConfig().lease_period + timedelta(hours=1))
    results = client.post(
        "/v1/submissions", headers=headers, json={"envelopes": [envelope("op-x", task_id)]}
    ).json()["results"]
    assert results[0]["result"] == "lease-violation"
    assert results[0]["status"] == 409
    # The op id is burned: a retry is a duplicate, not a second attempt.
    retry = client.post(
        "/v1/submissions", headers=headers, json={"envelopes": [envelope("op-x", task_id)]}
    ).json()["results"]
    assert retry[0]["result"] == "duplicate"


def test_malformed_envelope_flagged_alone(rig):
    store, clock, client = rig
    (task_id,) = first_assignment(store, clock, "amy")[:1]
    headers = login(client)
    batch = [
        {"clientOpId": "bad-1", "taskId": task_id, "action": "submit",
         "clientTimestamp": "2024-01-01T00:00:00+00:00"},  # submit without text
        envelope("good-1", task_id, ts="2024-01-01T00:00:01+00:00"),
    ]
    results = client.post("/v1/submissions", headers=headers, json={"envelopes": batch}).json()["results"]
    assert results[0]["result"] == "malformed" and results[0]["status"] == 400
    assert results[1]["result"] == "applied"


def test_skip_via_api(rig):
    store, clock, client = rig
    (task_id,) = first_assignment(store, clock, "amy")[:1]
    headers = login(client)
    results = client.post(
        "/v1/submissions",
        headers=headers,
        json={"envelopes": [envelope("skip-1", task_id, action="skip")]},
    ).json()["results"]
    assert results[0]["result"] == "applied"
    assert store.get("annotation-tasks", task_id)["status"] == "unassigned"


def test_envelopes_applied_in_timestamp_order(rig):
    store, clock, client = rig
    task_ids = first_assignment(store, clock, "amy")
    headers = login(client)
    # Delivered out of order; the later timestamp must be applied second.
    batch = [
        envelope("late", task_ids[1], text="second", ts="2024-01-01T00:00:05+00:00"),
        envelope("early", task_ids[0], text="first", ts="2024-01-01T00:00:01+00:00"),
    ]
    results = client.post("/v1/submissions", headers=headers, json={"envelopes": batch}).json()["results"]
    assert [r["result"] for r in results] == ["applied", "applied"]
    v_first = store.get("datasets", "tiny/000000")["targetVersions"][0]["timestamp"]
    v_second = store.get("datasets", "tiny/000001")["targetVersions"][0]["timestamp"]
    assert v_first < v_second


# --- history rule never leaks other-round results -------------------------------


def test_workspace_never_shows_history_barred_segments(rig):
    """Nobody sees a segment they already completed a task for."""
    import random as random_mod

    from paracurate.simulate import SimulationBehavior, run_simulation
    from paracurate.tasks import completions_by_user

    store, clock, client = rig
    run_simulation(store, random_mod.Random(5), SimulationBehavior(max_passes=40))
    history = completions_by_user(store)
    for user in ("amy", "bob", "cyn"):
        view = client.get("/v1/me/workspace", headers=login(client, user)).json()
        shown = {(i["task"]["datasetId"], i["task"]["segmentId"]) for i in view["tasks"]}
        assert shown.isdisjoint(history.get(user, set()))


# --- periodic manager pass --------------------------------------------------------


def test_manager_pass_moves_work_forward(rig):
    from paracurate.api import run_manager_pass

    store, clock, _ = rig
    run_manager_pass(store, SystemConfig(), clock.now)
    assigned = store.list("annotation-tasks", {"status": STATUS_ASSIGNED})
    assert len(assigned) == 2  # both translation tasks created and leased
    run_manager_pass(store, SystemConfig(), clock.now)
    assert len(store.list("annotation-tasks")) == 2  # idempotent


# --- offline replay equivalence (single trace; the acceptance suite runs 100) ------


def canonical_state(store) -> str:
    collections = ["datasets", "workflows", "annotation-tasks", "users", "config",
                   "submission-dedup"]
    state = {}
    for name in collections:
        docs = []
        for doc in store.list(name):
            doc = dict(doc)
            doc.pop("_rev", None)
            docs.append(doc)
        state[name] = docs
    return json.dumps(state, sort_keys=True, ensure_ascii=False)


def build_world(tmp_path, suffix):
    store = MemoryStore()
    clock = StepClock()
    for name, level in (("amy", 0), ("bob", 2)):
        add_user(store, make_user(name, level=level, secret_hash=hash_secret(f"pw-{name}")))
    seed_dataset(store, tmp_path / suffix, lines=2)
    app = create_app(store, SystemConfig(), clock=clock, token_factory=counter_tokens())
    return store, clock, TestClient(app)


def test_offline_replay_matches_online_run(tmp_path):
    online_store, online_clock, online_client = build_world(tmp_path, "online")
    offline_store, offline_clock, offline_client = build_world(tmp_path, "offline")

    ops = None
    for store, clock, client in ((online_store, online_clock, online_client),
                                 (offline_store, offline_clock, offline_client)):
        advance_all(store)
        assign_tasks(store, clock.now)
        headers = login(client, "amy")
        if ops is None:
            view = client.get("/v1/me/workspace", headers=headers).json()
            ops = [
                envelope(f"op-{i}", item["task"]["taskId"], text=f"text {i}",
                         ts=f"2024-01-01T00:00:0{i}+00:00")
                for i, item in enumerate(view["tasks"])
            ]
        if client is online_client:
            # Online: one request per op, in order.
            for op in ops:
                result = client.post("/v1/submissions", headers=headers,
                                     json={"envelopes": [op]}).json()["results"]
                assert result[0]["result"] == "applied"
        else:
            # Offline: queue replayed twice (crash-restart), duplicates included.
            replay = ops + ops
            client.post("/v1/submissions", headers=headers, json={"envelopes": replay})
            client.post("/v1/submissions", headers=headers, json={"envelopes": replay})

    assert canonical_state(online_store) == canonical_state(offline_store)
