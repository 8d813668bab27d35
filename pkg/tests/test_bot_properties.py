"""Randomized mock-campaign schedules must never violate the safety rules:
per-user message caps, opt-out finality, legal phase transitions, append-only
ordering, and replay equality.
"""

import pytest
from hypothesis import given, settings, strategies as st

from biaslens.bots.engine import ConversationPolicy, replay_events, run_campaign_tick
from biaslens.bots.platform import MockPlatform
from biaslens.bots.types import (
    Campaign,
    CampaignCaps,
    CampaignStatus,
    EngagementEvent,
    EventKind,
    LEGAL_TRANSITIONS,
    Phase,
)
from biaslens.service.events import InMemoryEventStore
from biaslens.timeutil import add_hours, hours_between

EPOCH = "2026-01-05T00:00:00Z"

REPLY_TEXTS = {
    "opinion": "creo que las fotos cuentan otra historia",
    "evangelist": "voy a compartir esto con mis amigos",
    "defender": "los medios tienen razón en usar esas fotos",
    "optout": "basta ya, no me escribas",
    "junk": "???",
    "empty": "",
}

N_TICKS = 8


@st.composite
def campaign_runs(draw):
    n_users = draw(st.integers(min_value=1, max_value=6))
    interval = draw(st.sampled_from([0.25, 1.0]))
    caps = CampaignCaps(
        exposures_per_hour=draw(st.sampled_from([1, 2, 10])),
        messages_per_user=draw(st.sampled_from([1, 2, 3])),
        idle_timeout_hours=draw(st.sampled_from([1.0, 72.0])),
        target_limit=draw(st.integers(min_value=1, max_value=n_users)),
    )
    schedule = {}
    for tick in range(1, N_TICKS):
        batch = draw(
            st.lists(
                st.tuples(
                    st.integers(min_value=1, max_value=n_users),
                    st.sampled_from(sorted(REPLY_TEXTS)),
                ),
                max_size=4,
            )
        )
        if batch:
            schedule[str(tick)] = [
                {"user_id": f"u{uid:02d}", "text": REPLY_TEXTS[kind]}
                for uid, kind in batch
            ]
    return n_users, interval, caps, schedule


def build_run(n_users, interval, caps, schedule):
    platform = MockPlatform(
        {
            "epoch": EPOCH,
            "tick_interval_hours": interval,
            "users": [
                {"user_id": f"u{i:02d}", "handle": f"@user{i:02d}"}
                for i in range(1, n_users + 1)
            ],
            "posts": [
                {
                    "post_id": f"s{i:03d}",
                    "user_id": f"u{i:02d}",
                    "text": "sube el #Gasolinazo otra vez",
                    "hashtags": ["#Gasolinazo"],
                    "at": add_hours(EPOCH, -i / 60.0),
                }
                for i in range(1, n_users + 1)
            ],
            "replies": schedule,
        }
    )
    campaign = Campaign(
        campaign_id="prop",
        story_id="story-1",
        macro_id="m1",
        terms=("#Gasolinazo",),
        status=CampaignStatus.ACTIVE,
        caps=caps,
    )
    return platform, campaign


def run_and_check(n_users, interval, caps, schedule, policy):
    platform, campaign = build_run(n_users, interval, caps, schedule)
    store = InMemoryEventStore()
    for _ in range(N_TICKS):
        run_campaign_tick(campaign, platform, store, policy)
        platform.advance()
    events = store.read("prop")

    # append-only, strictly increasing ids
    ids = [e.event_id for e in events]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)

    send_kinds = (EventKind.EXPOSURE_POSTED, EventKind.BOT_REPLY_SENT)

    # per-user bot-initiated message cap
    for uid in {e.user_id for e in events}:
        bot_sends = [
            e
            for e in events
            if e.user_id == uid
            and e.kind in send_kinds
            and not e.payload.get("manual", False)
        ]
        assert len(bot_sends) <= caps.messages_per_user

    # every platform call is recorded as an event
    assert len(platform.outbox) == sum(1 for e in events if e.kind in send_kinds)

    # opted-out users are never messaged afterwards
    for i, event in enumerate(events):
        if event.kind != EventKind.OPTED_OUT:
            continue
        later = [
            e
            for e in events[i + 1 :]
            if e.user_id == event.user_id and e.kind in send_kinds
        ]
        assert later == []

    # sliding-window hourly exposure cap
    exposures = [e for e in events if e.kind == EventKind.EXPOSURE_POSTED]
    for e in exposures:
        window = [
            x for x in exposures if 0.0 <= hours_between(x.at, e.at) < 1.0
        ]
        assert len(window) <= caps.exposures_per_hour

    # all transitions legal: replay raises on violations; also walk per user
    states = replay_events(events)
    for uid, state in states.items():
        assert isinstance(state.phase, Phase)
    _assert_legal_walk(events)

    # replay equality through the wire format
    round_tripped = [EngagementEvent.from_doc(e.to_doc()) for e in events]
    assert replay_events(round_tripped) == states
    return events


def _assert_legal_walk(events):
    phase: dict[str, Phase] = {}
    moves = {
        EventKind.TARGETED: lambda p: Phase.CREATED,
        EventKind.EXPOSURE_POSTED: lambda p: Phase.AWAITING_OPINION,
        EventKind.HANDED_OFF: lambda p: Phase.HANDED_TO_ACTIVIST,
        EventKind.OPTED_OUT: lambda p: Phase.CLOSED,
        EventKind.CLOSED: lambda p: Phase.CLOSED,
    }
    for event in events:
        uid = event.user_id
        if event.kind == EventKind.TARGETED:
            assert uid not in phase
            phase[uid] = Phase.CREATED
            continue
        assert uid in phase
        before = phase[uid]
        if event.kind == EventKind.EXPOSURE_POSTED:
            assert before == Phase.CREATED
            phase[uid] = Phase.AWAITING_OPINION
        elif event.kind == EventKind.BOT_REPLY_SENT and event.payload.get("kind") == "action_question":
            assert Phase.AWAITING_ACTION_IDEAS in LEGAL_TRANSITIONS[before]
            phase[uid] = Phase.AWAITING_ACTION_IDEAS
        elif event.kind in moves:
            after = moves[event.kind](before)
            assert after in LEGAL_TRANSITIONS[before], f"{before} -> {after}"
            phase[uid] = after


@pytest.fixture(scope="module")
def policy():
    return ConversationPolicy.default_spanish(macro_url="https://host.example/s/story-1")


@given(run=campaign_runs())
@settings(max_examples=150, deadline=None)
def test_random_schedules_respect_safety_rules(run, policy):
    run_and_check(*run, policy)
