"""Supervised bot-campaign engine.

Everything a campaign does is an append-only EngagementEvent; conversation
states are a pure fold over the log. The tick runner decides what to do from
the folded state, performs the platform calls, and applies each new event
through the same fold, so incremental state and replayed state agree by
construction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

from ..errors import (
    CapExceededError,
    PlatformSendError,
    StaleStateError,
)
from ..timeutil import hours_between
from .lexicon import CueLexicon, classify_response, matched_opt_out
from .platform import PlatformClient, PostMatch
from .templates import MessageTemplates
from .types import (
    ActionClassification,
    Campaign,
    CampaignCaps,
    CampaignStatus,
    ConversationState,
    EngagementEvent,
    EventKind,
    Phase,
    TargetUser,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConversationPolicy:
    """Per-campaign conversation configuration."""

    lexicon: CueLexicon
    templates: MessageTemplates
    macro_url: str = ""
    exposure_template: str = "exposure_v1"
    action_template: str = "action_question_v1"

    @classmethod
    def default_spanish(cls, macro_url: str = "") -> "ConversationPolicy":
        return cls(
            lexicon=CueLexicon.default_spanish(),
            templates=MessageTemplates.default_spanish(),
            macro_url=macro_url,
        )


class EventSequencer:
    """Allocates strictly increasing event ids within one campaign."""

    def __init__(self, campaign_id: str, next_id: int = 1):
        self.campaign_id = campaign_id
        self.next_id = next_id

    def make(self, kind: EventKind, user_id: str, payload: dict, at: str) -> EngagementEvent:
        event = EngagementEvent(
            event_id=self.next_id,
            campaign_id=self.campaign_id,
            kind=kind,
            user_id=user_id,
            payload=payload,
            at=at,
        )
        self.next_id += 1
        return event


# --------------------------------------------------------------------------
# Event folding
# --------------------------------------------------------------------------

def fold_event(states: dict, event: EngagementEvent) -> dict:
    """Apply one event to the conversation-state map, returning a new map.

    Raises IllegalTransitionError on any event sequence that would move a
    conversation outside the legal phase table.
    """
    states = dict(states)
    uid = event.user_id
    payload = event.payload
    kind = event.kind

    if kind == EventKind.TARGETED:
        target = TargetUser(
            user_id=uid,
            handle=payload["handle"],
            matched_terms=tuple(payload["matched_terms"]),
            matched_post_id=payload["matched_post_id"],
            discovered_at=event.at,
        )
        states[uid] = ConversationState(target=target, last_activity=event.at)
    elif kind == EventKind.EXPOSURE_POSTED:
        st = states[uid].with_phase(Phase.EXPOSED).with_phase(Phase.AWAITING_OPINION)
        st = st.with_message("out", payload["text"], event.at)
        states[uid] = replace(st, messages_sent=st.messages_sent + 1)
    elif kind == EventKind.REPLY_RECEIVED:
        states[uid] = states[uid].with_message("in", payload["text"], event.at)
    elif kind == EventKind.BOT_REPLY_SENT:
        st = states[uid]
        if payload.get("kind") == "action_question":
            st = st.with_phase(Phase.AWAITING_ACTION_IDEAS)
            st = st.with_message("out", payload["text"], event.at)
            st = replace(st, messages_sent=st.messages_sent + 1)
        else:
            # Manual handoff reply: recorded, but not a bot-initiated message.
            st = st.with_message("out", payload["text"], event.at)
        states[uid] = st
    elif kind == EventKind.CLASSIFIED:
        states[uid] = replace(
            states[uid],
            classification=ActionClassification(
                label=payload["label"], matched_cues=tuple(payload["matched_cues"])
            ),
        )
    elif kind == EventKind.HANDED_OFF:
        states[uid] = states[uid].with_phase(Phase.HANDED_TO_ACTIVIST)
    elif kind == EventKind.OPTED_OUT:
        states[uid] = replace(states[uid].with_phase(Phase.CLOSED), opted_out=True)
    elif kind == EventKind.CLOSED:
        states[uid] = states[uid].with_phase(Phase.CLOSED)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown event kind {kind}")
    return states


def replay_events(events) -> dict:
    """Reconstruct all conversation states from an event log."""
    states: dict = {}
    for event in events:
        states = fold_event(states, event)
    return states


# --------------------------------------------------------------------------
# Spec operations
# --------------------------------------------------------------------------

def discover_targets(
    platform: PlatformClient, terms, limit: int, now: str | None = None
) -> list[TargetUser]:
    """Find up to ``limit`` distinct users whose recent posts match a term.

    Ordered by most recent matching post, then user_id; matched terms from
    multiple posts are merged.
    """
    if not terms:
        raise ValueError("terms must be nonempty")
    now = now or platform.now()
    matches: list[PostMatch] = platform.search_posts(terms)

    per_user: dict[str, dict] = {}
    for m in matches:
        entry = per_user.setdefault(
            m.post.user_id,
            {"handle": m.post.handle, "terms": [], "best_at": "", "best_post": ""},
        )
        for t in m.matched_terms:
            if t not in entry["terms"]:
                entry["terms"].append(t)
        if (m.post.at, m.post.post_id) > (entry["best_at"], entry["best_post"]):
            entry["best_at"] = m.post.at
            entry["best_post"] = m.post.post_id

    # Most recent matching post first; stable sort keeps user_id ascending
    # within equal recency (ISO timestamps compare lexicographically).
    ranked = sorted(per_user.items(), key=lambda kv: kv[0])
    ranked.sort(key=lambda kv: kv[1]["best_at"], reverse=True)
    return [
        TargetUser(
            user_id=uid,
            handle=entry["handle"],
            matched_terms=tuple(sorted(entry["terms"], key=list(terms).index)),
            matched_post_id=entry["best_post"],
            discovered_at=now,
        )
        for uid, entry in ranked[:limit]
    ]


def post_exposure(
    platform: PlatformClient,
    state: ConversationState,
    macro_url: str,
    template_id: str,
    templates: MessageTemplates,
    seq: EventSequencer,
    now: str,
    caps: CampaignCaps = CampaignCaps(),
    hourly_sent: int = 0,
):
    """Send the exposure mention for one targeted user.

    Caps are checked before any platform call; a send failure propagates with
    the state unchanged so the next tick retries.
    """
    if state.phase != Phase.CREATED:
        raise StaleStateError(f"exposure in phase {state.phase.value}")
    if state.opted_out:
        raise StaleStateError("user opted out")
    if state.messages_sent >= caps.messages_per_user:
        raise CapExceededError("per-user message cap reached")
    if hourly_sent >= caps.exposures_per_hour:
        raise CapExceededError("hourly exposure cap reached")

    text = templates.render(template_id, handle=state.target.handle, macro_url=macro_url)
    post_id = platform.send_message(state.target.user_id, text)
    event = seq.make(
        EventKind.EXPOSURE_POSTED,
        state.target.user_id,
        {
            "platform_post_id": post_id,
            "template_id": template_id,
            "macro_url": macro_url,
            "text": text,
        },
        at=now,
    )
    new_state = fold_event({state.target.user_id: state}, event)[state.target.user_id]
    return new_state, event


def advance_conversation(
    state: ConversationState, incoming: str, policy: ConversationPolicy
):
    """Pure conversation step for one incoming reply.

    Returns (new_state, outgoing_text_or_None, classification_or_None). The
    caller owns recording the incoming reply and performing the send.
    Opt-out keywords close immediately with no reply.
    """
    if state.phase not in (Phase.AWAITING_OPINION, Phase.AWAITING_ACTION_IDEAS):
        raise StaleStateError(f"reply in phase {state.phase.value}")

    if matched_opt_out(incoming, policy.lexicon):
        return replace(state.with_phase(Phase.CLOSED), opted_out=True), None, None

    if state.phase == Phase.AWAITING_OPINION:
        outgoing = policy.templates.render(
            policy.action_template, handle=state.target.handle
        )
        return state.with_phase(Phase.AWAITING_ACTION_IDEAS), outgoing, None

    classification = classify_response(incoming, policy.lexicon)
    new_state = replace(
        state.with_phase(Phase.HANDED_TO_ACTIVIST), classification=classification
    )
    return new_state, None, classification


def run_campaign_tick(
    campaign: Campaign,
    platform: PlatformClient,
    store,
    policy: ConversationPolicy,
    now: str | None = None,
) -> list[EngagementEvent]:
    """One scheduler pass: poll replies, advance conversations, send due
    exposures under the rate caps, close idle conversations.

    Platform reads happen before anything is staged, so a platform outage
    aborts the tick with no state mutation. Re-running on an unchanged
    platform snapshot emits nothing.
    """
    if campaign.status != CampaignStatus.ACTIVE:
        raise StaleStateError(f"campaign is {campaign.status.value}, not active")
    caps = campaign.caps
    now = now or platform.now()

    prior = store.read(campaign.campaign_id)
    states = replay_events(prior)
    processed_replies = {
        e.payload["reply_id"] for e in prior if e.kind == EventKind.REPLY_RECEIVED
    }
    hourly_sent = sum(
        1
        for e in prior
        if e.kind == EventKind.EXPOSURE_POSTED and 0.0 <= hours_between(e.at, now) < 1.0
    )
    seq = EventSequencer(
        campaign.campaign_id, next_id=prior[-1].event_id + 1 if prior else 1
    )

    # Platform reads up front: an unavailable platform aborts atomically here.
    replies = platform.list_replies()
    need = caps.target_limit - len(states)
    candidates = (
        discover_targets(platform, campaign.terms, caps.target_limit, now=now)
        if need > 0
        else []
    )

    staged: list[EngagementEvent] = []

    def emit(kind: EventKind, uid: str, payload: dict, at: str) -> EngagementEvent:
        nonlocal states
        event = seq.make(kind, uid, payload, at)
        states = fold_event(states, event)
        staged.append(event)
        return event

    # 1) discover new targets up to the campaign's target budget
    for target in candidates:
        if need <= 0:
            break
        if target.user_id in states:
            continue
        emit(
            EventKind.TARGETED,
            target.user_id,
            {
                "handle": target.handle,
                "matched_terms": list(target.matched_terms),
                "matched_post_id": target.matched_post_id,
            },
            at=now,
        )
        need -= 1

    # 2) process new replies in stable reply-id order
    for reply in sorted(replies, key=lambda r: r.reply_id):
        if reply.reply_id in processed_replies:
            continue
        st = states.get(reply.user_id)
        if st is None:
            continue  # not one of our targets
        emit(
            EventKind.REPLY_RECEIVED,
            reply.user_id,
            {"reply_id": reply.reply_id, "text": reply.text, "in_reply_to": reply.in_reply_to},
            at=now,
        )
        st = states[reply.user_id]
        if st.opted_out or st.phase not in (
            Phase.AWAITING_OPINION,
            Phase.AWAITING_ACTION_IDEAS,
        ):
            logger.info(
                "reply %s from %s recorded without advance (phase %s)",
                reply.reply_id,
                reply.user_id,
                st.phase.value,
            )
            continue

        new_state, outgoing, classification = advance_conversation(st, reply.text, policy)
        if new_state.opted_out:
            emit(
                EventKind.OPTED_OUT,
                reply.user_id,
                {"matched_cues": matched_opt_out(reply.text, policy.lexicon)},
                at=now,
            )
        elif outgoing is not None:
            if st.messages_sent >= caps.messages_per_user:
                logger.info("action question to %s blocked by message cap", reply.user_id)
                continue
            try:
                post_id = platform.send_message(reply.user_id, outgoing)
            except PlatformSendError as exc:
                logger.warning("send to %s failed, will retry: %s", reply.user_id, exc)
                continue
            emit(
                EventKind.BOT_REPLY_SENT,
                reply.user_id,
                {
                    "platform_post_id": post_id,
                    "text": outgoing,
                    "kind": "action_question",
                    "manual": False,
                },
                at=now,
            )
        else:
            emit(
                EventKind.CLASSIFIED,
                reply.user_id,
                {
                    "label": classification.label,
                    "matched_cues": list(classification.matched_cues),
                },
                at=now,
            )
            emit(EventKind.HANDED_OFF, reply.user_id, {}, at=now)

    # 3) send due exposures under the hourly cap
    created = [
        uid
        for uid, st in states.items()
        if st.phase == Phase.CREATED and not st.opted_out
    ]
    created.sort(key=lambda uid: (states[uid].target.discovered_at, uid))
    for uid in created:
        if hourly_sent >= caps.exposures_per_hour:
            break
        st = states[uid]
        if st.messages_sent >= caps.messages_per_user:
            continue
        try:
            _, event = post_exposure(
                platform,
                st,
                policy.macro_url,
                policy.exposure_template,
                policy.templates,
                seq,
                now=now,
                caps=caps,
                hourly_sent=hourly_sent,
            )
        except PlatformSendError as exc:
            logger.warning("exposure to %s failed, will retry: %s", uid, exc)
            continue
        states = fold_event(states, event)
        staged.append(event)
        hourly_sent += 1

    # 4) close conversations idle past the timeout window
    for uid in sorted(states):
        st = states[uid]
        if st.phase not in (Phase.AWAITING_OPINION, Phase.AWAITING_ACTION_IDEAS):
            continue
        if st.last_activity and hours_between(st.last_activity, now) >= caps.idle_timeout_hours:
            emit(EventKind.CLOSED, uid, {"reason": "timeout"}, at=now)

    store.append_all(staged)
    return staged
