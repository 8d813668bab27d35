"""Campaign domain types: targets, conversations, events.

Conversations move through a fixed phase machine; every mutation is recorded
as an append-only EngagementEvent so a campaign can be rebuilt from its log.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from ..errors import IllegalTransitionError


class Phase(str, enum.Enum):
    CREATED = "created"
    EXPOSED = "exposed"
    AWAITING_OPINION = "awaiting_opinion"
    AWAITING_ACTION_IDEAS = "awaiting_action_ideas"
    HANDED_TO_ACTIVIST = "handed_to_activist"
    CLOSED = "closed"


LEGAL_TRANSITIONS: dict = {
    Phase.CREATED: frozenset({Phase.EXPOSED}),
    Phase.EXPOSED: frozenset({Phase.AWAITING_OPINION}),
    Phase.AWAITING_OPINION: frozenset({Phase.AWAITING_ACTION_IDEAS, Phase.CLOSED}),
    Phase.AWAITING_ACTION_IDEAS: frozenset({Phase.HANDED_TO_ACTIVIST, Phase.CLOSED}),
    # Terminal act of the supervision queue: the activist replies or closes.
    Phase.HANDED_TO_ACTIVIST: frozenset({Phase.CLOSED}),
    Phase.CLOSED: frozenset(),
}


class EventKind(str, enum.Enum):
    TARGETED = "targeted"
    EXPOSURE_POSTED = "exposure_posted"
    REPLY_RECEIVED = "reply_received"
    BOT_REPLY_SENT = "bot_reply_sent"
    CLASSIFIED = "classified"
    HANDED_OFF = "handed_off"
    OPTED_OUT = "opted_out"
    CLOSED = "closed"


class CampaignStatus(str, enum.Enum):
    DRAFT = "draft"
    ACTIVE = "active"
    PAUSED = "paused"
    FINISHED = "finished"


# draft -> active -> (paused <-> active)* -> finished
LEGAL_STATUS_TRANSITIONS: dict = {
    CampaignStatus.DRAFT: frozenset({CampaignStatus.ACTIVE}),
    CampaignStatus.ACTIVE: frozenset({CampaignStatus.PAUSED, CampaignStatus.FINISHED}),
    CampaignStatus.PAUSED: frozenset({CampaignStatus.ACTIVE, CampaignStatus.FINISHED}),
    CampaignStatus.FINISHED: frozenset(),
}


@dataclass(frozen=True)
class TargetUser:
    user_id: str
    handle: str
    matched_terms: tuple
    matched_post_id: str
    discovered_at: str

    def __post_init__(self):
        if not self.matched_terms:
            raise ValueError("matched_terms must be nonempty")
        object.__setattr__(self, "matched_terms", tuple(self.matched_terms))


@dataclass(frozen=True)
class ActionClassification:
    label: str  # evangelist | defender | other
    matched_cues: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "matched_cues", tuple(self.matched_cues))
        if (self.label == "other") != (len(self.matched_cues) == 0):
            raise ValueError("label is 'other' exactly when no cues matched")


@dataclass(frozen=True)
class Message:
    direction: str  # "in" | "out"
    text: str
    at: str


@dataclass(frozen=True)
class ConversationState:
    target: TargetUser
    phase: Phase = Phase.CREATED
    messages_sent: int = 0  # automatic bot messages only; manual handoff replies excluded
    last_activity: str = ""
    opted_out: bool = False
    history: tuple = ()
    classification: ActionClassification | None = None

    def with_phase(self, new_phase: Phase) -> "ConversationState":
        if new_phase not in LEGAL_TRANSITIONS[self.phase]:
            raise IllegalTransitionError(f"{self.phase.value} -> {new_phase.value}")
        return replace(self, phase=new_phase)

    def with_message(self, direction: str, text: str, at: str) -> "ConversationState":
        return replace(
            self,
            history=self.history + (Message(direction, text, at),),
            last_activity=at,
        )


@dataclass(frozen=True)
class CampaignCaps:
    exposures_per_hour: int = 10
    messages_per_user: int = 3
    idle_timeout_hours: float = 72.0
    target_limit: int = 30

    def to_doc(self) -> dict:
        return {
            "exposures_per_hour": self.exposures_per_hour,
            "messages_per_user": self.messages_per_user,
            "idle_timeout_hours": self.idle_timeout_hours,
            "target_limit": self.target_limit,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "CampaignCaps":
        return cls(**{k: doc[k] for k in cls().to_doc() if k in doc})


@dataclass(frozen=True)
class Campaign:
    campaign_id: str
    story_id: str
    macro_id: str
    terms: tuple
    status: CampaignStatus = CampaignStatus.DRAFT
    caps: CampaignCaps = field(default_factory=CampaignCaps)
    created_by: str = "activist"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def with_status(self, new_status: CampaignStatus) -> "Campaign":
        if new_status not in LEGAL_STATUS_TRANSITIONS[self.status]:
            raise IllegalTransitionError(
                f"campaign status {self.status.value} -> {new_status.value}"
            )
        return replace(self, status=new_status)


@dataclass(frozen=True)
class EngagementEvent:
    event_id: int
    campaign_id: str
    kind: EventKind
    user_id: str
    payload: dict
    at: str

    def to_doc(self) -> dict:
        return {
            "event_id": self.event_id,
            "campaign_id": self.campaign_id,
            "kind": self.kind.value,
            "user_id": self.user_id,
            "payload": self.payload,
            "at": self.at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "EngagementEvent":
        return cls(
            event_id=doc["event_id"],
            campaign_id=doc["campaign_id"],
            kind=EventKind(doc["kind"]),
            user_id=doc["user_id"],
            payload=doc.get("payload", {}),
            at=doc["at"],
        )
