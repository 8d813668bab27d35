from .types import (
    ActionClassification,
    Campaign,
    CampaignCaps,
    CampaignStatus,
    ConversationState,
    EngagementEvent,
    EventKind,
    LEGAL_TRANSITIONS,
    Phase,
    TargetUser,
)
from .lexicon import CueLexicon, classify_response, fold_text
from .templates import MessageTemplates
from .platform import MockPlatform, PlatformClient, PlatformPost, PlatformReply, PostMatch
from .engine import (
    ConversationPolicy,
    advance_conversation,
    discover_targets,
    post_exposure,
    replay_events,
    run_campaign_tick,
)

__all__ = [
    "Phase",
    "LEGAL_TRANSITIONS",
    "TargetUser",
    "ConversationState",
    "EngagementEvent",
    "EventKind",
    "ActionClassification",
    "Campaign",
    "CampaignCaps",
    "CampaignStatus",
    "CueLexicon",
    "classify_response",
    "fold_text",
    "MessageTemplates",
    "PlatformClient",
    "MockPlatform",
    "PlatformPost",
    "PlatformReply",
    "PostMatch",
    "ConversationPolicy",
    "discover_targets",
    "post_exposure",
    "advance_conversation",
    "run_campaign_tick",
    "replay_events",
]
