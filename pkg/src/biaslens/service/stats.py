"""Campaign statistics as a pure fold over the event log."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..bots.types import EngagementEvent, EventKind
from ..errors import UnknownCampaignError


@dataclass(frozen=True)
class CampaignStats:
    targeted_count: int = 0
    responders_count: int = 0
    responses_count: int = 0
    # replies-per-responder -> number of responders with that many replies
    responses_per_responder: dict = field(default_factory=dict)
    classification_counts: dict = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {
            "targeted_count": self.targeted_count,
            "responders_count": self.responders_count,
            "responses_count": self.responses_count,
            "responses_per_responder": {
                str(k): v for k, v in sorted(self.responses_per_responder.items())
            },
            "classification_counts": dict(sorted(self.classification_counts.items())),
        }


def median_responses_per_responder(stats: CampaignStats) -> float:
    counts: list[int] = []
    for n_replies, n_users in stats.responses_per_responder.items():
        counts.extend([int(n_replies)] * n_users)
    if not counts:
        return 0.0
    counts.sort()
    mid = len(counts) // 2
    if len(counts) % 2 == 1:
        return float(counts[mid])
    return (counts[mid - 1] + counts[mid]) / 2.0


def stats_from_events(events) -> CampaignStats:
    targeted = 0
    replies_by_user: dict[str, int] = {}
    classifications: dict[str, int] = {}
    for event in events:
        if event.kind == EventKind.TARGETED:
            targeted += 1
        elif event.kind == EventKind.REPLY_RECEIVED:
            replies_by_user[event.user_id] = replies_by_user.get(event.user_id, 0) + 1
        elif event.kind == EventKind.CLASSIFIED:
            label = event.payload["label"]
            classifications[label] = classifications.get(label, 0) + 1

    histogram: dict[int, int] = {}
    for n in replies_by_user.values():
        histogram[n] = histogram.get(n, 0) + 1

    return CampaignStats(
        targeted_count=targeted,
        responders_count=len(replies_by_user),
        responses_count=sum(replies_by_user.values()),
        responses_per_responder=histogram,
        classification_counts=classifications,
    )


def compute_stats(campaign_id: str, store) -> CampaignStats:
    events = store.read(campaign_id)
    if not events and not _campaign_known(campaign_id, store):
        raise UnknownCampaignError(campaign_id)
    return stats_from_events(events)


def _campaign_known(campaign_id: str, store) -> bool:
    # File stores may hold a campaign document with no events yet.
    data_dir = getattr(store, "data_dir", None)
    if data_dir is None:
        return False
    return (data_dir / "campaigns" / campaign_id / "campaign.json").exists()
