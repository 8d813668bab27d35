from .events import FileEventStore, InMemoryEventStore
from .stats import CampaignStats, compute_stats, stats_from_events

__all__ = [
    "InMemoryEventStore",
    "FileEventStore",
    "CampaignStats",
    "compute_stats",
    "stats_from_events",
]
