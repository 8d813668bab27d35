from .types import ArticleImage, ArticleRecord, StoryQuery
from .sources import ArticleSource, FixtureSource, LiveSource
from .ops import dedupe_images, extract_images, fetch_story_articles

__all__ = [
    "StoryQuery",
    "ArticleRecord",
    "ArticleImage",
    "ArticleSource",
    "FixtureSource",
    "LiveSource",
    "fetch_story_articles",
    "extract_images",
    "dedupe_images",
]
