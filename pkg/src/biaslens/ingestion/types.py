"""Story, article, and harvested-image records."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from urllib.parse import urlparse

import numpy as np


def is_absolute_http_url(url: str) -> bool:
    parsed = urlparse(url)
    return parsed.scheme in ("http", "https") and bool(parsed.netloc)


@dataclass(frozen=True)
class StoryQuery:
    """What to gather: a story id plus free text and/or seed article URLs."""

    story_id: str
    query_text: str = ""
    seed_urls: tuple = ()
    language: str = "es"

    def __post_init__(self):
        if not self.story_id:
            raise ValueError("story_id must be nonempty")
        if not self.query_text and not self.seed_urls:
            raise ValueError("need query_text or seed_urls")
        object.__setattr__(self, "seed_urls", tuple(self.seed_urls))


@dataclass(frozen=True)
class ArticleRecord:
    article_id: str
    url: str
    source_name: str      # publisher domain
    fetched_at: str       # ISO 8601 UTC
    html: str
    title: str = ""

    def __post_init__(self):
        if not is_absolute_http_url(self.url):
            raise ValueError(f"article url must be absolute http(s): {self.url!r}")


def raster_digest(raster: np.ndarray) -> str:
    """Content digest of decoded pixel data; a pure function of the raster."""
    h, w = raster.shape[:2]
    hasher = hashlib.sha256(f"{w}x{h}:".encode())
    hasher.update(np.ascontiguousarray(raster).tobytes())
    return hasher.hexdigest()


@dataclass(frozen=True, eq=False)
class ArticleImage:
    """A decoded image harvested from one article, with provenance."""

    image_id: str
    article_id: str
    src_url: str
    width: int
    height: int
    bytes_hash: str
    raster: np.ndarray = field(repr=False)  # (H, W, 3) uint8

    @classmethod
    def from_raster(
        cls, image_id: str, article_id: str, src_url: str, raster: np.ndarray
    ) -> "ArticleImage":
        raster = np.ascontiguousarray(raster, dtype=np.uint8)
        h, w = raster.shape[:2]
        return cls(
            image_id=image_id,
            article_id=article_id,
            src_url=src_url,
            width=w,
            height=h,
            bytes_hash=raster_digest(raster),
            raster=raster,
        )
