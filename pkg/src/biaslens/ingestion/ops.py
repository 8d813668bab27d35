"""Article fetching, image extraction, and exact-duplicate removal."""

from __future__ import annotations

import io
import logging
from concurrent.futures import ThreadPoolExecutor
from html.parser import HTMLParser
from typing import Callable, Optional
from urllib.parse import urljoin, urlparse

import numpy as np
from PIL import Image

from .sources import ArticleSource
from .types import ArticleImage, ArticleRecord, StoryQuery

logger = logging.getLogger(__name__)

DEFAULT_MIN_WIDTH = 120
DEFAULT_MIN_HEIGHT = 120
DEFAULT_ARTICLE_LIMIT = 20
DEFAULT_CONCURRENCY = 4

_META_IMAGE_KEYS = {"og:image", "og:image:url", "twitter:image", "twitter:image:src"}


class _ImageRefParser(HTMLParser):
    """Best-effort collector of img src and social-preview meta images."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.refs: list[str] = []

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        if tag == "img":
            src = attrs.get("src")
            if src:
                self.refs.append(src)
        elif tag == "meta":
            key = attrs.get("property") or attrs.get("name")
            if key and key.lower() in _META_IMAGE_KEYS and attrs.get("content"):
                self.refs.append(attrs["content"])


def image_refs(article: ArticleRecord) -> list[str]:
    """Unique absolute http(s) image URLs in document order."""
    parser = _ImageRefParser()
    try:
        parser.feed(article.html)
        parser.close()
    except Exception:  # malformed markup is never fatal
        logger.warning("html parse trouble in %s; using partial refs", article.article_id)
    seen = set()
    resolved = []
    for ref in parser.refs:
        absolute = urljoin(article.url, ref.strip())
        if urlparse(absolute).scheme not in ("http", "https"):
            continue
        if absolute not in seen:
            seen.add(absolute)
            resolved.append(absolute)
    return resolved


def _decode(data: bytes) -> Optional[np.ndarray]:
    try:
        with Image.open(io.BytesIO(data)) as img:
            return np.asarray(img.convert("RGB"))
    except Exception:
        return None


def extract_images(
    article: ArticleRecord,
    image_fetcher: Callable[[str], Optional[bytes]],
    min_width: int = DEFAULT_MIN_WIDTH,
    min_height: int = DEFAULT_MIN_HEIGHT,
    concurrency: int = DEFAULT_CONCURRENCY,
) -> list[ArticleImage]:
    """Fetch and decode every qualifying image reference of one article.

    Undecodable or too-small images are skipped with a log line. Fetches run
    concurrently up to ``concurrency``; output order follows document order
    regardless of completion order.
    """
    refs = image_refs(article)
    if not refs:
        return []

    def grab(indexed):
        index, src_url = indexed
        data = image_fetcher(src_url)
        return index, src_url, data

    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        fetched = list(pool.map(grab, enumerate(refs)))
    fetched.sort(key=lambda item: item[0])

    images = []
    for index, src_url, data in fetched:
        if data is None:
            logger.info("image unavailable, skipped: %s", src_url)
            continue
        raster = _decode(data)
        if raster is None:
            logger.info("undecodable image, skipped: %s", src_url)
            continue
        h, w = raster.shape[:2]
        if w < min_width or h < min_height:
            continue
        images.append(
            ArticleImage.from_raster(
                image_id=f"{article.article_id}-img{index:02d}",
                article_id=article.article_id,
                src_url=src_url,
                raster=raster,
            )
        )
    return images


def fetch_story_articles(
    query: StoryQuery, source: ArticleSource, limit: int = DEFAULT_ARTICLE_LIMIT
) -> list[ArticleRecord]:
    """Gather up to ``limit`` articles for one story from the source."""
    records = source.list_articles(query, limit)
    records = [r for r in records if r.html]
    if not records:
        logger.warning("empty result: no articles for story %s", query.story_id)
    return records


def dedupe_images(images: list[ArticleImage]) -> list[ArticleImage]:
    """Keep one image per pixel digest: the earliest by (article_id, image_id).

    Output preserves the input order of survivors; idempotent.
    """
    best: dict[str, ArticleImage] = {}
    for img in images:
        cur = best.get(img.bytes_hash)
        if cur is None or (img.article_id, img.image_id) < (cur.article_id, cur.image_id):
            best[img.bytes_hash] = img
    survivors = {id(img) for img in best.values()}
    return [img for img in images if id(img) in survivors]
