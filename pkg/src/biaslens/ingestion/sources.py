"""Where articles come from: file fixtures (test default) or live HTTP.

The fixture layout is one directory per story:

    <root>/stories/<story_id>/articles/<article_id>.html
    <root>/stories/<story_id>/articles/<article_id>.meta.json   {url, source_name, fetched_at}
    <root>/stories/<story_id>/images/<basename>

Fixture image fetches resolve any src URL by its path basename inside the
story's images directory, so fixture HTML can use realistic absolute or
relative references.
"""

from __future__ import annotations

import json
import logging
import time
from pathlib import Path
from typing import Optional, Protocol
from urllib.parse import urlparse

from ..errors import SourceUnreachableError
from .types import ArticleRecord, StoryQuery

logger = logging.getLogger(__name__)

DEFAULT_USER_AGENT = "biaslens/0.1 (visual-bias research tool)"


class ArticleSource(Protocol):
    def list_articles(self, query: StoryQuery, limit: int) -> list[ArticleRecord]: ...

    def fetch_image_bytes(self, story_id: str, src_url: str) -> Optional[bytes]: ...


def _extract_title(html: str) -> str:
    lower = html.lower()
    start = lower.find("<title")
    if start == -1:
        return ""
    start = lower.find(">", start)
    end = lower.find("</title>", start)
    if start == -1 or end == -1:
        return ""
    return html[start + 1 : end].strip()


class FixtureSource:
    """Deterministic article source backed by stored HTML."""

    def __init__(self, fixtures_root: Path):
        self.root = Path(fixtures_root)

    def _story_dir(self, story_id: str) -> Path:
        return self.root / "stories" / story_id

    def list_articles(self, query: StoryQuery, limit: int) -> list[ArticleRecord]:
        articles_dir = self._story_dir(query.story_id) / "articles"
        if not articles_dir.is_dir():
            return []
        records = []
        for html_path in sorted(articles_dir.glob("*.html")):
            article_id = html_path.stem
            meta_path = html_path.with_suffix(".meta.json")
            meta = json.loads(meta_path.read_text()) if meta_path.exists() else {}
            html = html_path.read_text()
            records.append(
                ArticleRecord(
                    article_id=article_id,
                    url=meta.get("url", f"https://fixture.example/{article_id}"),
                    source_name=meta.get("source_name", "fixture.example"),
                    fetched_at=meta.get("fetched_at", "1970-01-01T00:00:00Z"),
                    html=html,
                    title=meta.get("title") or _extract_title(html),
                )
            )
        return records[:limit]

    def fetch_image_bytes(self, story_id: str, src_url: str) -> Optional[bytes]:
        basename = Path(urlparse(src_url).path).name
        if not basename:
            return None
        path = self._story_dir(story_id) / "images" / basename
        if not path.is_file():
            logger.warning("fixture image missing: %s", path)
            return None
        return path.read_bytes()


class LiveSource:
    """Plain HTTP fetcher for seed URLs, with per-host politeness delay.

    Kept deliberately thin: no search-engine integration, just direct GETs of
    the URLs the activist already has.
    """

    def __init__(
        self,
        user_agent: str = DEFAULT_USER_AGENT,
        politeness_delay_ms: int = 1000,
        timeout_s: float = 20.0,
    ):
        self.user_agent = user_agent
        self.politeness_delay_ms = politeness_delay_ms
        self.timeout_s = timeout_s
        self._last_hit: dict[str, float] = {}

    def _get(self, url: str) -> bytes:
        import requests

        host = urlparse(url).netloc
        wait = self._last_hit.get(host, 0.0) + self.politeness_delay_ms / 1000.0 - time.monotonic()
        if wait > 0:
            time.sleep(wait)
        self._last_hit[host] = time.monotonic()
        try:
            resp = requests.get(
                url, headers={"User-Agent": self.user_agent}, timeout=self.timeout_s
            )
            resp.raise_for_status()
        except Exception as exc:
            raise SourceUnreachableError(f"GET {url} failed: {exc}") from exc
        return resp.content

    def list_articles(self, query: StoryQuery, limit: int) -> list[ArticleRecord]:
        from datetime import datetime, timezone
        import hashlib

        records = []
        for url in query.seed_urls[:limit]:
            html = self._get(url).decode("utf-8", errors="replace")
            host = urlparse(url).netloc.removeprefix("www.")
            records.append(
                ArticleRecord(
                    article_id="a-" + hashlib.sha256(url.encode()).hexdigest()[:10],
                    url=url,
                    source_name=host,
                    fetched_at=datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
                    html=html,
                    title=_extract_title(html),
                )
            )
        records.sort(key=lambda r: r.article_id)
        return records

    def fetch_image_bytes(self, story_id: str, src_url: str) -> Optional[bytes]:
        try:
            return self._get(src_url)
        except SourceUnreachableError:
            logger.warning("image fetch failed, skipping: %s", src_url)
            return None
