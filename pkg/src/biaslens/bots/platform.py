"""Social-platform clients: a deterministic fixture-driven mock and a thin
HTTP shell for live use.

Mock fixture shape::

    {
      "epoch": "2026-01-05T00:00:00Z",
      "tick_interval_hours": 1,
      "users": [{"user_id": "u01", "handle": "@ciudadano01"}, ...],
      "posts": [{"post_id": "s001", "user_id": "u01", "text": "...",
                 "hashtags": ["#Gasolinazo"], "at": "..."}, ...],
      "replies": {"1": [{"user_id": "u01", "text": "..."}], ...}
    }

Scripted replies are keyed by tick index. A reply becomes visible once its
tick has arrived AND the bot has messaged that user; until then it stays
pending. Reply ids are fixed by schedule slot, so polling is idempotent and
the whole platform is a pure function of (fixture, tick index, outbox).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Protocol

from ..errors import PlatformSendError, PlatformUnavailableError
from ..timeutil import add_hours
from .lexicon import fold_text


@dataclass(frozen=True)
class PlatformPost:
    post_id: str
    user_id: str
    handle: str
    text: str
    hashtags: tuple
    at: str


@dataclass(frozen=True)
class PostMatch:
    post: PlatformPost
    matched_terms: tuple


@dataclass(frozen=True)
class PlatformReply:
    reply_id: str
    user_id: str
    text: str
    in_reply_to: str
    at: str


class PlatformClient(Protocol):
    def search_posts(self, terms) -> list[PostMatch]: ...

    def send_message(self, user_id: str, text: str) -> str: ...

    def list_replies(self) -> list[PlatformReply]: ...

    def now(self) -> str: ...


def _term_matches_post(term: str, post: PlatformPost) -> bool:
    folded = fold_text(term)
    if any(folded == fold_text(tag) for tag in post.hashtags):
        return True
    return folded in fold_text(post.text)


@dataclass(frozen=True)
class _ReplySlot:
    tick: int
    position: int
    user_id: str
    text: str

    @property
    def reply_id(self) -> str:
        return f"r{self.tick:03d}-{self.position:02d}"


class MockPlatform:
    """Deterministic stand-in for a live social network."""

    def __init__(self, fixture: dict):
        self.epoch: str = fixture["epoch"]
        self.tick_interval_hours: float = fixture.get("tick_interval_hours", 1)
        self.handles = {u["user_id"]: u["handle"] for u in fixture.get("users", [])}
        self.posts = [
            PlatformPost(
                post_id=p["post_id"],
                user_id=p["user_id"],
                handle=self.handles.get(p["user_id"], p["user_id"]),
                text=p["text"],
                hashtags=tuple(p.get("hashtags", ())),
                at=p["at"],
            )
            for p in fixture.get("posts", [])
        ]
        self.schedule = [
            _ReplySlot(tick=int(tick), position=pos, user_id=r["user_id"], text=r["text"])
            for tick, batch in sorted(fixture.get("replies", {}).items(), key=lambda kv: int(kv[0]))
            for pos, r in enumerate(batch)
        ]
        self.tick_index = 0
        self.outbox: list[PlatformPost] = []
        # Test hooks: fail the next N polls/sends with a platform error.
        self.fail_polls_remaining = 0
        self.fail_sends_remaining = 0

    @classmethod
    def from_file(cls, path: Path) -> "MockPlatform":
        return cls(json.loads(Path(path).read_text()))

    # -- time ---------------------------------------------------------------

    def now(self) -> str:
        return add_hours(self.epoch, self.tick_index * self.tick_interval_hours)

    def advance(self, ticks: int = 1) -> None:
        self.tick_index += ticks

    # -- reads --------------------------------------------------------------

    def search_posts(self, terms) -> list[PostMatch]:
        matches = []
        for post in self.posts:
            matched = tuple(t for t in terms if _term_matches_post(t, post))
            if matched:
                matches.append(PostMatch(post=post, matched_terms=matched))
        return matches

    def _messaged_users(self) -> set:
        return {post.user_id for post in self.outbox}

    def list_replies(self) -> list[PlatformReply]:
        if self.fail_polls_remaining > 0:
            self.fail_polls_remaining -= 1
            raise PlatformUnavailableError("mock poll failure (injected)")
        messaged = self._messaged_users()
        visible = []
        for slot in self.schedule:
            if slot.tick > self.tick_index or slot.user_id not in messaged:
                continue
            latest = next(
                post.post_id
                for post in reversed(self.outbox)
                if post.user_id == slot.user_id
            )
            visible.append(
                PlatformReply(
                    reply_id=slot.reply_id,
                    user_id=slot.user_id,
                    text=slot.text,
                    in_reply_to=latest,
                    at=add_hours(self.epoch, slot.tick * self.tick_interval_hours),
                )
            )
        return visible

    # -- writes -------------------------------------------------------------

    def send_message(self, user_id: str, text: str) -> str:
        if self.fail_sends_remaining > 0:
            self.fail_sends_remaining -= 1
            raise PlatformSendError("mock send failure (injected)")
        post_id = f"p{len(self.outbox) + 1:04d}"
        self.outbox.append(
            PlatformPost(
                post_id=post_id,
                user_id=user_id,
                handle=self.handles.get(user_id, user_id),
                text=text,
                hashtags=(),
                at=self.now(),
            )
        )
        return post_id

    # -- persistence hooks ---------------------------------------------------

    def restore(self, tick_index: int, outbox_entries: list) -> None:
        """Rebuild mutable state from persisted events: [(post_id, user_id, text, at)]."""
        self.tick_index = tick_index
        self.outbox = [
            PlatformPost(
                post_id=pid,
                user_id=uid,
                handle=self.handles.get(uid, uid),
                text=text,
                hashtags=(),
                at=at,
            )
            for pid, uid, text, at in outbox_entries
        ]


class LivePlatform:
    """HTTP adapter shell; disabled unless explicitly configured."""

    def __init__(self, base_url: Optional[str] = None, token: Optional[str] = None):
        self.base_url = base_url.rstrip("/") if base_url else None
        self.token = token

    def _request(self, method: str, path: str, **kwargs):
        if not self.base_url:
            raise PlatformUnavailableError("live platform not configured")
        import requests

        try:
            resp = requests.request(
                method,
                f"{self.base_url}{path}",
                headers={"Authorization": f"Bearer {self.token}"} if self.token else {},
                timeout=20,
                **kwargs,
            )
            resp.raise_for_status()
            return resp.json()
        except PlatformUnavailableError:
            raise
        except Exception as exc:
            raise PlatformUnavailableError(f"live platform error: {exc}") from exc

    def now(self) -> str:
        from ..timeutil import utc_now

        return utc_now()

    def search_posts(self, terms) -> list[PostMatch]:
        doc = self._request("GET", "/search", params={"terms": ",".join(terms)})
        matches = []
        for item in doc.get("posts", []):
            post = PlatformPost(
                post_id=item["post_id"],
                user_id=item["user_id"],
                handle=item.get("handle", item["user_id"]),
                text=item.get("text", ""),
                hashtags=tuple(item.get("hashtags", ())),
                at=item.get("at", self.now()),
            )
            matched = tuple(t for t in terms if _term_matches_post(t, post))
            if matched:
                matches.append(PostMatch(post=post, matched_terms=matched))
        return matches

    def send_message(self, user_id: str, text: str) -> str:
        doc = self._request("POST", "/messages", json={"user_id": user_id, "text": text})
        return doc["post_id"]

    def list_replies(self) -> list[PlatformReply]:
        doc = self._request("GET", "/replies")
        return [
            PlatformReply(
                reply_id=item["reply_id"],
                user_id=item["user_id"],
                text=item.get("text", ""),
                in_reply_to=item.get("in_reply_to", ""),
                at=item.get("at", self.now()),
            )
            for item in doc.get("replies", [])
        ]
