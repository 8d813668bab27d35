"""Link-preview metadata for sharing a macro.

Emits the head fragment the public exploration page embeds so platform
crawlers render the macro as a large-image summary card.
"""

from __future__ import annotations

from html import escape

from ..errors import InvalidUrlError
from ..ingestion.types import is_absolute_http_url

CARD_TYPE = "summary_large_image"


def macro_image_url(explore_url: str, macro_id: str) -> str:
    return f"{explore_url.rstrip('/')}/macros/{macro_id}.png"


def render_card_metadata(macro, explore_url: str, title: str, description: str = "") -> str:
    """HTML head fragment with one tag per required card/open-graph property."""
    if not is_absolute_http_url(explore_url):
        raise InvalidUrlError(f"explore_url must be absolute http(s): {explore_url!r}")
    if not description:
        description = title
    image_url = macro_image_url(explore_url, macro.macro_id)

    tags = [
        ("name", "twitter:card", CARD_TYPE),
        ("name", "twitter:title", title),
        ("name", "twitter:description", description),
        ("name", "twitter:image", image_url),
        ("property", "og:type", "article"),
        ("property", "og:title", title),
        ("property", "og:description", description),
        ("property", "og:image", image_url),
        ("property", "og:url", explore_url),
    ]
    lines = [
        f'<meta {attr}="{escape(key, quote=True)}" content="{escape(value, quote=True)}">'
        for attr, key, value in tags
    ]
    return "\n".join(lines)
