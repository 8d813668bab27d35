"""File-backed persistence for stories, features, clusters, macros, campaigns.

Layout under the data directory::

    artifacts/<story_id>/story.json
    artifacts/<story_id>/images/<image_id>.png
    artifacts/<story_id>/features/features.json
    artifacts/<story_id>/clusters.json
    artifacts/<story_id>/macros/<macro_id>.png  (+ .meta.html, .json)
    campaigns/<campaign_id>/campaign.json
    campaigns/<campaign_id>/events.jsonl        (via FileEventStore)

All JSON documents are written with sorted keys so repeated runs are
byte-identical.
"""

from __future__ import annotations

import io
import json
import shutil
from pathlib import Path

import numpy as np
from PIL import Image

from ..bots.types import Campaign, CampaignCaps, CampaignStatus
from ..errors import UnknownCampaignError, UnknownStoryError
from ..ingestion.types import ArticleImage, ArticleRecord
from ..macro.compose import ImageMacro, MacroLayout


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


class DataRepository:
    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)

    # -- stories --------------------------------------------------------------

    def story_dir(self, story_id: str) -> Path:
        return self.data_dir / "artifacts" / story_id

    def story_exists(self, story_id: str) -> bool:
        return (self.story_dir(story_id) / "story.json").exists()

    def require_story(self, story_id: str) -> None:
        if not self.story_exists(story_id):
            raise UnknownStoryError(story_id)

    def delete_story(self, story_id: str) -> None:
        shutil.rmtree(self.story_dir(story_id), ignore_errors=True)

    def save_story(
        self, story_id: str, articles: list[ArticleRecord], images: list[ArticleImage]
    ) -> dict:
        story_dir = self.story_dir(story_id)
        images_dir = story_dir / "images"
        images_dir.mkdir(parents=True, exist_ok=True)
        for img in images:
            Image.fromarray(img.raster).save(images_dir / f"{img.image_id}.png", format="PNG")
        doc = {
            "story_id": story_id,
            "articles": [
                {
                    "article_id": a.article_id,
                    "url": a.url,
                    "source_name": a.source_name,
                    "fetched_at": a.fetched_at,
                    "title": a.title,
                }
                for a in articles
            ],
            "images": [
                {
                    "image_id": i.image_id,
                    "article_id": i.article_id,
                    "src_url": i.src_url,
                    "width": i.width,
                    "height": i.height,
                    "bytes_hash": i.bytes_hash,
                }
                for i in images
            ],
        }
        (story_dir / "story.json").write_text(_dump(doc))
        return doc

    def load_story_doc(self, story_id: str) -> dict:
        self.require_story(story_id)
        return json.loads((self.story_dir(story_id) / "story.json").read_text())

    def load_story_images(self, story_id: str) -> list[ArticleImage]:
        doc = self.load_story_doc(story_id)
        images = []
        for meta in doc["images"]:
            path = self.story_dir(story_id) / "images" / f"{meta['image_id']}.png"
            with Image.open(path) as img:
                raster = np.asarray(img.convert("RGB"))
            images.append(
                ArticleImage(
                    image_id=meta["image_id"],
                    article_id=meta["article_id"],
                    src_url=meta["src_url"],
                    width=meta["width"],
                    height=meta["height"],
                    bytes_hash=meta["bytes_hash"],
                    raster=raster,
                )
            )
        return images

    def image_png_path(self, story_id: str, image_id: str) -> Path:
        return self.story_dir(story_id) / "images" / f"{image_id}.png"

    def list_story_ids(self) -> list[str]:
        root = self.data_dir / "artifacts"
        if not root.is_dir():
            return []
        return sorted(p.name for p in root.iterdir() if (p / "story.json").exists())

    # -- features / clusters ----------------------------------------------------

    def features_path(self, story_id: str) -> Path:
        return self.story_dir(story_id) / "features" / "features.json"

    def clusters_path(self, story_id: str) -> Path:
        return self.story_dir(story_id) / "clusters.json"

    def load_cluster_doc(self, story_id: str) -> dict:
        path = self.clusters_path(story_id)
        if not path.exists():
            raise UnknownStoryError(f"{story_id} has no cluster report")
        return json.loads(path.read_text())

    # -- macros -----------------------------------------------------------------

    def macros_dir(self, story_id: str) -> Path:
        return self.story_dir(story_id) / "macros"

    def save_macro(self, macro: ImageMacro, png_bytes: bytes, meta_html: str) -> dict:
        macros_dir = self.macros_dir(macro.story_id)
        macros_dir.mkdir(parents=True, exist_ok=True)
        (macros_dir / f"{macro.macro_id}.png").write_bytes(png_bytes)
        (macros_dir / f"{macro.macro_id}.meta.html").write_text(meta_html)
        record = {
            "macro_id": macro.macro_id,
            "story_id": macro.story_id,
            "image_ids": list(macro.image_ids),
            "caption": macro.caption,
            "created_by": macro.created_by,
            "created_at": macro.created_at,
            "layout": {
                "rows": macro.layout.rows,
                "cols": macro.layout.cols,
                "cell": macro.layout.cell,
                "gutter": macro.layout.gutter,
                "caption_band_height": macro.layout.caption_band_height,
            },
            "width": int(macro.raster.shape[1]),
            "height": int(macro.raster.shape[0]),
        }
        (macros_dir / f"{macro.macro_id}.json").write_text(_dump(record))
        return record

    def macro_png_path(self, story_id: str, macro_id: str) -> Path:
        return self.macros_dir(story_id) / f"{macro_id}.png"

    def load_macro_record(self, story_id: str, macro_id: str) -> dict:
        path = self.macros_dir(story_id) / f"{macro_id}.json"
        if not path.exists():
            raise UnknownStoryError(f"macro {macro_id} not found for {story_id}")
        return json.loads(path.read_text())

    def list_macro_records(self, story_id: str) -> list[dict]:
        macros_dir = self.macros_dir(story_id)
        if not macros_dir.is_dir():
            return []
        return [
            json.loads(p.read_text()) for p in sorted(macros_dir.glob("*.json"))
        ]

    # -- campaigns ----------------------------------------------------------------

    def campaign_dir(self, campaign_id: str) -> Path:
        return self.data_dir / "campaigns" / campaign_id

    def save_campaign(self, campaign: Campaign, tick_index: int = 0) -> dict:
        cdir = self.campaign_dir(campaign.campaign_id)
        cdir.mkdir(parents=True, exist_ok=True)
        doc = {
            "campaign_id": campaign.campaign_id,
            "story_id": campaign.story_id,
            "macro_id": campaign.macro_id,
            "terms": list(campaign.terms),
            "status": campaign.status.value,
            "caps": campaign.caps.to_doc(),
            "created_by": campaign.created_by,
            "tick_index": tick_index,
        }
        (cdir / "campaign.json").write_text(_dump(doc))
        return doc

    def load_campaign(self, campaign_id: str) -> tuple[Campaign, int]:
        path = self.campaign_dir(campaign_id) / "campaign.json"
        if not path.exists():
            raise UnknownCampaignError(campaign_id)
        doc = json.loads(path.read_text())
        campaign = Campaign(
            campaign_id=doc["campaign_id"],
            story_id=doc["story_id"],
            macro_id=doc["macro_id"],
            terms=tuple(doc["terms"]),
            status=CampaignStatus(doc["status"]),
            caps=CampaignCaps.from_doc(doc.get("caps", {})),
            created_by=doc.get("created_by", "activist"),
        )
        return campaign, doc.get("tick_index", 0)

    def list_campaign_ids(self) -> list[str]:
        root = self.data_dir / "campaigns"
        if not root.is_dir():
            return []
        return sorted(p.name for p in root.iterdir() if (p / "campaign.json").exists())
