#!/usr/bin/env python3
"""Regenerate the committed test fixtures.

Outputs (all deterministic):
  fixtures/stories/energy-reform/   6 articles from 3 publishers, synthetic
                                    photos in two visual families, one icon,
                                    two duplicate-content references
  fixtures/mock_platform/energy_reform.json
                                    40 users (35 matching), posts, and the
                                    scripted reply schedule for the pilot
  fixtures/pilot/events.jsonl       event log produced by actually running
                                    the campaign engine over that platform

Run from the repo root: python3 tools/build_fixtures.py
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

import numpy as np
from PIL import Image

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from biaslens.bots.engine import ConversationPolicy, run_campaign_tick  # noqa: E402
from biaslens.bots.platform import MockPlatform  # noqa: E402
from biaslens.bots.types import Campaign, CampaignCaps, CampaignStatus  # noqa: E402
from biaslens.service.events import InMemoryEventStore  # noqa: E402
from biaslens.service.stats import median_responses_per_responder, stats_from_events  # noqa: E402
from biaslens.timeutil import add_hours  # noqa: E402

FIXTURES = ROOT / "fixtures"
STORY_ID = "energy-reform"
EPOCH = "2026-01-05T00:00:00Z"
SIZE = 160


# ---------------------------------------------------------------------------
# synthetic photos: dark textured crowds vs bright smooth streets
# ---------------------------------------------------------------------------

def _crowd_base() -> np.ndarray:
    # One shared blocky speckle texture, like dense heads and banners; the
    # family identity lives here, per-image jitter goes on top.
    rng = np.random.default_rng(42)
    speckle = rng.integers(0, 2, size=(SIZE // 4, SIZE // 4, 1)).astype(np.float64)
    return np.kron(speckle, np.ones((4, 4, 1))) * 75.0 + 25.0


_CROWD_BASE = None


def crowd_raster(seed: int) -> np.ndarray:
    global _CROWD_BASE
    if _CROWD_BASE is None:
        _CROWD_BASE = _crowd_base()
    rng = np.random.default_rng(seed)
    jitter = rng.normal(0, 14, size=(SIZE, SIZE, 3))
    shift = rng.integers(-12, 12)
    img = np.clip(_CROWD_BASE + jitter + shift, 0, 255)
    img[..., 2] *= 0.85  # slightly warm shadows
    return img.astype(np.uint8)


def street_raster(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    vertical = np.linspace(235, 185, SIZE)[:, None]
    horizontal = np.linspace(-6, 6, SIZE)[None, :]
    base = vertical + horizontal + rng.normal(0, 1.5, size=(SIZE, SIZE))
    img = np.stack([base + 4, base + 2, base - 4], axis=-1)
    return np.clip(img, 0, 255).astype(np.uint8)


def icon_raster() -> np.ndarray:
    return np.full((16, 16, 3), 90, dtype=np.uint8)


ARTICLES = [
    {
        "article_id": "a01",
        "source_name": "outleta.example",
        "url": "https://outleta.example/energia/calles-tranquilas",
        "fetched_at": "2026-01-03T08:00:00Z",
        "title": "Reforma energética avanza sin contratiempos",
        "images": ["street-01.png", "street-02.png", "favicon-16.png"],
        "og_image": None,
        "lede": "Las calles de la capital lucieron tranquilas este fin de semana.",
    },
    {
        "article_id": "a02",
        "source_name": "outleta.example",
        "url": "https://outleta.example/energia/sin-protestas",
        "fetched_at": "2026-01-03T09:30:00Z",
        "title": "Jornada sin incidentes tras el ajuste de tarifas",
        "images": ["street-03.png", "wire-calma-a.png"],
        "og_image": None,
        "lede": "El ajuste de precios transcurrió en calma según fuentes oficiales.",
    },
    {
        "article_id": "a03",
        "source_name": "outletb.example",
        "url": "https://outletb.example/noticias/marchas-masivas",
        "fetched_at": "2026-01-03T10:00:00Z",
        "title": "Miles marchan contra el gasolinazo",
        "images": ["crowd-01.png", "crowd-02.png"],
        "og_image": "https://cdn.outletb.example/images/crowd-01.png",
        "lede": "Multitudes llenaron las avenidas principales en protesta.",
    },
    {
        "article_id": "a04",
        "source_name": "outletb.example",
        "url": "https://outletb.example/noticias/protesta-continua",
        "fetched_at": "2026-01-03T11:15:00Z",
        "title": "La protesta continúa por tercer día",
        "images": ["crowd-03.png", "wire-calma-b.png"],
        "og_image": None,
        "lede": "Los manifestantes mantienen los plantones pese al frío.",
    },
    {
        "article_id": "a05",
        "source_name": "outletc.example",
        "url": "https://outletc.example/pais/reforma-dividida",
        "fetched_at": "2026-01-03T12:00:00Z",
        "title": "Una reforma que divide: dos ciudades, dos fotos",
        "images": ["crowd-04.png", "street-04.png"],
        "og_image": None,
        "lede": "La cobertura muestra realidades muy distintas según la fuente.",
    },
    {
        "article_id": "a06",
        "source_name": "outletc.example",
        "url": "https://outletc.example/pais/lectores-preguntan",
        "fetched_at": "2026-01-03T13:45:00Z",
        "title": "Lectores preguntan: ¿dónde están las protestas?",
        "images": ["street-05.png", "crowd-05.png"],
        "og_image": None,
        "lede": "Las imágenes que circulan en redes no coinciden con las portadas.",
    },
]

HTML_TEMPLATE = """<!doctype html>
<html lang="es">
<head>
  <meta charset="utf-8">
  <title>{title}</title>
{og_tag}</head>
<body>
  <article>
    <h1>{title}</h1>
    <p>{lede}</p>
{img_tags}
    <p>Redacción — cobertura de la reforma energética.</p>
  </article>
</body>
</html>
"""


def build_story_fixture() -> None:
    story_dir = FIXTURES / "stories" / STORY_ID
    shutil.rmtree(story_dir, ignore_errors=True)
    images_dir = story_dir / "images"
    articles_dir = story_dir / "articles"
    images_dir.mkdir(parents=True)
    articles_dir.mkdir(parents=True)

    rasters = {
        "favicon-16.png": icon_raster(),
        "wire-calma-a.png": street_raster(seed=900),
        "wire-calma-b.png": street_raster(seed=900),  # same pixels, second outlet
    }
    for i in range(1, 6):
        rasters[f"crowd-{i:02d}.png"] = crowd_raster(seed=100 + i)
        rasters[f"street-{i:02d}.png"] = street_raster(seed=200 + i)
    for name, raster in rasters.items():
        Image.fromarray(raster).save(images_dir / name, format="PNG")

    for spec in ARTICLES:
        og_tag = (
            f'  <meta property="og:image" content="{spec["og_image"]}">\n'
            if spec["og_image"]
            else ""
        )
        img_tags = "\n".join(
            f'    <img src="/images/{name}" alt="foto de la cobertura">'
            for name in spec["images"]
        )
        html = HTML_TEMPLATE.format(
            title=spec["title"], lede=spec["lede"], og_tag=og_tag, img_tags=img_tags
        )
        (articles_dir / f"{spec['article_id']}.html").write_text(html)
        meta = {
            "url": spec["url"],
            "source_name": spec["source_name"],
            "fetched_at": spec["fetched_at"],
            "title": spec["title"],
        }
        (articles_dir / f"{spec['article_id']}.meta.json").write_text(
            json.dumps(meta, indent=2, ensure_ascii=False, sort_keys=True) + "\n"
        )
    print(f"story fixture: {len(ARTICLES)} articles, {len(rasters)} image files")


# ---------------------------------------------------------------------------
# mock platform + pilot reply schedule
# ---------------------------------------------------------------------------

OPINIONS = [
    "sí, las fotos se ven muy diferentes entre medios",
    "parece que eligieron las imágenes con mucho cuidado",
    "no lo había notado hasta ahora, qué interesante",
    "uy, qué diferencia entre una portada y otra",
    "puede ser, las portadas no coinciden con lo que vi",
    "sí hay una diferencia clara en la cobertura",
]

EVANGELIST_ACTIONS = [
    "voy a compartir esto con mis amigos ahora mismo",
    "hay que difundir esto, que todos vean la diferencia",
    "lo comparto con mis contactos, esto debe saberse",
    "esto merece dar rt y correr la voz",
    "que todos sepan cómo nos muestran la noticia",
    "voy a compartir la comparación en mi muro",
]

DEFENDER_ACTIONS = [
    "los medios tienen razón, esas fotos son correctas",
    "no veo sesgo, es normal que usen esas imágenes",
    "tiene sentido que muestren esas fotos, fue lo que pasó",
    "está justificado, así es el periodismo",
    "el medio tiene razón en elegir su propia foto",
    "son correctas las dos versiones, depende de la hora",
]

OTHER_ACTION = "no sé qué se pueda hacer, tal vez preguntar a otros"

THIRD_REPLIES = [
    "ya lo compartí, gracias por el dato",
    "listo, enviado a mi grupo",
    "gracias por mostrar esto",
    "quedo al pendiente de más casos",
    "ojalá más gente lo vea",
]

PILOT_TERMS = ["#Gasolinazo", "#ReformaEnergetica", "#PEMEX"]


def user_id(i: int) -> str:
    return f"u{i:02d}"


def build_platform_fixture() -> dict:
    users = [
        {"user_id": user_id(i), "handle": f"@ciudadano{i:02d}"} for i in range(1, 41)
    ]
    posts = []
    for i in range(1, 41):
        if i <= 35:
            tag = PILOT_TERMS[(i - 1) % 3]
            text = f"otra vez sube todo con el {tag}, ya basta de aumentos"
        else:
            tag = "#futbol"
            text = f"gran partido hoy {tag}"
        posts.append(
            {
                "post_id": f"s{i:03d}",
                "user_id": user_id(i),
                "text": text,
                "hashtags": [tag],
                "at": add_hours(EPOCH, -i / 60.0),  # u01 most recent
            }
        )

    # Reply plan: u01..u10 reply 3x, u11..u20 reply 2x, u21..u23 reply once.
    # Exposures land at ticks 0/1/2 (hourly cap 10), replies one tick later.
    replies: dict[str, list] = {"1": [], "2": [], "3": []}

    def opinion(i: int) -> str:
        return OPINIONS[i % len(OPINIONS)]

    def action(i: int) -> str:
        if i <= 11:
            return EVANGELIST_ACTIONS[i % len(EVANGELIST_ACTIONS)]
        if i <= 19:
            return DEFENDER_ACTIONS[i % len(DEFENDER_ACTIONS)]
        return OTHER_ACTION

    for i in range(1, 11):  # exposed at tick 0
        replies["1"].append({"user_id": user_id(i), "text": opinion(i)})
        replies["2"].append({"user_id": user_id(i), "text": action(i)})
        replies["3"].append({"user_id": user_id(i), "text": THIRD_REPLIES[i % len(THIRD_REPLIES)]})
    for i in range(11, 21):  # exposed at tick 1
        replies["2"].append({"user_id": user_id(i), "text": opinion(i)})
        replies["3"].append({"user_id": user_id(i), "text": action(i)})
    for i in range(21, 24):  # exposed at tick 2
        replies["3"].append({"user_id": user_id(i), "text": opinion(i)})

    return {
        "epoch": EPOCH,
        "tick_interval_hours": 1,
        "users": users,
        "posts": posts,
        "replies": replies,
    }


def build_pilot_events(platform_fixture: dict) -> None:
    platform = MockPlatform(platform_fixture)
    campaign = Campaign(
        campaign_id="pilot-energy",
        story_id=STORY_ID,
        macro_id="m-pilot",
        terms=tuple(PILOT_TERMS),
        status=CampaignStatus.ACTIVE,
        caps=CampaignCaps(),  # 10/hour, 3 per user, 72h idle, 30 targets
    )
    policy = ConversationPolicy.default_spanish(
        macro_url="https://biaslens.example/s/energy-reform"
    )
    store = InMemoryEventStore()
    for _ in range(5):
        run_campaign_tick(campaign, platform, store, policy)
        platform.advance()

    events = store.read(campaign.campaign_id)
    stats = stats_from_events(events)
    assert stats.targeted_count == 30, stats
    assert stats.responses_count == 53, stats
    assert stats.responders_count == 23, stats
    assert median_responses_per_responder(stats) >= 2, stats
    assert stats.responses_per_responder == {1: 3, 2: 10, 3: 10}, stats
    print(
        "pilot: targeted=%d responses=%d responders=%d classes=%s"
        % (
            stats.targeted_count,
            stats.responses_count,
            stats.responders_count,
            stats.classification_counts,
        )
    )

    pilot_dir = FIXTURES / "pilot"
    pilot_dir.mkdir(parents=True, exist_ok=True)
    with (pilot_dir / "events.jsonl").open("w") as fh:
        for event in events:
            fh.write(json.dumps(event.to_doc(), sort_keys=True, ensure_ascii=False) + "\n")
    print(f"pilot events: {len(events)} events written")


def main() -> None:
    build_story_fixture()
    platform_fixture = build_platform_fixture()
    mock_dir = FIXTURES / "mock_platform"
    mock_dir.mkdir(parents=True, exist_ok=True)
    (mock_dir / "energy_reform.json").write_text(
        json.dumps(platform_fixture, indent=2, ensure_ascii=False, sort_keys=True) + "\n"
    )
    print("mock platform fixture written")
    build_pilot_events(platform_fixture)


if __name__ == "__main__":
    main()
