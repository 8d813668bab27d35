"""Application configuration.

One flat config object covers the pipeline, the service, and the CLI. It
loads from a JSON file named by ``--config`` or the BIASLENS_CONFIG
environment variable; every field has a desk-scale default.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .bots.types import CampaignCaps

CONFIG_ENV_VAR = "BIASLENS_CONFIG"


@dataclass
class AppConfig:
    data_dir: Path = Path("data")
    fixtures_dir: Path = Path("fixtures")

    # article/image ingestion
    article_limit: int = 20
    min_image_width: int = 120
    min_image_height: int = 120
    fetch_concurrency: int = 4
    politeness_delay_ms: int = 1000
    user_agent: str = "biaslens/0.1 (visual-bias research tool)"

    # visual features
    patch_size: int = 8
    patch_stride: int = 4
    descriptor_dim: int = 16
    gmm_components: int = 8
    variance_floor: float = 1e-4
    feature_seed: int = 7
    gmm_max_iter: int = 100
    gmm_tol: float = 1e-6

    # clustering
    cluster_seed: int = 0
    cluster_restarts: int = 8
    cluster_max_iter: int = 100
    cluster_tol: float = 1e-6

    # campaigns / platform
    platform_mode: str = "mock"  # mock | live
    mock_platform_fixture: Path = Path("fixtures/mock_platform/energy_reform.json")
    live_platform_base_url: str = ""
    live_platform_token: str = ""
    caps: CampaignCaps = field(default_factory=CampaignCaps)

    # service
    activist_token: str = "dev-token"
    public_base_url: str = "http://127.0.0.1:8040"
    host: str = "127.0.0.1"
    port: int = 8040

    @classmethod
    def load(cls, path: Path | str | None = None) -> "AppConfig":
        if path is None:
            env = os.environ.get(CONFIG_ENV_VAR)
            path = Path(env) if env else None
        if path is None:
            return cls()
        doc = json.loads(Path(path).read_text())
        return cls.from_doc(doc)

    @classmethod
    def from_doc(cls, doc: dict) -> "AppConfig":
        kwargs = {}
        for f in fields(cls):
            if f.name not in doc:
                continue
            value = doc[f.name]
            if f.name in ("data_dir", "fixtures_dir", "mock_platform_fixture"):
                value = Path(value)
            elif f.name == "caps":
                value = CampaignCaps.from_doc(value)
            kwargs[f.name] = value
        return cls(**kwargs)
