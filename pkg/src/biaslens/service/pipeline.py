"""Pipeline binding: story ingestion -> visual features -> clustering.

Persists every artifact through the repository. Failures clean up partial
story artifacts so a story is either fully ingested or absent.
"""

from __future__ import annotations

import logging
from collections import namedtuple

import numpy as np

from ..clustering import ClusteringParams, build_clusters, choose_k, kmeans, write_cluster_report
from ..config import AppConfig
from ..errors import AlreadyIngestedError, EmptyStoryError
from ..features.descriptors import PatchParams, extract_descriptors, raw_patches
from ..features.fisher import encode_fisher
from ..features.gmm import train_gmm
from ..features.io import save_feature_artifact
from ..features.pca import train_pca
from ..ingestion.ops import dedupe_images, extract_images, fetch_story_articles
from ..ingestion.sources import ArticleSource, FixtureSource
from ..ingestion.types import ArticleImage, StoryQuery
from .repository import DataRepository

logger = logging.getLogger(__name__)

PCA_SAMPLE_CAP = 200_000

_Provenance = namedtuple("_Provenance", ["article_id", "source_name"])


def make_source(config: AppConfig) -> ArticleSource:
    if config.platform_mode == "live":
        from ..ingestion.sources import LiveSource

        return LiveSource(
            user_agent=config.user_agent,
            politeness_delay_ms=config.politeness_delay_ms,
        )
    return FixtureSource(config.fixtures_dir)


def ingest_story(
    query: StoryQuery,
    source: ArticleSource,
    config: AppConfig,
    repo: DataRepository,
    force: bool = False,
) -> dict:
    """Fetch, extract, dedupe, persist. Returns the story document."""
    if repo.story_exists(query.story_id) and not force:
        raise AlreadyIngestedError(query.story_id)
    articles = fetch_story_articles(query, source, limit=config.article_limit)
    if not articles:
        raise EmptyStoryError(f"no articles for story {query.story_id}")

    images: list[ArticleImage] = []
    for article in articles:
        images.extend(
            extract_images(
                article,
                image_fetcher=lambda url: source.fetch_image_bytes(query.story_id, url),
                min_width=config.min_image_width,
                min_height=config.min_image_height,
                concurrency=config.fetch_concurrency,
            )
        )
    images = dedupe_images(images)
    if not images:
        raise EmptyStoryError(f"no usable images for story {query.story_id}")

    if force:
        repo.delete_story(query.story_id)
    return repo.save_story(query.story_id, articles, images)


def compute_story_features(
    images: list[ArticleImage], config: AppConfig
):
    """Per-story PCA + GMM on pooled patches, then one Fisher vector per image."""
    params = PatchParams(
        patch_size=config.patch_size,
        stride=config.patch_stride,
        reduced_dim=config.descriptor_dim,
    )
    pooled = np.vstack(
        [raw_patches(img.raster, params.patch_size, params.stride) for img in images]
    )
    if pooled.shape[0] > PCA_SAMPLE_CAP:
        rng = np.random.default_rng(config.feature_seed)
        pooled_sample = pooled[
            np.sort(rng.choice(pooled.shape[0], PCA_SAMPLE_CAP, replace=False))
        ]
    else:
        pooled_sample = pooled
    pca = train_pca(pooled_sample, out_dim=config.descriptor_dim)

    dsets = [extract_descriptors(img, params, pca) for img in images]
    all_descriptors = np.vstack([d.descriptors for d in dsets])
    gmm = train_gmm(
        all_descriptors,
        n_components=config.gmm_components,
        seed=config.feature_seed,
        max_iter=config.gmm_max_iter,
        tol=config.gmm_tol,
        variance_floor=config.variance_floor,
    )
    vectors = [encode_fisher(dset, gmm, normalize=True) for dset in dsets]
    return vectors, gmm, pca


def cluster_story(
    story_id: str,
    config: AppConfig,
    repo: DataRepository,
    k: int | None = None,
    auto_k: bool = True,
) -> dict:
    """Cluster a persisted story's images and write the cluster report."""
    story_doc = repo.load_story_doc(story_id)
    images = repo.load_story_images(story_id)
    vectors, gmm, pca = compute_story_features(images, config)
    save_feature_artifact(repo.features_path(story_id), vectors, gmm, pca)

    n = len(vectors)
    if k is not None:
        chosen_k, used_auto = min(k, n), False
    elif n >= 3:
        probe = ClusteringParams(
            k=2,
            seed=config.cluster_seed,
            max_iter=config.cluster_max_iter,
            tol=config.cluster_tol,
            restarts=config.cluster_restarts,
        )
        chosen_k, used_auto = choose_k(vectors, 2, min(8, n - 1), probe), True
    else:
        chosen_k, used_auto = n, True

    params = ClusteringParams(
        k=chosen_k,
        seed=config.cluster_seed,
        max_iter=config.cluster_max_iter,
        tol=config.cluster_tol,
        restarts=config.cluster_restarts,
    )
    assignment = kmeans(vectors, params)
    provenance = [
        _Provenance(a["article_id"], a["source_name"]) for a in story_doc["articles"]
    ]
    clusters = build_clusters(assignment, images, provenance)
    return write_cluster_report(
        repo.clusters_path(story_id),
        story_id,
        params,
        clusters,
        assignment.inertia,
        auto_k=used_auto,
    )


def ingest_and_cluster(
    query: StoryQuery,
    source: ArticleSource,
    config: AppConfig,
    repo: DataRepository,
    k: int | None = None,
    force: bool = False,
) -> dict:
    """Full pipeline for one story; partial artifacts are removed on failure."""
    existed_before = repo.story_exists(query.story_id)
    try:
        story_doc = ingest_story(query, source, config, repo, force=force)
        cluster_doc = cluster_story(
            query.story_id, config, repo, k=k, auto_k=k is None
        )
    except (AlreadyIngestedError, EmptyStoryError):
        raise
    except Exception:
        if not existed_before:
            repo.delete_story(query.story_id)
        raise
    return {"story": story_doc, "clusters": cluster_doc}
