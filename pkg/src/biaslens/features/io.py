"""Versioned JSON artifact for per-story feature state.

Layout: a documented header (component count, descriptor dim, normalization
flag, train seed) followed by row-major vector values, plus the PCA/GMM
parameters needed to re-encode new images consistently. Serialization is
byte-deterministic: sorted keys, fixed separators, repr-exact floats.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .fisher import FisherVector
from .gmm import GmmModel
from .pca import PcaModel

ARTIFACT_VERSION = 1


def save_feature_artifact(
    path: Path,
    vectors: list[FisherVector],
    gmm: GmmModel,
    pca: PcaModel,
) -> None:
    doc = {
        "version": ARTIFACT_VERSION,
        "header": {
            "gmm_components": gmm.n_components,
            "descriptor_dim": gmm.dim,
            "normalized": all(fv.normalized for fv in vectors),
            "seed": gmm.train_seed,
        },
        "image_ids": [fv.image_id for fv in vectors],
        "vector_normalized": [fv.normalized for fv in vectors],
        "vectors": [fv.values.tolist() for fv in vectors],
        "gmm": {
            "weights": gmm.weights.tolist(),
            "means": gmm.means.tolist(),
            "variances": gmm.variances.tolist(),
        },
        "pca": {
            "mean": pca.mean.tolist(),
            "components": pca.components.tolist(),
        },
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def load_feature_artifact(path: Path):
    doc = json.loads(Path(path).read_text())
    if doc.get("version") != ARTIFACT_VERSION:
        raise ValueError(f"unsupported feature artifact version {doc.get('version')}")
    header = doc["header"]
    vectors = [
        FisherVector(image_id, np.asarray(vals, dtype=np.float64), normalized)
        for image_id, vals, normalized in zip(
            doc["image_ids"], doc["vectors"], doc["vector_normalized"]
        )
    ]
    gmm = GmmModel(
        weights=np.asarray(doc["gmm"]["weights"], dtype=np.float64),
        means=np.asarray(doc["gmm"]["means"], dtype=np.float64),
        variances=np.asarray(doc["gmm"]["variances"], dtype=np.float64),
        train_seed=header["seed"],
    )
    pca = PcaModel(
        mean=np.asarray(doc["pca"]["mean"], dtype=np.float64),
        components=np.asarray(doc["pca"]["components"], dtype=np.float64),
    )
    return vectors, gmm, pca
