"""Cue-phrase lexicon for classifying action replies.

Matching is case- and accent-folded substring search. Evangelist cues take
precedence over defender cues; a reply matching neither is 'other'. The
shipped Spanish defaults live in data/lexicon_es.json and can be replaced
with any file of the same shape.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .types import ActionClassification


def fold_text(text: str) -> str:
    """Casefold and strip combining accents: 'Razón' -> 'razon'."""
    decomposed = unicodedata.normalize("NFD", text.casefold())
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


@dataclass(frozen=True)
class CueLexicon:
    version: int
    evangelist: tuple
    defender: tuple
    opt_out: tuple

    @classmethod
    def from_doc(cls, doc: dict) -> "CueLexicon":
        return cls(
            version=doc.get("version", 1),
            evangelist=tuple(doc["evangelist"]),
            defender=tuple(doc["defender"]),
            opt_out=tuple(doc["opt_out"]),
        )

    @classmethod
    def load(cls, path: Path) -> "CueLexicon":
        return cls.from_doc(json.loads(Path(path).read_text()))

    @classmethod
    def default_spanish(cls) -> "CueLexicon":
        data = resources.files("biaslens.data").joinpath("lexicon_es.json").read_text()
        return cls.from_doc(json.loads(data))


def _matches(text_folded: str, cues) -> list[str]:
    return [cue for cue in cues if fold_text(cue) in text_folded]


def classify_response(text: str, lexicon: CueLexicon) -> ActionClassification:
    folded = fold_text(text)
    for label, cues in (("evangelist", lexicon.evangelist), ("defender", lexicon.defender)):
        hits = _matches(folded, cues)
        if hits:
            return ActionClassification(label=label, matched_cues=tuple(hits))
    return ActionClassification(label="other", matched_cues=())


def matched_opt_out(text: str, lexicon: CueLexicon) -> list[str]:
    return _matches(fold_text(text), lexicon.opt_out)
