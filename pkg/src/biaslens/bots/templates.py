"""Externalized per-language message templates.

The shipped Spanish set is a placeholder an activist is expected to edit;
templates are plain ``str.format`` strings keyed by template_id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class MessageTemplates:
    language: str
    templates: dict

    def render(self, template_id: str, **fields) -> str:
        if template_id not in self.templates:
            raise KeyError(f"unknown template {template_id!r}")
        return self.templates[template_id].format(**fields)

    @classmethod
    def load(cls, path: Path) -> "MessageTemplates":
        doc = json.loads(Path(path).read_text())
        return cls(language=doc["language"], templates=dict(doc["templates"]))

    @classmethod
    def default_spanish(cls) -> "MessageTemplates":
        data = resources.files("biaslens.data").joinpath("templates_es.json").read_text()
        doc = json.loads(data)
        return cls(language=doc["language"], templates=dict(doc["templates"]))
