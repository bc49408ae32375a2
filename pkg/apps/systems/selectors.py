"""
Corpus selectors - READ operations over the shipped model files
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from django.conf import settings

from apps.core.exceptions import NotFoundError, ValidationError

from .dsl import parse_model_file
from .types import OdeModel

MODEL_SUFFIX = '.model'
GOLDEN_SUFFIX = '.golden.json'


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    variant: str
    path: Path

    @property
    def key(self) -> str:
        return f"{self.name}/{self.variant}"

    @property
    def golden_path(self) -> Path:
        return self.path.with_name(self.variant + GOLDEN_SUFFIX)

    @property
    def has_golden(self) -> bool:
        return self.golden_path.exists()


def corpus_dir() -> Path:
    return Path(getattr(settings, 'OBSRANK_CORPUS_DIR', Path(settings.BASE_DIR) / 'models'))


def corpus_list(*, name: Optional[str] = None) -> List[CorpusEntry]:
    """
    Corpus entries sorted by name then variant
    """
    root = corpus_dir()
    entries = []
    for path in sorted(root.glob(f"*/*{MODEL_SUFFIX}")):
        entry = CorpusEntry(path.parent.name, path.name[:-len(MODEL_SUFFIX)], path)
        if name is None or entry.name == name.lower():
            entries.append(entry)
    return entries


def corpus_get(*, name: str, variant: Optional[str] = None) -> CorpusEntry:
    """
    Look up one corpus entry

    Without a variant, a model with a single variant (or a 'default' one)
    is accepted.
    """
    entries = corpus_list(name=name)
    if not entries:
        raise NotFoundError(f"No corpus model named '{name}'",
                            hint=f"known models: {', '.join(sorted({e.name for e in corpus_list()}))}")
    variants = {e.variant: e for e in entries}
    if variant is None:
        if len(entries) == 1:
            return entries[0]
        if 'default' in variants:
            return variants['default']
        raise NotFoundError(f"Model '{name}' has several variants; pick one",
                            hint=', '.join(sorted(variants)))
    if variant not in variants:
        raise NotFoundError(f"Model '{name}' has no variant '{variant}'", hint=', '.join(sorted(variants)))
    return variants[variant]


def builtin_model(*, name: str, variant: Optional[str] = None) -> OdeModel:
    entry = corpus_get(name=name, variant=variant)
    return parse_model_file(entry.path, name=entry.key)


def golden_get(*, name: str, variant: Optional[str] = None) -> Optional[dict]:
    """
    Quoted classification for a corpus entry, or None when there is none
    """
    entry = corpus_get(name=name, variant=variant)
    if not entry.has_golden:
        return None
    try:
        golden = json.loads(entry.golden_path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"Malformed golden file {entry.golden_path}: {exc.msg}")
    if golden.get('status') not in ('fispo', 'deficient'):
        raise ValidationError(f"Golden file {entry.golden_path} has no valid status")
    return golden


def parse_model_reference(reference: str) -> CorpusEntry:
    """
    Resolve 'name' or 'name/variant'
    """
    name, _, variant = reference.strip().partition('/')
    return corpus_get(name=name, variant=variant or None)
