"""Loading of the bundled tab-separated lexicon files.

Every file has one entry per line, ``surface<TAB>value``, UTF-8, with ``#``
starting a comment line.
"""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..errors import InputFormatError


def parse_lexicon(text: str, name: str = "<lexicon>") -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise InputFormatError(f"{name}:{lineno}: expected 'surface<TAB>value', got {line!r}")
        surface, value = parts[0].strip().lower(), parts[1].strip()
        if surface in entries and entries[surface] != value:
            raise InputFormatError(f"{name}:{lineno}: conflicting entry for {surface!r}")
        entries[surface] = value
    return entries


def read_lexicon(path: str | Path) -> dict[str, str]:
    path = Path(path)
    return parse_lexicon(path.read_text(encoding="utf-8"), str(path))


@lru_cache(maxsize=None)
def bundled(name: str) -> dict[str, str]:
    """Return the bundled lexicon ``data/<name>.tsv`` (cached, do not mutate)."""
    text = resources.files(__package__).joinpath("data", f"{name}.tsv").read_text(encoding="utf-8")
    return parse_lexicon(text, f"{name}.tsv")
