from __future__ import annotations

import re

from .lexicon import bundled

_PARAGRAPH = re.compile(r"\n[ \t\r\f\v]*\n")
# a run of terminators, optional closing quotes/brackets, then whitespace or end
_BOUNDARY = re.compile(r"[.!?]+[\"'”’)\]]*(?=\s|$)")
_LAST_WORD = re.compile(r"(\S+)$")
_INITIAL = re.compile(r"^[A-Z]\.$")
_NUMBER = re.compile(r"^\d+\.$")


def _normalize(text: str) -> str:
    return " ".join(text.split())


def _is_boundary(paragraph: str, end: int, abbreviations: dict[str, str]) -> bool:
    word = _LAST_WORD.search(paragraph, 0, end)
    raw = word.group(1).lstrip("(\"'“‘[") if word else ""
    last = raw.lower()
    rest = paragraph[end:].lstrip()
    if not rest:
        return True
    mode = abbreviations.get(last)
    if mode == "mid":
        return False
    if mode == "any":
        return rest[0].isupper()
    if _INITIAL.match(raw):
        return False
    if _NUMBER.match(last) and not rest[0].isupper():
        return False
    return True


def split_sentences(text: str, abbreviations: dict[str, str] | None = None) -> list[str]:
    """Split ``text`` into sentences.

    Blank lines are hard boundaries. Within a paragraph a run of ``.``, ``!``
    or ``?`` followed by whitespace ends a sentence unless the word it closes
    is a known abbreviation. Whitespace inside each sentence is collapsed.
    """
    if abbreviations is None:
        abbreviations = bundled("abbreviations")
    sentences: list[str] = []
    for paragraph in _PARAGRAPH.split(text):
        if not paragraph.strip():
            continue
        start = 0
        for m in _BOUNDARY.finditer(paragraph):
            if not _is_boundary(paragraph, m.end(), abbreviations):
                continue
            piece = _normalize(paragraph[start:m.end()])
            if piece:
                sentences.append(piece)
            start = m.end()
        tail = _normalize(paragraph[start:])
        if tail:
            sentences.append(tail)
    return sentences
