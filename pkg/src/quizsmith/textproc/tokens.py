from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .lemma import lemmatize_word
from .lexicon import bundled
from .tags import PosTag

if TYPE_CHECKING:
    from ..knowledge import Glossary

_BASE = re.compile(r"(?:[A-Za-z]\.){2,}|\w+(?:[-'’/.]\w+)*|[^\w\s]")


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    tag: PosTag = PosTag.UNKNOWN
    is_glossary_term: bool = False
    char_span: tuple[int, int] = (0, 0)

    @property
    def is_punct(self) -> bool:
        return self.tag is PosTag.PUNCTUATION or not any(c.isalnum() for c in self.surface)


@dataclass(frozen=True)
class TaggedSentence:
    raw: str
    tokens: tuple[Token, ...]
    source_doc: str = ""
    concept: str = ""
    index: int = 0

    def words(self) -> list[Token]:
        return [t for t in self.tokens if not t.is_punct]


def word_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of the glossary-unaware base tokens of ``text``."""
    abbreviations = bundled("abbreviations")
    spans: list[tuple[int, int]] = []
    for m in _BASE.finditer(text):
        start, end = m.span()
        if (
            m.group() == "."
            and spans
            and spans[-1][1] == start
            and text[spans[-1][0]:end].lower() in abbreviations
        ):
            spans[-1] = (spans[-1][0], end)
            continue
        spans.append((start, end))
    return spans


def base_words(text: str) -> tuple[str, ...]:
    return tuple(text[s:e].lower() for s, e in word_spans(text))


def _match_length(words: list[str], i: int, index: dict[tuple[str, ...], str], longest: int) -> tuple[int, str] | None:
    for n in range(min(longest, len(words) - i), 0, -1):
        key = tuple(words[i:i + n])
        lemma = index.get(key)
        if lemma is None:
            head = lemmatize_word(key[-1])
            if head != key[-1]:
                lemma = index.get(key[:-1] + (head,))
        if lemma is not None:
            return n, lemma
    return None


def tokenize(sentence: str, glossary: Glossary | None = None) -> list[Token]:
    """Split ``sentence`` into untagged tokens.

    Glossary terms are matched greedily, longest first, so multi-word terms
    come out as single tokens. Everything else is split on whitespace and
    punctuation, and each punctuation mark is its own token.
    """
    spans = word_spans(sentence)
    words = [sentence[s:e].lower() for s, e in spans]
    index, longest = glossary.phrase_index() if glossary is not None else ({}, 0)
    tokens: list[Token] = []
    i = 0
    while i < len(spans):
        hit = _match_length(words, i, index, longest) if longest else None
        if hit is not None:
            n, lemma = hit
            start, end = spans[i][0], spans[i + n - 1][1]
            tokens.append(Token(sentence[start:end], lemma, is_glossary_term=True, char_span=(start, end)))
            i += n
            continue
        start, end = spans[i]
        surface = sentence[start:end]
        lemma = lemmatize_word(surface) if any(c.isalpha() for c in surface) else surface.lower()
        tokens.append(Token(surface, lemma, char_span=(start, end)))
        i += 1
    return tokens
