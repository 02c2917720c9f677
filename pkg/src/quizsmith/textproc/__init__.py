"""Rule-based shallow NLP used by the corpus, selector and generator."""
from __future__ import annotations

from typing import TYPE_CHECKING

from .clause import ClauseReport, analyze_clause, governing_verb, is_finite_verb, verb_is_plural
from .inflect import GapContext, inflect, vowel_initial
from .lemma import lemmatize, lemmatize_word, pluralize, singularize
from .sentences import split_sentences
from .tagger import pos_tag
from .tags import PosTag
from .tokens import TaggedSentence, Token, tokenize

if TYPE_CHECKING:
    from ..knowledge import Glossary


def process_sentence(
    raw: str,
    glossary: Glossary | None = None,
    source_doc: str = "",
    concept: str = "",
    index: int = 0,
) -> TaggedSentence:
    """Tokenize and tag one raw sentence."""
    tokens = tokenize(raw, glossary)
    pos = glossary.pos_map() if glossary is not None else None
    return TaggedSentence(raw, tuple(pos_tag(tokens, pos)), source_doc, concept, index)


__all__ = [
    "ClauseReport",
    "GapContext",
    "PosTag",
    "TaggedSentence",
    "Token",
    "analyze_clause",
    "governing_verb",
    "inflect",
    "is_finite_verb",
    "lemmatize",
    "lemmatize_word",
    "pluralize",
    "pos_tag",
    "process_sentence",
    "singularize",
    "split_sentences",
    "tokenize",
    "verb_is_plural",
    "vowel_initial",
]
