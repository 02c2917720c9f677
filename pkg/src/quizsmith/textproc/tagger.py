"""Lexicon-and-suffix part-of-speech tagger.

Tagging runs in two passes. The first assigns each token a tag from the
closed-class lexicon, the open-class lexicon, suffix heuristics or the noun
fallback. The second resolves noun/verb ambiguity, focus particles and
demonstratives from their neighbours.
"""
from __future__ import annotations

from dataclasses import replace
from typing import Sequence

from .lemma import irregular_verbs, lemmatize_word
from .lexicon import bundled
from .tags import PosTag
from .tokens import Token

AMBIGUOUS = "noun|verb"
FOCUS_PARTICLES = frozenset({"even", "only", "just"})
DEMONSTRATIVES = frozenset({"this", "that", "these", "those"})
RELATIVES = frozenset({"that", "which", "who"})

_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ity", "ance", "ence", "ism", "ship", "hood")
_ADJ_SUFFIXES = ("ous", "ive", "able", "ible", "ful", "less", "al", "ic")
_NOMINAL_CONTEXT = frozenset({PosTag.NOUN, PosTag.DETERMINER, PosTag.ADJECTIVE})


def closed_class() -> dict[str, str]:
    return bundled("closed_class")


def open_class() -> dict[str, str]:
    return bundled("open_class")


def auxiliaries() -> frozenset[str]:
    return frozenset(w for w, t in closed_class().items() if t in ("auxiliary", "modal"))


def modals() -> frozenset[str]:
    return frozenset(w for w, t in closed_class().items() if t == "modal")


def _as_tag(value: str) -> PosTag:
    if value in ("auxiliary", "modal"):
        return PosTag.VERB
    return PosTag(value.split("|")[0])


def _lexical_tag(word: str, prev: str | None) -> tuple[PosTag, bool]:
    """Tag for a non-glossary word and whether it is noun/verb ambiguous."""
    closed = closed_class().get(word)
    if closed is not None:
        return _as_tag(closed), False
    if word in irregular_verbs() and open_class().get(irregular_verbs()[word]) in ("verb", AMBIGUOUS):
        return PosTag.VERB, False
    entry = open_class().get(word) or open_class().get(lemmatize_word(word))
    if entry is not None:
        if entry == AMBIGUOUS:
            return PosTag.NOUN, True
        return _as_tag(entry), False
    if word.endswith("ly") and len(word) > 4:
        return PosTag.ADVERB, False
    if word.endswith(("ing", "ed")) and prev in auxiliaries():
        return PosTag.VERB, False
    if word.endswith(_NOUN_SUFFIXES):
        return PosTag.NOUN, False
    if word.endswith(_ADJ_SUFFIXES) and len(word) > 4:
        return PosTag.ADJECTIVE, False
    return PosTag.NOUN, False


def _before_adverbs(tags: list[PosTag], i: int) -> PosTag | None:
    """Tag of the nearest token before ``i`` that is not an adverb."""
    j = i - 1
    while j >= 0 and tags[j] is PosTag.ADVERB:
        j -= 1
    return tags[j] if j >= 0 else None


def pos_tag(tokens: Sequence[Token], glossary_pos: dict[str, str] | None = None) -> list[Token]:
    """Return copies of ``tokens`` with their ``tag`` filled in.

    ``glossary_pos`` maps glossary lemmas to their declared part of speech;
    glossary tokens default to noun when it is absent.
    """
    glossary_pos = glossary_pos or {}
    tags: list[PosTag] = []
    ambiguous: list[bool] = []
    prev_word: str | None = None
    for tok in tokens:
        word = tok.surface.lower()
        if tok.is_glossary_term:
            tag, amb = PosTag(glossary_pos.get(tok.lemma, "noun")), False
        elif not any(c.isalnum() for c in word):
            tag, amb = PosTag.PUNCTUATION, False
        elif word[0].isdigit():
            tag, amb = PosTag.DETERMINER, False
        else:
            tag, amb = _lexical_tag(word, prev_word)
        tags.append(tag)
        ambiguous.append(amb)
        prev_word = word

    aux = auxiliaries()
    for i, tok in enumerate(tokens):
        word = tok.surface.lower()
        prev = tokens[i - 1].surface.lower() if i else None
        prev_tag = tags[i - 1] if i else None
        if ambiguous[i]:
            if prev_tag in (PosTag.DETERMINER, PosTag.ADJECTIVE, PosTag.PREPOSITION) and prev != "to":
                tags[i] = PosTag.NOUN
            elif word.endswith("ing") and prev_tag is PosTag.NOUN:
                # gerund heading a compound: "white-box testing measures ..."
                tags[i] = PosTag.NOUN
            elif prev in aux or prev == "to" or prev in RELATIVES or _before_adverbs(tags, i) in (PosTag.NOUN, PosTag.PRONOUN):
                tags[i] = PosTag.VERB
        elif tags[i] is PosTag.NOUN and not tok.is_glossary_term and word.endswith("ed") and prev_tag in (
            PosTag.NOUN,
            PosTag.PRONOUN,
        ):
            # bare past tense after a subject: "the tester automated ..."
            tags[i] = PosTag.VERB
        elif (
            tags[i] is PosTag.NOUN
            and not tok.is_glossary_term
            and word.endswith("s")
            and not word.endswith(("ss", "us", "is"))
            and prev_tag in (PosTag.NOUN, PosTag.PRONOUN)
            and i + 1 < len(tokens)
            and tags[i + 1] is PosTag.DETERMINER
        ):
            # unknown third-person verb between a subject and its object: "the tool exceeds the limit"
            tags[i] = PosTag.VERB
    for i, tok in enumerate(tokens):
        word = tok.surface.lower()
        nxt = tags[i + 1] if i + 1 < len(tokens) else None
        if word in FOCUS_PARTICLES and nxt in _NOMINAL_CONTEXT:
            tags[i] = PosTag.DETERMINER
        elif word in DEMONSTRATIVES and nxt not in _NOMINAL_CONTEXT:
            tags[i] = PosTag.PRONOUN
    return [replace(tok, tag=tag) for tok, tag in zip(tokens, tags)]
