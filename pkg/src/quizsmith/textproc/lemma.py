"""Rule-based lemmatization and noun inflection.

The suffix cascade strips one inflection per pass and is iterated to a fixed
point, so ``lemmatize`` is idempotent by construction.
"""
from __future__ import annotations

import re
from functools import lru_cache
from typing import TYPE_CHECKING

from .lexicon import bundled

if TYPE_CHECKING:
    from ..knowledge import Glossary

VOWELS = "aeiou"
_SIBILANT_ES = ("ss", "us", "x", "zz", "ch", "sh")
_KEEP_S = ("ss", "us", "is")
# stems that take back a silent e after -ed/-ing removal (e.g. generat -> generate)
_SILENT_E = re.compile(r"([^aeiou](at|ar)|iz|yz|ut|uc|uir|ud|ur|ag|ys|[bdgkpt]l|[nr]c|ns|v)$")
_MONOSYLLABIC_CVC = re.compile(r"^[^aeiou]*[aeiou][^aeiouwxy]$")
_UNDOUBLE = re.compile(r"([bcgkmnprtv])\1$")


def irregular_verbs() -> dict[str, str]:
    return bundled("irregular_verbs")


def irregular_nouns() -> dict[str, str]:
    return bundled("irregular_nouns")


@lru_cache(maxsize=None)
def _plural_table() -> dict[str, str]:
    return {singular: plural for plural, singular in irregular_nouns().items()}


def _has_vowel(stem: str) -> bool:
    return any(c in VOWELS + "y" for c in stem)


def _restore_stem(stem: str) -> str:
    if _UNDOUBLE.search(stem):
        return stem[:-1]
    if _MONOSYLLABIC_CVC.match(stem) or _SILENT_E.search(stem):
        return stem + "e"
    return stem


def _strip_once(word: str) -> str:
    table = irregular_verbs().get(word) or irregular_nouns().get(word)
    if table is not None:
        return table
    # function words ("always", "thus", "its") carry no inflection
    if not word.isalpha() or word in bundled("closed_class"):
        return word
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("ied") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("es") and word[:-2].endswith(_SIBILANT_ES) and len(word) > 4:
        return word[:-2]
    if word.endswith("s") and not word.endswith(_KEEP_S) and len(word) > 3:
        return word[:-1]
    if word.endswith("ing") and not word.endswith("eing"):
        stem = word[:-3]
        if len(stem) >= 2 and _has_vowel(stem):
            return _restore_stem(stem)
    if word.endswith("ed") and not word.endswith("eed"):
        stem = word[:-2]
        if len(stem) >= 2 and _has_vowel(stem):
            return _restore_stem(stem)
    return word


@lru_cache(maxsize=65536)
def lemmatize_word(word: str) -> str:
    """Lemma of a single lower-cased word using only the bundled rules and tables."""
    word = word.lower()
    for _ in range(len(word) + 1):
        nxt = _strip_once(word)
        if nxt == word:
            break
        word = nxt
    return word


def lemmatize(surface: str, glossary: Glossary | None = None) -> str:
    """Return the dictionary form of ``surface``.

    Glossary variants win over the rules; for multi-word input only the last
    (head) word is reduced, so "test suites" becomes "test suite".
    """
    key = " ".join(surface.lower().split())
    if glossary is not None:
        entry = glossary.lookup(key)
        if entry is not None:
            return entry.lemma
    if not key:
        return key
    words = key.split(" ")
    words[-1] = lemmatize_word(words[-1])
    lemma = " ".join(words)
    if glossary is not None:
        entry = glossary.lookup(lemma)
        if entry is not None:
            return entry.lemma
    return lemma


def singularize(noun: str) -> str:
    """Singular of an English noun (head word only for phrases)."""
    *rest, head = noun.split(" ")
    low = head.lower()
    if low in irregular_nouns():
        head = irregular_nouns()[low]
    elif low.endswith("ies") and len(low) > 4:
        head = head[:-3] + "y"
    elif low.endswith("es") and low[:-2].endswith(_SIBILANT_ES) and len(low) > 4:
        head = head[:-2]
    elif low.endswith("s") and not low.endswith(_KEEP_S) and len(low) > 3:
        head = head[:-1]
    return " ".join([*rest, head])


def pluralize(noun: str) -> str:
    """Plural of an English noun phrase, inflecting its head (last) word."""
    *rest, head = noun.split(" ")
    low = head.lower()
    if low in _plural_table():
        head = _plural_table()[low]
    elif low.endswith("y") and len(low) > 1 and low[-2] not in VOWELS:
        head = head[:-1] + "ies"
    elif low.endswith(("s", "x", "z", "ch", "sh")):
        head = head + "es"
    else:
        head = head + "s"
    return " ".join([*rest, head])
