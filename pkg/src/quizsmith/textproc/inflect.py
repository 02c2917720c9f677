from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

from .lemma import VOWELS, pluralize

if TYPE_CHECKING:
    from ..knowledge import GlossaryEntry


@dataclass(frozen=True)
class GapContext:
    """What the words around a gap demand of the term that fills it."""

    preceding: str | None = None
    plural: bool | None = None


def vowel_initial(text: str, exceptions: Iterable[str] = ()) -> bool:
    """First-letter vowel test; words in ``exceptions`` flip the result."""
    letters = [c for c in text.lower() if c.isalpha()]
    result = bool(letters) and letters[0] in VOWELS
    first_word = text.lower().split(" ", 1)[0] if text else ""
    if first_word in {e.lower() for e in exceptions}:
        result = not result
    return result


def inflect(term: GlossaryEntry, context: GapContext, exceptions: Iterable[str] = ()) -> str | None:
    """Render ``term`` for the gap, or ``None`` when it cannot fit there."""
    if str(term.pos) != "noun":
        return None
    article = (context.preceding or "").lower()
    initial = vowel_initial(term.lemma, exceptions)
    if article == "a" and initial:
        return None
    if article == "an" and not initial:
        return None
    if context.plural:
        return pluralize(term.lemma)
    return term.lemma
