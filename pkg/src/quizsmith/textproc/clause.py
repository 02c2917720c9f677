from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .lexicon import bundled
from .tagger import RELATIVES, auxiliaries, modals
from .tags import NOMINAL, PosTag
from .tokens import TaggedSentence, Token

WH_WORDS = frozenset({"what", "which", "who", "whom", "whose", "why", "how", "where", "when"})
PLURAL_VERBS = frozenset({"are", "were", "have", "do"})
SINGULAR_VERBS = frozenset({"is", "was", "has", "does", "am"})
_CLAUSE_BREAKS = frozenset({";", ":", ",", "(", ")", "\u2014", "\u2013"})


@dataclass(frozen=True)
class ClauseReport:
    starts_with_adverb: bool
    starts_with_subordinator: bool
    is_declarative: bool
    subject_index: int | None
    verb_index: int | None
    verb_is_plural: bool


def subordinators(extra: Iterable[str] = ()) -> frozenset[str]:
    return frozenset(bundled("subordinators")) | {" ".join(e.lower().split()) for e in extra}


def is_finite_verb(tokens: Sequence[Token], j: int) -> bool:
    tok = tokens[j]
    if tok.tag is not PosTag.VERB:
        return False
    word = tok.surface.lower()
    if word in auxiliaries():
        return True
    if word.endswith("ing"):
        return False
    k = j - 1
    while k >= 0 and tokens[k].tag is PosTag.ADVERB:
        k -= 1
    if k < 0:
        return True
    prev = tokens[k]
    if prev.surface.lower() == "to" or prev.surface.lower() in auxiliaries():
        return False
    return prev.tag not in (PosTag.DETERMINER, PosTag.PREPOSITION)


def verb_is_plural(tok: Token) -> bool:
    """True for verb forms that agree only with a plural subject.

    Modals and past forms agree with either number and count as not plural.
    """
    word = tok.surface.lower()
    if word in PLURAL_VERBS:
        return True
    if word in SINGULAR_VERBS or word in auxiliaries() or word in modals():
        return False
    return tok.tag is PosTag.VERB and word == tok.lemma and word != "be"


def _first_word(tokens: Sequence[Token]) -> int | None:
    for i, tok in enumerate(tokens):
        if not tok.is_punct:
            return i
    return None


def analyze_clause(sentence: TaggedSentence, extra_subordinators: Iterable[str] = ()) -> ClauseReport:
    tokens = sentence.tokens
    first = _first_word(tokens)
    if first is None:
        return ClauseReport(False, False, False, None, None, False)

    starts_with_adverb = tokens[first].tag is PosTag.ADVERB

    subs = subordinators(extra_subordinators)
    lead = [t.surface.lower() for t in tokens[first:first + 2]]
    starts_with_subordinator = lead[0] in subs or (len(lead) == 2 and " ".join(lead) in subs)

    interrogative = (
        tokens[-1].surface == "?"
        or lead[0] in WH_WORDS
        or lead[0] in auxiliaries()
    )
    subject_index = verb_index = None
    if not interrogative:
        last_nominal = None
        for j, tok in enumerate(tokens):
            if last_nominal is not None and is_finite_verb(tokens, j):
                subject_index, verb_index = last_nominal, j
                break
            if tok.tag in NOMINAL:
                last_nominal = j
    declarative = verb_index is not None
    plural = declarative and verb_is_plural(tokens[verb_index])
    return ClauseReport(starts_with_adverb, starts_with_subordinator, declarative, subject_index, verb_index, plural)


def governing_verb(tokens: Sequence[Token], index: int) -> int | None:
    """Index of the finite verb whose subject is the token at ``index``.

    The token counts as a subject when it is not the object of a preposition
    or verb, and the next content word to its right, skipping relative
    pronouns and adverbs, is a finite verb inside the same clause.
    """
    if index > 0:
        prev = tokens[index - 1]
        if prev.tag in (PosTag.PREPOSITION, PosTag.VERB):
            return None
    for j in range(index + 1, len(tokens)):
        tok = tokens[j]
        word = tok.surface.lower()
        if word in _CLAUSE_BREAKS or tok.surface in ".!?":
            return None
        if word in RELATIVES or tok.tag is PosTag.ADVERB:
            continue
        if tok.tag is PosTag.VERB:
            return j if is_finite_verb(tokens, j) else None
        if tok.tag in NOMINAL or tok.tag is PosTag.DETERMINER:
            return None
    return None
