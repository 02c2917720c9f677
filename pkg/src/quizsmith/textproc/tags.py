from enum import Enum


class PosTag(str, Enum):
    NOUN = "noun"
    PRONOUN = "pronoun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    ADVERB = "adverb"
    PREPOSITION = "preposition"
    CONJUNCTION = "conjunction"
    INTERJECTION = "interjection"
    DETERMINER = "determiner"
    PUNCTUATION = "punctuation"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


NOMINAL = frozenset({PosTag.NOUN, PosTag.PRONOUN})
