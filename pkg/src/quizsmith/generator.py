"""Gap-fill MCQ generation.

Every (candidate sentence, key term) pair becomes a question phrase. Its
distractors are key terms of relative concepts that share the answer's
semantic class and fit the gap grammatically. Every 3-subset of those terms
(optionally a seeded sample of them) yields one MCQ whose choice order is
shuffled by a key derived from its content, never from execution order.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import random
from dataclasses import asdict, dataclass, field
from math import comb
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .corpus import DEFAULT_TAU, ClassifiedCorpus
from .errors import (
    CorpusFormatError,
    GenerationError,
    GlossaryError,
    InsufficientDistractorsError,
    ProvenanceError,
)
from .knowledge import DEFAULT_MAX_DISTANCE, Glossary, GlossaryEntry, Ontology, SemanticClass, relatives
from .selector import CandidateSentence, normalize_phrase
from .textproc import GapContext, governing_verb, inflect, verb_is_plural

GAP = "____"
FORMAT_VERSION = 1

TOO_FEW_DISTRACTORS = "too-few-distractors"
ANSWER_DOES_NOT_FIT = "answer-does-not-fit"
OK = "ok"


@dataclass(frozen=True)
class QuestionPhrase:
    text_with_gap: str
    removed_term: str
    gap_token_index: int
    concept: str
    source: tuple[str, int]
    gap_context: GapContext = GapContext()


@dataclass(frozen=True)
class Choice:
    rendered: str
    lemma: str
    is_correct: bool
    origin_concept: str


@dataclass(frozen=True)
class GapFillMCQ:
    id: str
    phrase: QuestionPhrase
    choices: tuple[Choice, Choice, Choice, Choice]
    answer_index: int
    semantic_class: SemanticClass
    seed: int

    @property
    def distractor_set(self) -> tuple[str, ...]:
        return tuple(sorted(c.lemma for c in self.choices if not c.is_correct))


@dataclass(frozen=True)
class GenerationConfig:
    seed: int = 0
    max_distance: int = DEFAULT_MAX_DISTANCE
    max_sets_per_phrase: int | None = None
    tau: float = DEFAULT_TAU
    vowel_exceptions: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.max_sets_per_phrase is not None and self.max_sets_per_phrase < 1:
            raise ValueError("max_sets_per_phrase must be >= 1 when given")
        if self.max_distance < 1:
            raise ValueError("max_distance must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["vowel_exceptions"] = list(self.vowel_exceptions)
        return d


@dataclass(frozen=True)
class PhraseRecord:
    """Outcome of one (sentence, key term) pair, kept even when it yields no MCQ."""

    doc_id: str
    index: int
    key_term: str
    concept: str
    compatible: int
    mcqs: int
    status: str = OK


@dataclass(frozen=True)
class QuestionPool:
    mcqs: tuple[GapFillMCQ, ...]
    config: GenerationConfig
    provenance: str
    phrases: tuple[PhraseRecord, ...] = ()
    concepts: tuple[str, ...] = field(default=())


def _derive_seed(*parts: Any) -> int:
    digest = hashlib.sha256(json.dumps(parts, sort_keys=True).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def make_question_phrase(candidate: CandidateSentence, key_term: str) -> QuestionPhrase:
    try:
        idx = candidate.token_index(key_term)
    except KeyError:
        raise GenerationError(
            f"key term {key_term!r} is not a key term of {candidate.sentence.source_doc}#{candidate.sentence.index}"
        ) from None
    sentence = candidate.sentence
    tokens = sentence.tokens
    start, end = tokens[idx].char_span
    text = sentence.raw[:start] + GAP + sentence.raw[end:]
    preceding = tokens[idx - 1].surface if idx > 0 else None
    verb = governing_verb(tokens, idx)
    plural = verb_is_plural(tokens[verb]) if verb is not None else None
    return QuestionPhrase(
        text, key_term, idx, candidate.concept, (sentence.source_doc, sentence.index), GapContext(preceding, plural)
    )


def _occurs_in(form: str, normalized_text: str) -> bool:
    norm = normalize_phrase(form)
    return bool(norm) and f" {norm} " in normalized_text


def compatible_terms(
    corpus: ClassifiedCorpus,
    ontology: Ontology,
    glossary: Glossary,
    key_term: str,
    concept: str,
    phrase: QuestionPhrase,
    max_distance: int = DEFAULT_MAX_DISTANCE,
    vowel_exceptions: Iterable[str] = (),
) -> list[str]:
    """Lemmas usable as distractors for ``key_term`` in ``phrase``, sorted."""
    entry = glossary.lookup(key_term)
    if entry is None:
        raise GlossaryError(f"key term {key_term!r} is not in the glossary")
    nearby = set(relatives(ontology, concept, max_distance))
    text = f" {normalize_phrase(phrase.text_with_gap)} "
    exceptions = tuple(vowel_exceptions)
    found = []
    for lemma, cls in corpus.classes.items():
        if not cls.is_key or cls.concept not in nearby or lemma == entry.lemma:
            continue
        other = glossary.lookup(lemma)
        if other is None or other.semantic_class is not entry.semantic_class:
            continue
        if any(_occurs_in(form, text) for form in (other.lemma, *other.variants)):
            continue
        if inflect(other, phrase.gap_context, exceptions) is None:
            continue
        found.append(lemma)
    return sorted(found)


def enumerate_distractor_sets(
    terms: Sequence[str], cap: int | None = None, seed: int = 0
) -> list[tuple[str, str, str]]:
    """All 3-subsets of ``terms`` in lexicographic (input) order.

    With ``cap`` below C(n, 3), a seeded uniform sample of ``cap`` subsets
    is returned instead, still in lexicographic order.
    """
    if len(terms) < 3:
        raise InsufficientDistractorsError(f"need at least 3 compatible terms, got {len(terms)}")
    if cap is not None and cap < 1:
        raise ValueError("cap must be >= 1")
    sets = list(itertools.combinations(terms, 3))
    if cap is None or cap >= len(sets):
        return sets
    picked = sorted(random.Random(seed).sample(range(len(sets)), cap))
    return [sets[i] for i in picked]


def assemble_mcq(
    phrase: QuestionPhrase,
    distractors: Iterable[str],
    glossary: Glossary,
    seed: int,
    origins: Mapping[str, str] | None = None,
    mcq_id: str = "",
    vowel_exceptions: Iterable[str] = (),
) -> GapFillMCQ:
    distractors = sorted(distractors)
    if len(set(distractors)) != 3 or phrase.removed_term in distractors:
        raise ValueError(f"need 3 distinct distractors other than {phrase.removed_term!r}, got {distractors}")
    origins = origins or {}
    exceptions = tuple(vowel_exceptions)

    def render(lemma: str) -> tuple[str, GlossaryEntry]:
        entry = glossary.lookup(lemma)
        if entry is None:
            raise GlossaryError(f"term {lemma!r} is not in the glossary")
        text = inflect(entry, phrase.gap_context, exceptions)
        if text is None:
            raise GenerationError(f"term {lemma!r} does not fit the gap context {phrase.gap_context}")
        return text, entry

    text, answer = render(phrase.removed_term)
    pool = [Choice(text, answer.lemma, True, phrase.concept)]
    for lemma in distractors:
        text, entry = render(lemma)
        pool.append(Choice(text, entry.lemma, False, origins.get(lemma, "")))

    order = list(range(4))
    random.Random(_derive_seed(seed, list(phrase.source), phrase.removed_term, distractors)).shuffle(order)
    choices = tuple(pool[i] for i in order)
    return GapFillMCQ(mcq_id, phrase, choices, order.index(0), answer.semantic_class, seed)


def generate_pool(
    corpus: ClassifiedCorpus,
    ontology: Ontology,
    glossary: Glossary,
    candidates: Iterable[CandidateSentence],
    config: GenerationConfig = GenerationConfig(),
    provenance: str | None = None,
) -> QuestionPool:
    """Build the question pool for every (candidate, key term) pair.

    ``provenance`` is the corpus checksum the candidates were selected from;
    when given it must match ``corpus``.
    """
    checksum = corpus.checksum()
    if provenance is not None and provenance != checksum:
        raise ProvenanceError(f"candidates were selected from corpus {provenance[:12]}, not {checksum[:12]}")
    origins = {lemma: cls.concept for lemma, cls in corpus.classes.items() if cls.is_key}
    mcqs: list[GapFillMCQ] = []
    phrases: list[PhraseRecord] = []
    for cand in candidates:
        doc_id, index = cand.sentence.source_doc, cand.sentence.index
        for key_term in cand.lemmas:
            phrase = make_question_phrase(cand, key_term)
            answer = glossary.lookup(key_term)
            if answer is None or inflect(answer, phrase.gap_context, config.vowel_exceptions) is None:
                phrases.append(PhraseRecord(doc_id, index, key_term, cand.concept, 0, 0, ANSWER_DOES_NOT_FIT))
                continue
            terms = compatible_terms(
                corpus, ontology, glossary, key_term, cand.concept, phrase,
                config.max_distance, config.vowel_exceptions,
            )
            if len(terms) < 3:
                phrases.append(PhraseRecord(doc_id, index, key_term, cand.concept, len(terms), 0, TOO_FEW_DISTRACTORS))
                continue
            sets = enumerate_distractor_sets(
                terms, config.max_sets_per_phrase, _derive_seed(config.seed, doc_id, index, key_term)
            )
            for distractors in sets:
                mcq_id = f"Q{len(mcqs) + 1:06d}"
                mcqs.append(
                    assemble_mcq(phrase, distractors, glossary, config.seed, origins, mcq_id, config.vowel_exceptions)
                )
            phrases.append(PhraseRecord(doc_id, index, key_term, cand.concept, len(terms), len(sets)))
    concepts = corpus.concepts or tuple(dict.fromkeys(p.concept for p in phrases))
    return QuestionPool(tuple(mcqs), config, checksum, tuple(phrases), tuple(concepts))


def expected_pool_size(ks: Iterable[int], cap: int | None = None) -> int:
    return sum(min(comb(k, 3), cap) if cap is not None else comb(k, 3) for k in ks if k >= 3)


# -- pool file ------------------------------------------------------------

def mcq_to_record(mcq: GapFillMCQ) -> dict[str, Any]:
    p = mcq.phrase
    return {
        "id": mcq.id,
        "concept": p.concept,
        "question": p.text_with_gap,
        "choices": [c.rendered for c in mcq.choices],
        "answer_index": mcq.answer_index,
        "key_term": p.removed_term,
        "semantic_class": mcq.semantic_class.value,
        "source_doc": p.source[0],
        "seed": mcq.seed,
        "source_index": p.source[1],
        "gap_token_index": p.gap_token_index,
        "gap_context": {"preceding": p.gap_context.preceding, "plural": p.gap_context.plural},
        "choice_lemmas": [c.lemma for c in mcq.choices],
        "choice_concepts": [c.origin_concept for c in mcq.choices],
        "valid": None,
    }


def mcq_from_record(r: Mapping[str, Any]) -> GapFillMCQ:
    ctx = r["gap_context"]
    phrase = QuestionPhrase(
        r["question"], r["key_term"], int(r["gap_token_index"]), r["concept"],
        (r["source_doc"], int(r["source_index"])), GapContext(ctx["preceding"], ctx["plural"]),
    )
    answer = int(r["answer_index"])
    choices = tuple(
        Choice(text, lemma, i == answer, origin)
        for i, (text, lemma, origin) in enumerate(zip(r["choices"], r["choice_lemmas"], r["choice_concepts"]))
    )
    if len(choices) != 4:
        raise ValueError("an MCQ needs exactly 4 choices")
    return GapFillMCQ(r["id"], phrase, choices, answer, SemanticClass(r["semantic_class"]), int(r["seed"]))


def dumps_pool(pool: QuestionPool) -> str:
    header = {
        "format_version": FORMAT_VERSION,
        "corpus_checksum": pool.provenance,
        "config": pool.config.to_dict(),
        "concepts": list(pool.concepts),
        "phrases": [asdict(p) for p in pool.phrases],
    }
    lines = [json.dumps(header, sort_keys=True, ensure_ascii=False)]
    lines += [json.dumps(mcq_to_record(m), sort_keys=True, ensure_ascii=False) for m in pool.mcqs]
    return "\n".join(lines) + "\n"


def save_pool(pool: QuestionPool, path: str | Path) -> None:
    Path(path).write_text(dumps_pool(pool), encoding="utf-8")


def load_pool(path: str | Path) -> QuestionPool:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    try:
        header = json.loads(lines[0])
        if header.get("format_version") != FORMAT_VERSION:
            raise CorpusFormatError(f"{path}: unsupported pool format_version {header.get('format_version')!r}")
        cfg = dict(header["config"])
        cfg["vowel_exceptions"] = tuple(cfg.get("vowel_exceptions", ()))
        config = GenerationConfig(**cfg)
        phrases = tuple(PhraseRecord(**p) for p in header["phrases"])
        mcqs = tuple(mcq_from_record(json.loads(line)) for line in lines[1:] if line.strip())
        return QuestionPool(mcqs, config, header["corpus_checksum"], phrases, tuple(header["concepts"]))
    except (AttributeError, IndexError, KeyError, TypeError, ValueError) as exc:
        raise CorpusFormatError(f"{path}: malformed pool file: {exc!r}") from None
