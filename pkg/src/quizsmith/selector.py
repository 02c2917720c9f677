"""Sentence selection: keep sentences that can become question phrases.

A sentence is a candidate when it

1. names a concept (its title or an alias),
2. contains a unique or frequent term of that concept,
3. is a main clause (no leading connective such as "however"), and
4. is declarative, with a subject before a finite verb and no leading adverb.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Iterable

from .corpus import ClassifiedCorpus
from .errors import CorpusFormatError
from .knowledge import Ontology
from .textproc import TaggedSentence, analyze_clause, lemmatize_word

MIN_WORDS = 4
FORMAT_VERSION = 1
_WORD = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class SelectionVerdict:
    doc_id: str
    index: int
    c1: bool
    c2: bool
    c3: bool
    c4: bool
    accepted: bool
    concept: str | None = None
    key_terms: tuple[str, ...] = ()

    @property
    def sentence_ref(self) -> tuple[str, int]:
        return self.doc_id, self.index

    def to_record(self) -> dict[str, Any]:
        return {
            "doc_id": self.doc_id,
            "index": self.index,
            "c1": self.c1,
            "c2": self.c2,
            "c3": self.c3,
            "c4": self.c4,
            "accepted": self.accepted,
            "concept": self.concept,
            "key_terms": list(self.key_terms),
        }


@dataclass(frozen=True)
class CandidateSentence:
    sentence: TaggedSentence
    concept: str
    key_terms: tuple[tuple[str, int], ...]

    @property
    def lemmas(self) -> list[str]:
        return [lemma for lemma, _ in self.key_terms]

    def token_index(self, lemma: str) -> int:
        for term, idx in self.key_terms:
            if term == lemma:
                return idx
        raise KeyError(lemma)


def normalize_phrase(text: str) -> str:
    """Lower-case, drop punctuation and hyphens, and lemmatize each word."""
    return " ".join(lemmatize_word(w) for w in _WORD.findall(text.lower()))


@lru_cache(maxsize=32)
def _concept_forms(ontology: Ontology) -> dict[str, tuple[str, ...]]:
    return {
        c.id: tuple(f for f in (normalize_phrase(s) for s in c.surface_forms) if f)
        for c in ontology.concepts
    }


def check_criterion_1(sentence: TaggedSentence, ontology: Ontology) -> str | None:
    """Concept whose title or alias occurs in the sentence.

    Several matches resolve to the document's own concept, then to the
    longest matching form, then to ontology order.
    """
    text = f" {normalize_phrase(sentence.raw)} "
    matches: dict[str, int] = {}
    for cid, forms in _concept_forms(ontology).items():
        best = max((len(f) for f in forms if f" {f} " in text), default=0)
        if best:
            matches[cid] = best
    if not matches:
        return None
    if sentence.concept in matches:
        return sentence.concept
    order = {cid: i for i, cid in enumerate(ontology.ids)}
    return min(matches, key=lambda c: (-matches[c], order[c]))


_MAX_NAME_TOKENS = 6


def _name_token_mask(sentence: TaggedSentence, ontology: Ontology) -> set[int]:
    """Indices of tokens that belong to an occurrence of any concept title or alias."""
    forms = {f for fs in _concept_forms(ontology).values() for f in fs}
    surfaces = [t.surface for t in sentence.tokens]
    masked: set[int] = set()
    for i in range(len(surfaces)):
        for j in range(i + 1, min(i + _MAX_NAME_TOKENS, len(surfaces)) + 1):
            if normalize_phrase(" ".join(surfaces[i:j])) in forms:
                masked.update(range(i, j))
    return masked


def _key_term_positions(
    sentence: TaggedSentence, concept: str, corpus: ClassifiedCorpus, ontology: Ontology | None
) -> list[tuple[str, int]]:
    titles = set(_concept_forms(ontology).get(concept, ())) if ontology is not None else set()
    # a term inside a concept name ("decision table" in "decision table testing") is never blanked
    masked = _name_token_mask(sentence, ontology) if ontology is not None else set()
    found: list[tuple[str, int]] = []
    seen: set[str] = set()
    for i, tok in enumerate(sentence.tokens):
        if not tok.is_glossary_term or tok.lemma in seen or i in masked:
            continue
        if corpus.is_key_term(tok.lemma, concept) and normalize_phrase(tok.lemma) not in titles:
            found.append((tok.lemma, i))
            seen.add(tok.lemma)
    return found


def check_criterion_2(
    sentence: TaggedSentence, concept: str, corpus: ClassifiedCorpus, ontology: Ontology | None = None
) -> list[str]:
    """Key terms of ``concept`` in the sentence, in token order.

    With an ontology, lemmas that merely restate the concept's title or an
    alias are left out.
    """
    return [lemma for lemma, _ in _key_term_positions(sentence, concept, corpus, ontology)]


def check_criterion_3(sentence: TaggedSentence, extra_subordinators: Iterable[str] = ()) -> bool:
    return not analyze_clause(sentence, extra_subordinators).starts_with_subordinator


def check_criterion_4(sentence: TaggedSentence) -> bool:
    report = analyze_clause(sentence)
    return report.is_declarative and not report.starts_with_adverb


def evaluate_sentence(
    sentence: TaggedSentence,
    corpus: ClassifiedCorpus,
    ontology: Ontology,
    extra_subordinators: Iterable[str] = (),
    min_words: int = MIN_WORDS,
) -> tuple[SelectionVerdict, CandidateSentence | None]:
    ref = (sentence.source_doc, sentence.index)
    if len(sentence.words()) < min_words:
        return SelectionVerdict(*ref, False, False, False, False, False), None
    concept = check_criterion_1(sentence, ontology)
    positions = _key_term_positions(sentence, concept, corpus, ontology) if concept else []
    c1, c2 = concept is not None, bool(positions)
    c3 = check_criterion_3(sentence, extra_subordinators)
    c4 = check_criterion_4(sentence)
    accepted = c1 and c2 and c3 and c4
    verdict = SelectionVerdict(*ref, c1, c2, c3, c4, accepted, concept, tuple(t for t, _ in positions))
    candidate = CandidateSentence(sentence, concept, tuple(positions)) if accepted else None
    return verdict, candidate


def select_sentences(
    corpus: ClassifiedCorpus,
    ontology: Ontology,
    extra_subordinators: Iterable[str] = (),
    min_words: int = MIN_WORDS,
) -> tuple[list[CandidateSentence], list[SelectionVerdict]]:
    """Evaluate every corpus sentence, in corpus order."""
    extra = tuple(extra_subordinators)
    candidates: list[CandidateSentence] = []
    verdicts: list[SelectionVerdict] = []
    for doc in corpus.documents:
        for sentence in doc.sentences:
            verdict, candidate = evaluate_sentence(sentence, corpus, ontology, extra, min_words)
            verdicts.append(verdict)
            if candidate is not None:
                candidates.append(candidate)
    return candidates, verdicts


def dumps_verdicts(verdicts: Iterable[SelectionVerdict], corpus_checksum: str) -> str:
    header = {"format_version": FORMAT_VERSION, "corpus_checksum": corpus_checksum}
    lines = [json.dumps(header, sort_keys=True)]
    lines += [json.dumps(v.to_record(), sort_keys=True, ensure_ascii=False) for v in verdicts]
    return "\n".join(lines) + "\n"


def save_candidates(path: str | Path, verdicts: Iterable[SelectionVerdict], corpus_checksum: str) -> None:
    Path(path).write_text(dumps_verdicts(verdicts, corpus_checksum), encoding="utf-8")


def load_candidates(
    path: str | Path, corpus: ClassifiedCorpus, ontology: Ontology | None = None
) -> tuple[list[CandidateSentence], list[SelectionVerdict], str]:
    """Read a verdict file and rebuild the accepted candidates from ``corpus``.

    Pass the ontology used for selection so key-term positions skip concept
    names exactly as selection did; without it the first occurrence is used.
    Returns ``(candidates, verdicts, corpus_checksum_recorded_in_file)``.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    try:
        header = json.loads(lines[0])
        if header.get("format_version") != FORMAT_VERSION:
            raise CorpusFormatError(f"{path}: unsupported format_version {header.get('format_version')!r}")
        verdicts = []
        for line in lines[1:]:
            r = json.loads(line)
            verdicts.append(
                SelectionVerdict(
                    r["doc_id"], int(r["index"]), r["c1"], r["c2"], r["c3"], r["c4"], r["accepted"],
                    r["concept"], tuple(r["key_terms"]),
                )
            )
        checksum = header["corpus_checksum"]
    except (AttributeError, IndexError, KeyError, TypeError, ValueError) as exc:
        raise CorpusFormatError(f"{path}: malformed candidates file: {exc!r}") from None
    by_doc = {d.doc_id: d for d in corpus.documents}
    candidates = []
    for v in verdicts:
        if not v.accepted:
            continue
        try:
            sentence = by_doc[v.doc_id].sentences[v.index]
        except (KeyError, IndexError):
            raise CorpusFormatError(f"{path}: sentence {v.doc_id}#{v.index} not in corpus") from None
        masked = _name_token_mask(sentence, ontology) if ontology is not None else set()
        positions = []
        for lemma in v.key_terms:
            idx = next(
                (i for i, t in enumerate(sentence.tokens) if t.lemma == lemma and t.is_glossary_term and i not in masked),
                None,
            )
            if idx is None:
                raise CorpusFormatError(f"{path}: key term {lemma!r} not in {v.doc_id}#{v.index}")
            positions.append((lemma, idx))
        candidates.append(CandidateSentence(sentence, v.concept, tuple(positions)))
    return candidates, verdicts, checksum
