"""Corpus management: ingest concept-labeled documents and classify glossary terms.

Each glossary term observed in the corpus gets exactly one class:

* ``unique(c)``: it occurs in documents of concept ``c`` only;
* ``frequent(c)``: it occurs under several concepts but ``c`` holds at least
  ``tau`` of its occurrences;
* ``common``: it is spread over several concepts with no such owner.
"""
from __future__ import annotations

import hashlib
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import CorpusFormatError, UnknownConceptError
from .knowledge import Glossary, Ontology
from .textproc import PosTag, TaggedSentence, Token, process_sentence, split_sentences

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
DEFAULT_TAU = 0.75
UNIQUE, FREQUENT, COMMON = "unique", "frequent", "common"


@dataclass(frozen=True)
class DocumentRecord:
    doc_id: str
    concept: str
    sentences: tuple[TaggedSentence, ...]


@dataclass(frozen=True)
class TermStats:
    lemma: str
    per_concept_occurrences: dict[str, int] = field(default_factory=dict)
    per_concept_docs: dict[str, int] = field(default_factory=dict)

    @property
    def support(self) -> list[str]:
        return sorted(c for c, n in self.per_concept_occurrences.items() if n > 0)

    @property
    def total(self) -> int:
        return sum(self.per_concept_occurrences.values())


@dataclass(frozen=True)
class TermClass:
    kind: str
    concept: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in (UNIQUE, FREQUENT, COMMON):
            raise ValueError(f"unknown term class {self.kind!r}")
        if (self.kind == COMMON) != (self.concept is None):
            raise ValueError("unique/frequent classes carry exactly one concept; common carries none")

    @property
    def is_key(self) -> bool:
        return self.kind in (UNIQUE, FREQUENT)

    def __str__(self) -> str:
        return self.kind if self.concept is None else f"{self.kind}({self.concept})"


@dataclass(frozen=True)
class VennCounts:
    only_a: int
    only_b: int
    shared: int


@dataclass(frozen=True)
class ClassifiedCorpus:
    documents: tuple[DocumentRecord, ...]
    stats: dict[str, TermStats]
    classes: dict[str, TermClass]
    tau: float = DEFAULT_TAU
    concepts: tuple[str, ...] = ()

    def key_terms(self, concept: str) -> list[str]:
        """Lemmas classed unique or frequent for ``concept``, sorted."""
        return sorted(t for t, c in self.classes.items() if c.is_key and c.concept == concept)

    def is_key_term(self, lemma: str, concept: str) -> bool:
        cls = self.classes.get(lemma)
        return cls is not None and cls.is_key and cls.concept == concept

    def sentence(self, doc_id: str, index: int) -> TaggedSentence:
        for doc in self.documents:
            if doc.doc_id == doc_id:
                return doc.sentences[index]
        raise KeyError(doc_id)

    def checksum(self) -> str:
        return hashlib.sha256(dumps_corpus(self).encode("utf-8")).hexdigest()


def read_document(path: Path) -> str:
    return path.read_bytes().decode("utf-8")


def ingest(
    doc_root: str | Path,
    ontology: Ontology,
    glossary: Glossary,
    skipped: list[str] | None = None,
) -> list[DocumentRecord]:
    """Read ``<doc_root>/<concept-id>/*.txt`` into tagged document records.

    Unreadable or non-UTF-8 files are logged, appended to ``skipped`` and left
    out; a subdirectory that names no ontology concept is an error.
    """
    root = Path(doc_root)
    if not root.is_dir():
        raise FileNotFoundError(f"document root {root} is not a directory")
    subdirs = {p.name: p for p in root.iterdir() if p.is_dir()}
    for name in sorted(subdirs):
        if name not in ontology:
            raise UnknownConceptError(name, f"document subdirectory {subdirs[name]}")
    records: list[DocumentRecord] = []
    for concept in ontology.ids:
        if concept not in subdirs:
            continue
        for path in sorted(subdirs[concept].glob("*.txt")):
            doc_id = f"{concept}/{path.name}"
            try:
                text = read_document(path)
            except (OSError, UnicodeDecodeError) as exc:
                log.warning("skipping %s: %s", path, exc)
                if skipped is not None:
                    skipped.append(f"{doc_id}: {exc}")
                continue
            sentences = tuple(
                process_sentence(raw, glossary, doc_id, concept, i)
                for i, raw in enumerate(split_sentences(text))
            )
            records.append(DocumentRecord(doc_id, concept, sentences))
    if not records:
        log.warning("no documents found under %s", root)
    return records


def count_terms(documents: Iterable[DocumentRecord]) -> dict[str, TermStats]:
    occurrences: dict[str, Counter[str]] = {}
    docs: dict[str, Counter[str]] = {}
    for doc in documents:
        seen: set[str] = set()
        for sentence in doc.sentences:
            for tok in sentence.tokens:
                if not tok.is_glossary_term:
                    continue
                occurrences.setdefault(tok.lemma, Counter())[doc.concept] += 1
                seen.add(tok.lemma)
        for lemma in seen:
            docs.setdefault(lemma, Counter())[doc.concept] += 1
    return {
        lemma: TermStats(lemma, dict(sorted(occurrences[lemma].items())), dict(sorted(docs[lemma].items())))
        for lemma in sorted(occurrences)
    }


def classify_term(per_concept_occurrences: Mapping[str, int], tau: float = DEFAULT_TAU) -> TermClass:
    support = sorted(c for c, n in per_concept_occurrences.items() if n > 0)
    if not support:
        raise ValueError("term has no occurrences")
    if len(support) == 1:
        return TermClass(UNIQUE, support[0])
    total = sum(per_concept_occurrences[c] for c in support)
    top = min(support, key=lambda c: (-per_concept_occurrences[c], c))
    if per_concept_occurrences[top] / total >= tau:
        return TermClass(FREQUENT, top)
    return TermClass(COMMON)


def _check_tau(tau: float) -> None:
    if not 0.5 < tau <= 1.0:
        raise ValueError(f"tau must lie in (0.5, 1.0], got {tau}")


def classify_terms(stats: Mapping[str, TermStats], tau: float = DEFAULT_TAU) -> dict[str, TermClass]:
    _check_tau(tau)
    return {lemma: classify_term(s.per_concept_occurrences, tau) for lemma, s in sorted(stats.items())}


def build_corpus(
    documents: Iterable[DocumentRecord],
    tau: float = DEFAULT_TAU,
    concepts: Iterable[str] = (),
) -> ClassifiedCorpus:
    _check_tau(tau)
    documents = tuple(documents)
    stats = count_terms(documents)
    return ClassifiedCorpus(documents, stats, classify_terms(stats, tau), tau, tuple(concepts))


def overlap_counts(corpus: ClassifiedCorpus, a: str, b: str) -> VennCounts:
    for c in (a, b):
        if corpus.concepts and c not in corpus.concepts:
            raise UnknownConceptError(c)
    only_a = sum(1 for cls in corpus.classes.values() if cls.is_key and cls.concept == a)
    only_b = sum(1 for cls in corpus.classes.values() if cls.is_key and cls.concept == b)
    shared = sum(
        1
        for lemma, cls in corpus.classes.items()
        if cls.kind == COMMON
        and corpus.stats[lemma].per_concept_occurrences.get(a, 0) > 0
        and corpus.stats[lemma].per_concept_occurrences.get(b, 0) > 0
    )
    return VennCounts(only_a, only_b, shared)


# -- persistence ----------------------------------------------------------

def _token_row(tok: Token) -> list[Any]:
    return [tok.surface, tok.lemma, tok.tag.value, tok.is_glossary_term, tok.char_span[0], tok.char_span[1]]


def corpus_to_dict(corpus: ClassifiedCorpus) -> dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "tau": corpus.tau,
        "concepts": list(corpus.concepts),
        "documents": [
            {
                "doc_id": doc.doc_id,
                "concept": doc.concept,
                "sentences": [{"raw": s.raw, "tokens": [_token_row(t) for t in s.tokens]} for s in doc.sentences],
            }
            for doc in corpus.documents
        ],
        "stats": {
            lemma: {"occurrences": s.per_concept_occurrences, "documents": s.per_concept_docs}
            for lemma, s in corpus.stats.items()
        },
        "classes": {lemma: {"class": c.kind, "concept": c.concept} for lemma, c in corpus.classes.items()},
    }


def dumps_corpus(corpus: ClassifiedCorpus) -> str:
    return json.dumps(corpus_to_dict(corpus), sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def corpus_from_dict(data: Any) -> ClassifiedCorpus:
    if not isinstance(data, dict):
        raise CorpusFormatError("corpus file must hold a JSON object")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise CorpusFormatError(f"unsupported corpus format_version {version!r} (expected {FORMAT_VERSION})")
    try:
        documents = tuple(
            DocumentRecord(
                d["doc_id"],
                d["concept"],
                tuple(
                    TaggedSentence(
                        s["raw"],
                        tuple(Token(t[0], t[1], PosTag(t[2]), bool(t[3]), (int(t[4]), int(t[5]))) for t in s["tokens"]),
                        d["doc_id"],
                        d["concept"],
                        i,
                    )
                    for i, s in enumerate(d["sentences"])
                ),
            )
            for d in data["documents"]
        )
        stats = {
            lemma: TermStats(lemma, dict(s["occurrences"]), dict(s["documents"]))
            for lemma, s in data["stats"].items()
        }
        classes = {lemma: TermClass(c["class"], c["concept"]) for lemma, c in data["classes"].items()}
        tau = float(data["tau"])
        concepts = tuple(data["concepts"])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise CorpusFormatError(f"malformed corpus: {exc!r}") from None
    if set(stats) != set(classes):
        raise CorpusFormatError("corpus stats and classes cover different terms")
    return ClassifiedCorpus(documents, stats, classes, tau, concepts)


def save_corpus(corpus: ClassifiedCorpus, path: str | Path) -> None:
    Path(path).write_text(dumps_corpus(corpus), encoding="utf-8")


def load_corpus(path: str | Path) -> ClassifiedCorpus:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusFormatError(f"{path}: not UTF-8: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"{path}: {exc}") from None
    try:
        return corpus_from_dict(data)
    except CorpusFormatError as exc:
        raise CorpusFormatError(f"{path}: {exc}") from None
