"""Summaries of corpora and question pools, plus the plain-text report."""
from __future__ import annotations

import itertools
import json
import statistics
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Any, Sequence

from .corpus import ClassifiedCorpus, overlap_counts
from .generator import OK, QuestionPool
from .knowledge import SemanticClass

TOTAL = "TOTAL"


@dataclass(frozen=True)
class ConceptSummaryRow:
    concept: str
    documents: int
    sentences: int
    technical_terms: int
    unique_and_frequent: int
    term_occurrences: int


@dataclass(frozen=True)
class GenerationSummaryRow:
    concept: str
    generated_phrases: int
    mcqs: int


@dataclass(frozen=True)
class SemanticDistribution:
    counts: dict[SemanticClass, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _concept_order(corpus: ClassifiedCorpus) -> list[str]:
    return list(corpus.concepts) or list(dict.fromkeys(d.concept for d in corpus.documents))


def concept_summary(corpus: ClassifiedCorpus) -> list[ConceptSummaryRow]:
    rows = []
    for concept in _concept_order(corpus):
        docs = [d for d in corpus.documents if d.concept == concept]
        observed = [s for s in corpus.stats.values() if s.per_concept_occurrences.get(concept, 0) > 0]
        rows.append(
            ConceptSummaryRow(
                concept,
                len(docs),
                sum(len(d.sentences) for d in docs),
                len(observed),
                len(corpus.key_terms(concept)),
                sum(s.per_concept_occurrences[concept] for s in observed),
            )
        )
    return rows


def generation_summary(pool: QuestionPool) -> list[GenerationSummaryRow]:
    """Phrase and MCQ counts per concept, followed by a TOTAL row."""
    phrases = Counter(p.concept for p in pool.phrases)
    mcqs = Counter(m.phrase.concept for m in pool.mcqs)
    order = list(pool.concepts) + sorted((set(phrases) | set(mcqs)) - set(pool.concepts))
    rows = [GenerationSummaryRow(c, phrases[c], mcqs[c]) for c in order]
    rows.append(GenerationSummaryRow(TOTAL, sum(r.generated_phrases for r in rows), sum(r.mcqs for r in rows)))
    return rows


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient."""
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 3:
        raise ValueError("need at least 3 points")
    if len(set(xs)) == 1 or len(set(ys)) == 1:
        raise ValueError("correlation is undefined for a constant series")
    return statistics.correlation([float(x) for x in xs], [float(y) for y in ys])


def semantic_distribution(pool: QuestionPool) -> SemanticDistribution:
    counts = Counter(m.semantic_class for m in pool.mcqs)
    return SemanticDistribution({cls: counts.get(cls, 0) for cls in SemanticClass})


def term_set_correlation(pool: QuestionPool) -> tuple[list[int], list[int], float | None]:
    """Compatible-term counts against distractor-set counts over productive phrases."""
    points = [(p.compatible, p.mcqs) for p in pool.phrases if p.status == OK]
    xs, ys = [x for x, _ in points], [y for _, y in points]
    try:
        r = pearson(xs, ys)
    except ValueError:
        r = None
    return xs, ys, r


def duplicate_sentences(corpus: ClassifiedCorpus) -> int:
    counts = Counter(s.raw for d in corpus.documents for s in d.sentences)
    return sum(n - 1 for n in counts.values() if n > 1)


def build_report(corpus: ClassifiedCorpus | None = None, pool: QuestionPool | None = None) -> dict[str, Any]:
    report: dict[str, Any] = {}
    if corpus is not None:
        concepts = _concept_order(corpus)
        report["corpus"] = {
            "checksum": corpus.checksum(),
            "tau": corpus.tau,
            "duplicate_sentences": duplicate_sentences(corpus),
            "concepts": [asdict(r) for r in concept_summary(corpus)],
            "overlaps": [
                {"a": a, "b": b, **asdict(overlap_counts(corpus, a, b))}
                for a, b in itertools.combinations(concepts, 2)
            ],
        }
    if pool is not None:
        xs, ys, r = term_set_correlation(pool)
        report["pool"] = {
            "corpus_checksum": pool.provenance,
            "size": len(pool.mcqs),
            "concepts": [asdict(row) for row in generation_summary(pool)],
            "semantic_classes": {c.value: n for c, n in semantic_distribution(pool).counts.items()},
            "skipped_phrases": dict(sorted(Counter(p.status for p in pool.phrases if p.status != OK).items())),
            "correlation": {"compatible_terms": xs, "distractor_sets": ys, "r": r},
        }
    return report


def dumps_report(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> list[str]:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    fmt = lambda row: "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths)))
    return [fmt(cells[0]), "  ".join("-" * w for w in widths)] + [fmt(r) for r in cells[1:]]


def render_report(report: dict[str, Any]) -> str:
    out: list[str] = []
    if "corpus" in report:
        c = report["corpus"]
        out.append(f"Corpus summary (tau = {c['tau']})")
        out += _table(
            ["Concept", "#Documents", "#Sentences", "#Technical Terms", "#Unique and Frequent", "#Term Occurrences"],
            [
                [r["concept"], r["documents"], r["sentences"], r["technical_terms"], r["unique_and_frequent"],
                 r["term_occurrences"]]
                for r in c["concepts"]
            ],
        )
        out.append(f"Duplicate sentences: {c['duplicate_sentences']}")
        out.append("")
        out.append("Term overlap between concept pairs")
        out += _table(
            ["Pair", "Only A", "Only B", "Shared common"],
            [[f"{o['a']}/{o['b']}", o["only_a"], o["only_b"], o["shared"]] for o in c["overlaps"]],
        )
        out.append("")
    if "pool" in report:
        p = report["pool"]
        out.append("Generation summary")
        out += _table(
            ["Concept", "#Generated Question Phrases", "#Gap-Fill MCQs"],
            [[r["concept"], r["generated_phrases"], r["mcqs"]] for r in p["concepts"]],
        )
        out.append("")
        out.append("MCQs by semantic class")
        out += _table(["Class", "#MCQs"], [[k.upper(), v] for k, v in p["semantic_classes"].items()])
        out.append("")
        r = p["correlation"]["r"]
        n = len(p["correlation"]["compatible_terms"])
        out.append(
            f"Compatible terms vs distractor sets: r = {r:.4f} over {n} phrases" if r is not None
            else f"Compatible terms vs distractor sets: r undefined over {n} phrases"
        )
        if p["skipped_phrases"]:
            out.append("Phrases without MCQs: " + ", ".join(f"{k}={v}" for k, v in p["skipped_phrases"].items()))
    return "\n".join(out).rstrip() + "\n"
