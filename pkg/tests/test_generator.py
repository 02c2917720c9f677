from __future__ import annotations

import json
import time
from dataclasses import replace
from math import comb

import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
import synth
from conftest import SAMPLE
from quizsmith.corpus import build_corpus, ingest
from quizsmith.errors import (
    CorpusFormatError,
    GenerationError,
    GlossaryError,
    InsufficientDistractorsError,
    ProvenanceError,
)
from quizsmith.generator import (
    GAP,
    OK,
    TOO_FEW_DISTRACTORS,
    GenerationConfig,
    assemble_mcq,
    compatible_terms,
    dumps_pool,
    enumerate_distractor_sets,
    expected_pool_size,
    generate_pool,
    load_pool,
    make_question_phrase,
    save_pool,
)
from quizsmith.knowledge import SemanticClass, load_glossary, load_ontology
from quizsmith.selector import select_sentences
from quizsmith.textproc import pluralize

SYSTEM_D2 = ["boundary point", "code", "compiler", "debugger", "decision table", "defect", "test case"]


def _find(candidates, fragment):
    return next(c for c in candidates if fragment in c.sentence.raw)


@pytest.fixture(scope="module")
def pool(corpus, ontology, glossary, selection):
    return generate_pool(corpus, ontology, glossary, selection[0], GenerationConfig(max_distance=4), corpus.checksum())


def _mini(tmp_path, docs, gloss):
    m = synth.write_mini(tmp_path, docs, gloss)
    o, g = load_ontology(m.ontology), load_glossary(m.glossary)
    c = build_corpus(ingest(m.docs, o, g), 0.75, o.ids)
    return m, o, g, c, select_sentences(c, o)[0]


# -- question phrases -------------------------------------------------------

def test_phrase_for_system(selection):
    cand = _find(selection[0], "internal mechanisms")
    phrase = make_question_phrase(cand, "system")
    assert phrase.text_with_gap.startswith(
        "Black box testing is not concerned with the internal mechanisms of a ____; it focuses")
    assert phrase.gap_context.preceding == "a"
    assert phrase.text_with_gap.count(GAP) == 1
    assert (phrase.removed_term, phrase.concept, phrase.source) == ("system", "BBT", ("BBT/overview.txt", 0))


def test_phrase_for_test_suite_is_plural(selection):
    cand = _find(selection[0], "100% statement coverage")
    phrase = make_question_phrase(cand, "test suite")
    assert phrase.text_with_gap == (
        "Even ____ that produce 100% statement coverage will MISS certain defects relating to control structures.")
    assert phrase.gap_context.plural is True


def test_phrase_for_absent_term(selection):
    with pytest.raises(GenerationError):
        make_question_phrase(selection[0][0], "oracle")


def test_every_phrase_has_one_gap(selection):
    for cand in selection[0]:
        for lemma in cand.lemmas:
            phrase = make_question_phrase(cand, lemma)
            assert phrase.text_with_gap.count(GAP) == 1
            assert phrase.text_with_gap.replace(GAP, cand.sentence.tokens[phrase.gap_token_index].surface) \
                == cand.sentence.raw


# -- compatible terms -------------------------------------------------------

def test_seven_compatible_terms_for_system(corpus, ontology, glossary, selection):
    phrase = make_question_phrase(_find(selection[0], "internal mechanisms"), "system")
    terms = compatible_terms(corpus, ontology, glossary, "system", "BBT", phrase, 2)
    assert terms == SYSTEM_D2
    assert {corpus.classes[t].concept for t in terms} <= {"WBT", "BVA", "EP", "DT"}


def test_planted_compatible_terms(tmp_path):
    m, o, g, c, candidates = _mini(tmp_path, synth.PLANTED_DOCS, synth.PLANTED_GLOSSARY)
    phrase = make_question_phrase(_find(candidates, "widget"), "widget")
    assert compatible_terms(c, o, g, "widget", "ALPHA", phrase, 1) == synth.PLANTED_COMPATIBLE

    occ, _ = oracles.count_occurrences(m.docs, list(synth.PLANTED_GLOSSARY), list(synth.CONCEPTS))
    classes = {t: oracles.classify(v, 0.75) for t, v in occ.items()}
    edges = oracles.ontology_edges(m.ontology_data)
    expected = sorted(
        t for t in synth.PLANTED_GLOSSARY
        if oracles.distractor_ok(t, "widget", "ALPHA", phrase.text_with_gap, "a", classes,
                                 synth.PLANTED_GLOSSARY, edges, "Methods", 1)
    )
    assert expected == synth.PLANTED_COMPATIBLE


def test_class_shared_by_nothing(tmp_path):
    _, o, g, c, candidates = _mini(tmp_path, synth.PLANTED_DOCS, synth.PLANTED_GLOSSARY)
    phrase = make_question_phrase(_find(candidates, "hinge"), "hinge")
    assert compatible_terms(c, o, g, "hinge", "ALPHA", phrase, 3) == []


def test_compatible_terms_unknown_key(corpus, ontology, glossary, selection):
    phrase = make_question_phrase(_find(selection[0], "internal mechanisms"), "system")
    with pytest.raises(GlossaryError):
        compatible_terms(corpus, ontology, glossary, "oracle", "BBT", phrase)


def test_compatible_terms_grow_with_distance(corpus, ontology, glossary, selection):
    for cand in selection[0]:
        for lemma in cand.lemmas:
            phrase = make_question_phrase(cand, lemma)
            previous: set[str] = set()
            for d in range(1, 5):
                now = set(compatible_terms(corpus, ontology, glossary, lemma, cand.concept, phrase, d))
                assert previous <= now
                previous = now


# -- distractor sets --------------------------------------------------------

@pytest.mark.parametrize("n, expected", [(3, 1), (5, 10), (7, 35), (16, 560)])
def test_distractor_set_counts(n, expected):
    terms = [f"t{i:02d}" for i in range(n)]
    start = time.perf_counter()
    sets = enumerate_distractor_sets(terms)
    assert time.perf_counter() - start < 1.0
    assert len(sets) == expected
    assert sets == oracles.triples(terms)


def test_capped_sets_are_a_seeded_sample():
    terms = [f"t{i:02d}" for i in range(10)]
    everything = oracles.triples(terms)
    sample = enumerate_distractor_sets(terms, cap=20, seed=5)
    assert len(sample) == 20 == len(set(sample))
    assert set(sample) <= set(everything)
    assert sample == sorted(sample, key=everything.index)
    assert sample == enumerate_distractor_sets(terms, cap=20, seed=5)
    assert enumerate_distractor_sets(terms, cap=120, seed=5) == everything
    assert enumerate_distractor_sets(terms, cap=500, seed=5) == everything


def test_distractor_set_errors():
    with pytest.raises(InsufficientDistractorsError):
        enumerate_distractor_sets(["a", "b"])
    with pytest.raises(ValueError):
        enumerate_distractor_sets(["a", "b", "c"], cap=0)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(3, 12), cap=st.one_of(st.none(), st.integers(1, 250)), seed=st.integers(0, 2**32))
def test_distractor_sets_size_law(n, cap, seed):
    terms = [f"t{i:02d}" for i in range(n)]
    sets = enumerate_distractor_sets(terms, cap, seed)
    assert len(sets) == oracles.pool_size([n], cap)
    assert len(set(sets)) == len(sets)
    assert all(len(set(s)) == 3 and list(s) == sorted(s) for s in sets)


# -- assembling MCQs --------------------------------------------------------

def test_assemble_system(glossary, selection):
    phrase = make_question_phrase(_find(selection[0], "internal mechanisms"), "system")
    mcq = assemble_mcq(phrase, ["defect", "compiler", "decision table"], glossary, seed=0)
    assert {c.rendered for c in mcq.choices} == {"defect", "compiler", "decision table", "system"}
    assert [c.is_correct for c in mcq.choices].count(True) == 1
    assert mcq.choices[mcq.answer_index].lemma == "system"
    assert mcq.semantic_class is SemanticClass.OBJECT


def test_assemble_plural(glossary, selection):
    phrase = make_question_phrase(_find(selection[0], "100% statement coverage"), "test suite")
    mcq = assemble_mcq(phrase, ["equivalence partition", "decision", "precondition"], glossary, seed=0)
    assert {c.rendered for c in mcq.choices} == {
        "test suites", "equivalence partitions", "decisions", "preconditions"}


def test_assemble_is_deterministic(glossary, selection):
    phrase = make_question_phrase(_find(selection[0], "internal mechanisms"), "system")
    a = assemble_mcq(phrase, ["defect", "compiler", "decision table"], glossary, seed=3)
    b = assemble_mcq(phrase, ["decision table", "defect", "compiler"], glossary, seed=3)
    assert a == b
    other = assemble_mcq(phrase, ["defect", "compiler", "decision table"], glossary, seed=4)
    assert {c.lemma for c in other.choices} == {c.lemma for c in a.choices}


def test_answer_position_varies(glossary, selection):
    phrase = make_question_phrase(_find(selection[0], "internal mechanisms"), "system")
    positions = {assemble_mcq(phrase, ["defect", "compiler", "code"], glossary, seed=s).answer_index
                 for s in range(40)}
    assert len(positions) > 1


def test_assemble_rejects_bad_distractors(glossary, selection):
    phrase = make_question_phrase(_find(selection[0], "internal mechanisms"), "system")
    with pytest.raises(ValueError):
        assemble_mcq(phrase, ["defect", "defect", "compiler"], glossary, seed=0)
    with pytest.raises(ValueError):
        assemble_mcq(phrase, ["defect", "system", "compiler"], glossary, seed=0)
    with pytest.raises(GenerationError):
        # vowel-initial after "a"
        assemble_mcq(phrase, ["defect", "execution trace", "compiler"], glossary, seed=0)


# -- the pool ---------------------------------------------------------------

def test_pool_size_law(corpus, ontology, glossary, selection, pool):
    ks = [p.compatible for p in pool.phrases]
    assert len(pool.mcqs) == oracles.pool_size(ks) == expected_pool_size(ks)
    for cap in (1, 4, 20):
        capped = generate_pool(corpus, ontology, glossary, selection[0], replace(pool.config, max_sets_per_phrase=cap))
        assert [p.compatible for p in capped.phrases] == ks
        assert len(capped.mcqs) == oracles.pool_size(ks, cap)


def test_pool_phrase_records(pool, selection):
    pairs = [(c.sentence.source_doc, c.sentence.index, lemma) for c in selection[0] for lemma in c.lemmas]
    assert [(p.doc_id, p.index, p.key_term) for p in pool.phrases] == pairs
    for p in pool.phrases:
        assert p.mcqs == (comb(p.compatible, 3) if p.status == OK else 0)
        if p.status == TOO_FEW_DISTRACTORS:
            assert p.compatible < 3


def test_pool_ids_and_uniqueness(pool):
    assert [m.id for m in pool.mcqs] == [f"Q{i:06d}" for i in range(1, len(pool.mcqs) + 1)]
    keys = {(m.phrase.source, m.phrase.removed_term, m.distractor_set) for m in pool.mcqs}
    assert len(keys) == len(pool.mcqs)


def test_pool_contains_reference_sets(pool):
    sets = {(m.phrase.removed_term, frozenset(c.rendered for c in m.choices)) for m in pool.mcqs}
    assert ("system", frozenset({"system", "defect", "compiler", "decision table"})) in sets
    assert ("test suite", frozenset({"test suites", "equivalence partitions", "decisions", "preconditions"})) in sets


def test_pool_mcq_invariants(corpus, ontology, glossary, pool):
    from quizsmith.knowledge import relatives

    for m in pool.mcqs:
        assert len({c.lemma for c in m.choices}) == 4
        assert m.choices[m.answer_index].is_correct
        assert sum(c.is_correct for c in m.choices) == 1
        near = set(relatives(ontology, m.phrase.concept, pool.config.max_distance))
        for c in m.choices:
            assert glossary[c.lemma].semantic_class is m.semantic_class
            if not c.is_correct:
                assert c.origin_concept in near


def test_agreement_scan(pool):
    violations = []
    for m in pool.mcqs:
        ctx = m.phrase.gap_context
        rendered = [c.rendered for c in m.choices]
        article = (ctx.preceding or "").lower()
        if article == "a" and any(oracles.starts_with_vowel(r) for r in rendered):
            violations.append(m.id)
        if article == "an" and not all(oracles.starts_with_vowel(r) for r in rendered):
            violations.append(m.id)
        if ctx.plural and rendered != [pluralize(c.lemma) for c in m.choices]:
            violations.append(m.id)
    assert violations == []
    assert any((m.phrase.gap_context.preceding or "").lower() == "a" for m in pool.mcqs)
    assert any(m.phrase.gap_context.plural for m in pool.mcqs)


def test_distractors_recheck_against_oracle(corpus, pool):
    raw_ontology = yaml.safe_load((SAMPLE / "ontology.yaml").read_text(encoding="utf-8"))
    raw_glossary = yaml.safe_load((SAMPLE / "glossary.yaml").read_text(encoding="utf-8"))
    semantic = {t["lemma"]: t["semantic_class"] for t in raw_glossary["terms"]}
    classes = {lemma: oracles.classify(s.per_concept_occurrences, corpus.tau) for lemma, s in corpus.stats.items()}
    edges = oracles.ontology_edges(raw_ontology)
    checked: dict[tuple, bool] = {}
    for m in pool.mcqs:
        for lemma in m.distractor_set:
            key = (m.phrase.source, m.phrase.removed_term, lemma)
            if key not in checked:
                checked[key] = oracles.distractor_ok(
                    lemma, m.phrase.removed_term, m.phrase.concept, m.phrase.text_with_gap,
                    m.phrase.gap_context.preceding, classes, semantic, edges, raw_ontology["root"],
                    pool.config.max_distance,
                )
            assert checked[key], key


def test_pool_is_deterministic(corpus, ontology, glossary, selection, pool):
    again = generate_pool(corpus, ontology, glossary, selection[0], pool.config, corpus.checksum())
    assert dumps_pool(again) == dumps_pool(pool)


def test_seed_changes_only_order(corpus, ontology, glossary, selection, pool):
    other = generate_pool(corpus, ontology, glossary, selection[0], replace(pool.config, seed=99))
    assert other.phrases == pool.phrases
    assert [(m.id, m.phrase, m.distractor_set) for m in other.mcqs] == \
        [(m.id, m.phrase, m.distractor_set) for m in pool.mcqs]


def test_provenance_mismatch(corpus, ontology, glossary, selection):
    with pytest.raises(ProvenanceError):
        generate_pool(corpus, ontology, glossary, selection[0], provenance="0" * 64)


def test_empty_candidates(corpus, ontology, glossary):
    pool = generate_pool(corpus, ontology, glossary, [])
    assert pool.mcqs == () and pool.phrases == ()


def test_one_phrase_five_terms(tmp_path):
    _, o, g, c, candidates = _mini(tmp_path, synth.FIVE_DOCS, synth.FIVE_GLOSSARY)
    pool = generate_pool(c, o, g, candidates, GenerationConfig(max_distance=1))
    assert len(pool.phrases) == 1 and pool.phrases[0].compatible == 5
    assert len(pool.mcqs) == len(oracles.triples(list(range(5)))) == 10


def test_config_validation():
    with pytest.raises(ValueError):
        GenerationConfig(max_sets_per_phrase=0)
    with pytest.raises(ValueError):
        GenerationConfig(max_distance=0)


# -- pool file --------------------------------------------------------------

def test_pool_file_round_trip(tmp_path, pool):
    path = tmp_path / "pool.jsonl"
    save_pool(pool, path)
    loaded = load_pool(path)
    assert loaded == pool
    save_pool(loaded, tmp_path / "again.jsonl")
    assert (tmp_path / "again.jsonl").read_bytes() == path.read_bytes()

    lines = path.read_text(encoding="utf-8").splitlines()
    header, first = json.loads(lines[0]), json.loads(lines[1])
    assert {"format_version", "corpus_checksum", "config"} <= set(header)
    assert {"id", "concept", "question", "choices", "answer_index", "key_term", "semantic_class",
            "source_doc", "seed"} <= set(first)
    assert len(first["choices"]) == 4


@pytest.mark.parametrize("text", ["", "[]\n", '{"format_version": 2}\n',
                                  '{"format_version": 1, "corpus_checksum": "x", "config": {}, '
                                  '"concepts": [], "phrases": []}\n{"id": "Q1"}\n'])
def test_pool_file_malformed(tmp_path, text):
    path = tmp_path / "pool.jsonl"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(CorpusFormatError):
        load_pool(path)
