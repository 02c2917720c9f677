from __future__ import annotations

import json
from dataclasses import replace

import pytest
import yaml

from conftest import FIXTURES
from quizsmith.corpus import build_corpus, ingest
from quizsmith.errors import CorpusFormatError
from quizsmith.knowledge import glossary_from_data, load_glossary, load_ontology
from quizsmith.selector import (
    check_criterion_1,
    check_criterion_2,
    check_criterion_3,
    check_criterion_4,
    evaluate_sentence,
    load_candidates,
    normalize_phrase,
    save_candidates,
    select_sentences,
)
from quizsmith.textproc import process_sentence
from synth import expected_flags

LABELS = yaml.safe_load((FIXTURES / "selection_labels.yaml").read_text(encoding="utf-8"))


def _sentence(text, glossary, concept="BBT"):
    return process_sentence(text, glossary, f"{concept}/x.txt", concept, 0)


def test_label_suite_is_large_enough():
    assert len(LABELS) >= 20
    for flag in ("c1", "c2", "c3", "c4"):
        assert any(not item[flag] for item in LABELS), flag


@pytest.mark.parametrize("item", LABELS, ids=[i["text"][:40] for i in LABELS])
def test_labeled_sentence(item, corpus, ontology, glossary):
    verdict, candidate = evaluate_sentence(_sentence(item["text"], glossary, item["doc"]), corpus, ontology)
    assert (verdict.c1, verdict.c2, verdict.c3, verdict.c4) == (item["c1"], item["c2"], item["c3"], item["c4"])
    accepted = item["c1"] and item["c2"] and item["c3"] and item["c4"]
    assert verdict.accepted == accepted
    assert (candidate is not None) == accepted
    if "concept" in item:
        assert verdict.concept == item["concept"]
    if "key_terms" in item:
        assert list(verdict.key_terms) == item["key_terms"]


def test_criterion_1_examples(ontology, glossary):
    s = _sentence("Black box testing is not concerned with the internal mechanisms of a system.", glossary)
    assert check_criterion_1(s, ontology) == "BBT"
    s = _sentence("Boundary Value Analysis is a selection technique.", glossary, "BVA")
    assert check_criterion_1(s, ontology) == "BVA"
    assert check_criterion_1(_sentence("Testing is useful.", glossary), ontology) is None


def test_criterion_1_prefers_longest_form_outside_own_concept(ontology, glossary):
    # document concept EP is absent; "white box testing" beats the shorter alias "white box"
    s = _sentence("White box testing differs from a white box review.", glossary, "EP")
    assert check_criterion_1(s, ontology) == "WBT"


def test_criterion_2_examples(corpus, ontology, glossary):
    s = _sentence("Black box testing is not concerned with the internal mechanisms of a system.", glossary)
    assert check_criterion_2(s, "BBT", corpus) == ["system"]
    s = _sentence("Black box testing helps the tester with every input.", glossary)
    assert check_criterion_2(s, "BBT", corpus) == []
    s = _sentence("White-box testing relies on a debugger to inspect each defect.", glossary, "WBT")
    assert check_criterion_2(s, "WBT", corpus, ontology) == ["debugger", "defect"]


def test_criterion_2_skips_terms_inside_concept_names(corpus, ontology, glossary):
    s = _sentence("Decision table testing uses a decision table.", glossary, "DT")
    verdict, candidate = evaluate_sentence(s, corpus, ontology)
    assert candidate is not None
    assert candidate.token_index("decision table") == len(s.tokens) - 2


def test_criterion_3_examples(glossary):
    assert not check_criterion_3(_sentence("However, statement coverage misses defects.", glossary))
    assert not check_criterion_3(_sentence("While the test runs, logs accumulate.", glossary))
    assert check_criterion_3(_sentence("Statement coverage misses defects.", glossary))
    assert not check_criterion_3(_sentence("Today the tool works.", glossary), ["today"])


def test_criterion_4_examples(glossary):
    assert check_criterion_4(_sentence(
        "White box testing is mainly used for detecting logical errors in the code.", glossary))
    assert not check_criterion_4(_sentence("Usually, testers automate.", glossary))
    assert not check_criterion_4(_sentence("How many defects?", glossary))


def test_short_sentences_are_skipped(corpus, ontology, glossary):
    verdict, candidate = evaluate_sentence(_sentence("Black-box testing works.", glossary), corpus, ontology)
    assert candidate is None
    assert (verdict.c1, verdict.c2, verdict.c3, verdict.c4) == (False, False, False, False)


def test_verdict_completeness_and_invariants(corpus, ontology, selection):
    candidates, verdicts = selection
    assert len(verdicts) == sum(len(d.sentences) for d in corpus.documents)
    accepted = [v for v in verdicts if v.accepted]
    assert [(v.doc_id, v.index) for v in accepted] == [
        (c.sentence.source_doc, c.sentence.index) for c in candidates
    ]
    forms = {c.id: {normalize_phrase(f) for f in c.surface_forms} for c in ontology.concepts}
    for v in verdicts:
        assert v.accepted == (v.c1 and v.c2 and v.c3 and v.c4)
    for cand in candidates:
        assert cand.lemmas
        for lemma in cand.lemmas:
            assert corpus.is_key_term(lemma, cand.concept)
            assert normalize_phrase(lemma) not in forms[cand.concept]
        # re-evaluation is idempotent
        v, again = evaluate_sentence(cand.sentence, corpus, ontology)
        assert again == cand and v.accepted


def test_dropping_a_document_never_adds_candidates(corpus, ontology, selection):
    before = {(c.sentence.source_doc, c.sentence.index) for c in selection[0]}
    for doc in corpus.documents:
        rest = replace(corpus, documents=tuple(d for d in corpus.documents if d is not doc))
        after = {(c.sentence.source_doc, c.sentence.index) for c in select_sentences(rest, ontology)[0]}
        assert after <= before


def test_zero_key_terms_means_zero_candidates(tmp_path, ontology):
    (tmp_path / "BBT").mkdir()
    (tmp_path / "BBT" / "a.txt").write_text("Black-box testing helps the tester a lot.", encoding="utf-8")
    g = glossary_from_data([{"lemma": "tester", "semantic_class": "thought"}])
    c = build_corpus(ingest(tmp_path, ontology, g), 0.75, ontology.ids)
    # a single-concept corpus makes "tester" unique; remove it from the classes to get no key terms
    c = replace(c, classes={})
    candidates, verdicts = select_sentences(c, ontology)
    assert candidates == [] and all(not v.c2 for v in verdicts)


def test_synthetic_selection_matches_labels(synthetic):
    import oracles

    o, g = load_ontology(synthetic.ontology), load_glossary(synthetic.glossary)
    c = build_corpus(ingest(synthetic.docs, o, g), 0.75, o.ids)
    occ, _ = oracles.count_occurrences(synthetic.docs, synthetic.terms, synthetic.concepts)
    cls = {t: oracles.classify(v, 0.75) for t, v in occ.items()}
    _, verdicts = select_sentences(c, o)
    by_ref = {(v.doc_id, v.index): v for v in verdicts}
    for planned in synthetic.sentences:
        concept = planned.doc_id.split("/")[0]
        expected = expected_flags(planned, lambda t: cls[t][0] != "common" and cls[t][1] == concept)
        v = by_ref[(planned.doc_id, planned.index)]
        assert {"c1": v.c1, "c2": v.c2, "c3": v.c3, "c4": v.c4, "accepted": v.accepted} == expected, planned.text


# -- candidates file --------------------------------------------------------

def test_candidates_round_trip(tmp_path, corpus, ontology, selection):
    candidates, verdicts = selection
    path = tmp_path / "candidates.jsonl"
    save_candidates(path, verdicts, corpus.checksum())
    loaded, loaded_verdicts, checksum = load_candidates(path, corpus, ontology)
    assert loaded == candidates and loaded_verdicts == verdicts and checksum == corpus.checksum()
    header, first = [json.loads(line) for line in path.read_text().splitlines()[:2]]
    assert header == {"format_version": 1, "corpus_checksum": corpus.checksum()}
    assert set(first) == {"doc_id", "index", "c1", "c2", "c3", "c4", "accepted", "concept", "key_terms"}


@pytest.mark.parametrize("text", ["", "{}\n", "[]\n", '{"format_version": 9, "corpus_checksum": "x"}\n',
                                  '{"format_version": 1, "corpus_checksum": "x"}\n{"doc_id": "a"}\n'])
def test_candidates_malformed(tmp_path, corpus, text):
    path = tmp_path / "c.jsonl"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(CorpusFormatError):
        load_candidates(path, corpus)


def test_candidates_referencing_missing_sentence(tmp_path, corpus):
    record = {"doc_id": "BBT/none.txt", "index": 0, "c1": True, "c2": True, "c3": True, "c4": True,
              "accepted": True, "concept": "BBT", "key_terms": ["system"]}
    path = tmp_path / "c.jsonl"
    path.write_text(json.dumps({"format_version": 1, "corpus_checksum": "x"}) + "\n" + json.dumps(record) + "\n")
    with pytest.raises(CorpusFormatError, match="not in corpus"):
        load_candidates(path, corpus)
