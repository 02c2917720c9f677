"""Domain ontology and annotated glossary.

Both are loaded from UTF-8 YAML (or JSON) files and are immutable once
loaded, so they can be shared freely between workers.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Iterator

import yaml

from .errors import GlossaryError, OntologyError, UnknownConceptError
from .textproc.inflect import vowel_initial
from .textproc.tags import PosTag

log = logging.getLogger(__name__)

RELATION_KINDS = ("association", "generalization", "composition", "aggregation")
DEFAULT_MAX_DISTANCE = 2


class SemanticClass(str, Enum):
    THOUGHT = "thought"
    OBJECT = "object"
    QUALITY = "quality"
    PROCESS = "process"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Concept:
    id: str
    title: str
    aliases: tuple[str, ...] = ()

    @property
    def surface_forms(self) -> tuple[str, ...]:
        return (self.title, *self.aliases)


@dataclass(frozen=True)
class Relation:
    kind: str
    source: str
    target: str


@dataclass(frozen=True)
class Ontology:
    concepts: tuple[Concept, ...]
    relations: tuple[Relation, ...] = ()
    root: str | None = None

    @cached_property
    def _by_id(self) -> dict[str, Concept]:
        return {c.id: c for c in self.concepts}

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.concepts]

    @property
    def nodes(self) -> list[str]:
        return self.ids + ([self.root] if self.root else [])

    def __contains__(self, concept_id: object) -> bool:
        return concept_id in self._by_id

    def concept(self, concept_id: str) -> Concept:
        try:
            return self._by_id[concept_id]
        except KeyError:
            raise UnknownConceptError(concept_id) from None

    @property
    def root_edges(self) -> list[tuple[str, str]]:
        """Implicit edges joining the root to every concept without a generalization parent."""
        if not self.root:
            return []
        children = {r.target for r in self.relations if r.kind == "generalization"}
        return [(self.root, c.id) for c in self.concepts if c.id not in children]

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        adj: dict[str, set[str]] = {n: set() for n in self.nodes}
        for a, b in [(r.source, r.target) for r in self.relations] + self.root_edges:
            adj[a].add(b)
            adj[b].add(a)
        return {n: frozenset(v) for n, v in adj.items()}

    def distances(self, concept_id: str) -> dict[str, int]:
        """Undirected breadth-first distances from ``concept_id`` to every reachable node."""
        if concept_id not in self.adjacency:
            raise UnknownConceptError(concept_id)
        dist = {concept_id: 0}
        queue = deque([concept_id])
        while queue:
            node = queue.popleft()
            for nxt in sorted(self.adjacency[node]):
                if nxt not in dist:
                    dist[nxt] = dist[node] + 1
                    queue.append(nxt)
        return dist


def relatives(ontology: Ontology, concept: str, max_distance: int = DEFAULT_MAX_DISTANCE) -> list[str]:
    """Concepts within ``max_distance`` undirected hops of ``concept``.

    Ordered by distance, then id. Neither the concept itself nor the root
    node is ever returned, although paths may pass through the root.
    """
    if concept not in ontology:
        raise UnknownConceptError(concept)
    if max_distance < 1:
        raise ValueError(f"max_distance must be >= 1, got {max_distance}")
    dist = ontology.distances(concept)
    found = [
        (d, n) for n, d in dist.items()
        if 0 < d <= max_distance and n != ontology.root
    ]
    return [n for _, n in sorted(found)]


def _read_structured(path: Path, error: type[Exception]) -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise error(f"{path}: file not found") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise error(f"{path}: cannot read: {exc}") from None
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise error(f"{path}: parse error: {exc}") from None


def _str_list(value: Any, where: str, error: type[Exception]) -> tuple[str, ...]:
    if value is None:
        return ()
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise error(f"{where}: expected a list of strings")
    return tuple(" ".join(v.split()) for v in value)


def ontology_from_data(data: Any, where: str = "<ontology>") -> Ontology:
    if not isinstance(data, dict):
        raise OntologyError(f"{where}: expected a mapping with 'concepts'")
    raw_concepts = data.get("concepts")
    if not isinstance(raw_concepts, list) or not raw_concepts:
        raise OntologyError(f"{where}: 'concepts' must be a non-empty list")

    concepts: list[Concept] = []
    seen_ids: set[str] = set()
    surface_owner: dict[str, str] = {}
    for i, item in enumerate(raw_concepts):
        loc = f"{where}: concepts[{i}]"
        if not isinstance(item, dict):
            raise OntologyError(f"{loc}: expected a mapping")
        cid, title = item.get("id"), item.get("title")
        if not isinstance(cid, str) or not cid.strip():
            raise OntologyError(f"{loc}: missing id")
        if not isinstance(title, str) or not title.strip():
            raise OntologyError(f"{loc}: concept {cid!r} has an empty title")
        if cid in seen_ids:
            raise OntologyError(f"{loc}: duplicate id {cid!r}")
        seen_ids.add(cid)
        concept = Concept(cid, " ".join(title.split()), _str_list(item.get("aliases"), loc, OntologyError))
        for form in concept.surface_forms:
            owner = surface_owner.setdefault(form.lower(), cid)
            if owner != cid:
                raise OntologyError(f"{loc}: surface form {form!r} already names concept {owner!r}")
        concepts.append(concept)

    root = data.get("root")
    if root is not None:
        if not isinstance(root, str) or not root.strip():
            raise OntologyError(f"{where}: root must be a non-empty string")
        if root in seen_ids:
            raise OntologyError(f"{where}: root {root!r} duplicates a concept id")
    nodes = seen_ids | ({root} if root else set())

    relations: list[Relation] = []
    for i, item in enumerate(data.get("relations") or []):
        loc = f"{where}: relations[{i}]"
        if not isinstance(item, dict):
            raise OntologyError(f"{loc}: expected a mapping")
        kind, source, target = item.get("kind"), item.get("source"), item.get("target")
        if kind not in RELATION_KINDS:
            raise OntologyError(f"{loc}: unknown relation kind {kind!r}")
        for end in (source, target):
            if end not in nodes:
                raise OntologyError(f"{loc}: dangling endpoint {end!r}")
        if source == target:
            raise OntologyError(f"{loc}: self-relation on {source!r}")
        relations.append(Relation(kind, source, target))

    _check_generalization_acyclic(relations, where)
    ontology = Ontology(tuple(concepts), tuple(relations), root)
    if root is not None and len(ontology.distances(root)) != len(ontology.nodes):
        unreachable = sorted(set(ontology.nodes) - set(ontology.distances(root)))
        raise OntologyError(f"{where}: concepts not connected to root {root!r}: {', '.join(unreachable)}")
    return ontology


def _check_generalization_acyclic(relations: list[Relation], where: str) -> None:
    children: dict[str, list[str]] = {}
    for r in relations:
        if r.kind == "generalization":
            children.setdefault(r.source, []).append(r.target)
    state: dict[str, int] = {}

    def visit(node: str, path: list[str]) -> None:
        state[node] = 1
        for child in children.get(node, []):
            if state.get(child) == 1:
                cycle = path[path.index(child):] + [child] if child in path else [node, child]
                raise OntologyError(f"{where}: generalization cycle {' -> '.join(cycle)}")
            if child not in state:
                visit(child, path + [child])
        state[node] = 2

    for node in sorted(children):
        if node not in state:
            visit(node, [node])


def load_ontology(source: str | Path) -> Ontology:
    path = Path(source)
    return ontology_from_data(_read_structured(path, OntologyError), str(path))


@dataclass(frozen=True)
class GlossaryEntry:
    lemma: str
    variants: tuple[str, ...]
    pos: PosTag
    semantic_class: SemanticClass

    @property
    def vowel_initial(self) -> bool:
        return vowel_initial(self.lemma)


class Glossary:
    """Technical terms indexed case-insensitively by lemma and surface variant."""

    def __init__(self, entries: list[GlossaryEntry] | tuple[GlossaryEntry, ...] = ()):
        self.entries: tuple[GlossaryEntry, ...] = tuple(entries)
        self._by_lemma: dict[str, GlossaryEntry] = {}
        self._index: dict[str, GlossaryEntry] = {}
        for entry in self.entries:
            if entry.lemma in self._by_lemma:
                raise GlossaryError(f"duplicate lemma {entry.lemma!r}")
            self._by_lemma[entry.lemma] = entry
        for entry in self.entries:
            for form in (entry.lemma, *entry.variants):
                key = " ".join(form.lower().split())
                other = self._index.setdefault(key, entry)
                if other is not entry:
                    raise GlossaryError(f"form {form!r} belongs to both {other.lemma!r} and {entry.lemma!r}")
        self._phrases: tuple[dict[tuple[str, ...], str], int] | None = None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[GlossaryEntry]:
        return iter(self.entries)

    def __contains__(self, lemma: object) -> bool:
        return lemma in self._by_lemma

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Glossary) and self.entries == other.entries

    __hash__ = None  # type: ignore[assignment]

    def __getitem__(self, lemma: str) -> GlossaryEntry:
        return self._by_lemma[lemma]

    def lookup(self, surface: str) -> GlossaryEntry | None:
        return self._index.get(" ".join(surface.lower().split()))

    def pos_map(self) -> dict[str, str]:
        return {e.lemma: e.pos.value for e in self.entries}

    def phrase_index(self) -> tuple[dict[tuple[str, ...], str], int]:
        """Base-token tuples of every lemma and variant, and the longest tuple length."""
        if self._phrases is None:
            from .textproc.tokens import base_words

            index: dict[tuple[str, ...], str] = {}
            for key, entry in self._index.items():
                words = base_words(key)
                if words:
                    index.setdefault(words, entry.lemma)
            self._phrases = (index, max((len(k) for k in index), default=0))
        return self._phrases


def lookup_term(glossary: Glossary, surface: str) -> GlossaryEntry | None:
    return glossary.lookup(surface)


def glossary_from_data(data: Any, where: str = "<glossary>") -> Glossary:
    if data is None:
        log.warning("%s: glossary is empty", where)
        return Glossary()
    if isinstance(data, dict) and "terms" in data:
        data = data["terms"]
    if not isinstance(data, list):
        raise GlossaryError(f"{where}: expected a list of term records")
    if not data:
        log.warning("%s: glossary is empty", where)
    entries: list[GlossaryEntry] = []
    seen: set[str] = set()
    for i, item in enumerate(data):
        loc = f"{where}: entry {i}"
        if not isinstance(item, dict):
            raise GlossaryError(f"{loc}: expected a mapping")
        lemma = item.get("lemma")
        if not isinstance(lemma, str) or not lemma.strip():
            raise GlossaryError(f"{loc}: empty lemma")
        lemma = " ".join(lemma.lower().split())
        if lemma in seen:
            raise GlossaryError(f"{loc}: duplicate lemma {lemma!r}")
        seen.add(lemma)
        try:
            semantic = SemanticClass(str(item.get("semantic_class", "")).lower())
        except ValueError:
            raise GlossaryError(f"{loc}: unknown semantic class {item.get('semantic_class')!r}") from None
        try:
            pos = PosTag(str(item.get("pos", "noun")).lower())
        except ValueError:
            raise GlossaryError(f"{loc}: unknown part of speech {item.get('pos')!r}") from None
        variants = tuple(v.lower() for v in _str_list(item.get("variants"), loc, GlossaryError))
        entries.append(GlossaryEntry(lemma, variants, pos, semantic))
    try:
        return Glossary(entries)
    except GlossaryError as exc:
        raise GlossaryError(f"{where}: {exc}") from None


def load_glossary(source: str | Path) -> Glossary:
    path = Path(source)
    return glossary_from_data(_read_structured(path, GlossaryError), str(path))
