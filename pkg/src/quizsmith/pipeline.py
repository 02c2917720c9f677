"""End-to-end orchestration: corpus -> candidates -> pool -> report."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

import yaml

from .analytics import build_report, dumps_report, render_report
from .corpus import DEFAULT_TAU, build_corpus, ingest, save_corpus
from .errors import InputFormatError
from .generator import GenerationConfig, generate_pool, save_pool
from .knowledge import DEFAULT_MAX_DISTANCE, load_glossary, load_ontology
from .selector import save_candidates, select_sentences

log = logging.getLogger(__name__)

CORPUS_FILE = "corpus.json"
CANDIDATES_FILE = "candidates.jsonl"
POOL_FILE = "pool.jsonl"
REPORT_TEXT = "report.txt"
REPORT_JSON = "report.json"

# config-file spellings accepted for each field
_ALIASES = {"doc_root": "docs", "max_distance": "distance", "max_sets_per_phrase": "cap"}
_PATH_FIELDS = ("ontology", "glossary", "docs", "out")


@dataclass
class PipelineConfig:
    ontology: Path | None = None
    glossary: Path | None = None
    docs: Path | None = None
    out: Path | None = None
    tau: float = DEFAULT_TAU
    seed: int = 0
    distance: int = DEFAULT_MAX_DISTANCE
    cap: int | None = None
    subordinators: tuple[str, ...] = ()
    vowel_exceptions: tuple[str, ...] = ()

    def generation_config(self) -> GenerationConfig:
        return GenerationConfig(self.seed, self.distance, self.cap, self.tau, self.vowel_exceptions)

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ValueError("missing required setting(s): " + ", ".join(missing))

    def merged(self, overrides: Mapping[str, Any]) -> "PipelineConfig":
        """Copy with every non-None override applied."""
        known = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in overrides.items() if k in known and v is not None})


def config_from_data(data: Any, base_dir: Path = Path(".")) -> PipelineConfig:
    """Build a config from parsed YAML; relative paths resolve against ``base_dir``."""
    if data is None:
        return PipelineConfig()
    if not isinstance(data, dict):
        raise InputFormatError("config must be a mapping")
    values: dict[str, Any] = {}
    known = {f.name for f in fields(PipelineConfig)}
    for key, value in data.items():
        name = _ALIASES.get(key, key)
        if name not in known:
            raise InputFormatError(f"config: unknown key {key!r}")
        values[name] = value
    try:
        for name in _PATH_FIELDS:
            if values.get(name) is not None:
                values[name] = base_dir / Path(str(values[name]))
        if "tau" in values:
            values["tau"] = float(values["tau"])
        for name in ("seed", "distance"):
            if name in values:
                values[name] = int(values[name])
        if values.get("cap") is not None:
            values["cap"] = int(values["cap"])
        for name in ("subordinators", "vowel_exceptions"):
            if name in values:
                values[name] = tuple(str(s) for s in values[name] or ())
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"config: {exc}") from None
    return PipelineConfig(**values)


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise InputFormatError(f"{path}: {exc}") from None
    try:
        return config_from_data(data, path.parent)
    except InputFormatError as exc:
        raise InputFormatError(f"{path}: {exc}") from None


@dataclass
class PipelineResult:
    out: Path
    files: dict[str, Path] = field(default_factory=dict)
    pool_size: int = 0
    skipped_documents: list[str] = field(default_factory=list)


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run all three steps and write the five output files into ``config.out``."""
    config.require("ontology", "glossary", "docs", "out")
    ontology = load_ontology(config.ontology)
    glossary = load_glossary(config.glossary)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    result = PipelineResult(out)

    documents = ingest(config.docs, ontology, glossary, result.skipped_documents)
    corpus = build_corpus(documents, config.tau, ontology.ids)
    checksum = corpus.checksum()
    result.files["corpus"] = out / CORPUS_FILE
    save_corpus(corpus, result.files["corpus"])
    log.info("corpus: %d documents, %d terms", len(corpus.documents), len(corpus.stats))

    candidates, verdicts = select_sentences(corpus, ontology, config.subordinators)
    result.files["candidates"] = out / CANDIDATES_FILE
    save_candidates(result.files["candidates"], verdicts, checksum)
    log.info("selection: %d of %d sentences accepted", len(candidates), len(verdicts))

    pool = generate_pool(corpus, ontology, glossary, candidates, config.generation_config(), checksum)
    result.files["pool"] = out / POOL_FILE
    save_pool(pool, result.files["pool"])
    result.pool_size = len(pool.mcqs)
    log.info("generation: %d MCQs", result.pool_size)

    write_report(build_report(corpus, pool), out, result.files)
    return result


def write_report(report: dict[str, Any], out: Path, files: dict[str, Path] | None = None) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / REPORT_TEXT).write_text(render_report(report), encoding="utf-8")
    (out / REPORT_JSON).write_text(dumps_report(report), encoding="utf-8")
    if files is not None:
        files["report_text"] = out / REPORT_TEXT
        files["report_json"] = out / REPORT_JSON
