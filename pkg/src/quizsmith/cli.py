"""Command-line interface.

Settings come from the config file named by ``--config`` or ``$QUIZSMITH_CONFIG``;
explicit flags override it. Exit codes: 0 success, 1 usage error, 2 input-format
error, 3 pipeline error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .analytics import build_report, render_report
from .corpus import build_corpus, ingest, load_corpus, save_corpus
from .errors import InputFormatError, QuizsmithError, UnknownConceptError
from .generator import generate_pool, load_pool, save_pool
from .knowledge import load_glossary, load_ontology
from .pipeline import (
    CANDIDATES_FILE,
    CORPUS_FILE,
    POOL_FILE,
    PipelineConfig,
    load_config,
    run_pipeline,
    write_report,
)
from .selector import load_candidates, save_candidates, select_sentences

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_PIPELINE = 0, 1, 2, 3
CONFIG_ENV = "QUIZSMITH_CONFIG"

log = logging.getLogger("quizsmith")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for input-format errors here
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _add(p: argparse.ArgumentParser, *names: str) -> None:
    options = {
        "ontology": dict(type=Path, metavar="PATH", help="ontology file (YAML or JSON)"),
        "glossary": dict(type=Path, metavar="PATH", help="glossary file (YAML or JSON)"),
        "docs": dict(type=Path, metavar="DIR", help="document root with one subdirectory per concept"),
        "corpus": dict(type=Path, metavar="PATH", help="corpus file written by build-corpus"),
        "candidates": dict(type=Path, metavar="PATH", help="candidates file written by select"),
        "pool": dict(type=Path, metavar="PATH", help="pool file written by generate"),
        "tau": dict(type=float, metavar="FLOAT", help="frequent-term share threshold (default 0.75)"),
        "seed": dict(type=int, metavar="INT", help="random seed (default 0)"),
        "distance": dict(type=_positive, metavar="INT", help="relative-concept distance (default 2)"),
        "cap": dict(type=_positive, metavar="INT", help="max distractor sets per phrase (default: all)"),
    }
    for name in names:
        p.add_argument(f"--{name}", **options[name])


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, metavar="PATH", help=f"config file (default: ${CONFIG_ENV})")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = _Parser(prog="quizsmith", description="Generate gap-fill multiple-choice questions from a corpus.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("build-corpus", parents=[common], help="ingest documents and classify terms")
    _add(p, "ontology", "glossary", "docs", "tau")
    p.add_argument("--out", type=Path, metavar="PATH", help="corpus file to write")

    p = sub.add_parser("select", parents=[common], help="select candidate sentences")
    _add(p, "ontology", "corpus")
    p.add_argument("--out", type=Path, metavar="PATH", help="candidates file to write")

    p = sub.add_parser("generate", parents=[common], help="generate the question pool")
    _add(p, "ontology", "glossary", "corpus", "candidates", "seed", "distance", "cap")
    p.add_argument("--out", type=Path, metavar="PATH", help="pool file to write")

    p = sub.add_parser("stats", parents=[common], help="print summaries of a corpus and/or pool")
    _add(p, "corpus", "pool")
    p.add_argument("--out", type=Path, metavar="DIR", help="also write report.txt and report.json here")

    p = sub.add_parser("run", parents=[common], help="run the full pipeline")
    _add(p, "ontology", "glossary", "docs", "tau", "seed", "distance", "cap")
    p.add_argument("--out", type=Path, metavar="DIR", help="output directory")
    return parser


def _base_config(args: argparse.Namespace) -> PipelineConfig:
    path = args.config or os.environ.get(CONFIG_ENV)
    config = load_config(path) if path else PipelineConfig()
    overrides = {k: getattr(args, k, None) for k in ("ontology", "glossary", "docs", "tau", "seed", "distance", "cap")}
    if args.command == "run":
        overrides["out"] = args.out
    return config.merged(overrides)


def _path(explicit: Path | None, config: PipelineConfig, filename: str, what: str) -> Path:
    """Explicit flag, else ``filename`` inside the configured output directory."""
    if explicit is not None:
        return explicit
    if config.out is not None:
        return Path(config.out) / filename
    raise UsageError(f"no {what} given (use a flag or a config file with 'out')")


def _need(config: PipelineConfig, *names: str) -> None:
    missing = [n for n in names if getattr(config, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join(f"--{n}" for n in missing))


def _cmd_build_corpus(args: argparse.Namespace, config: PipelineConfig) -> None:
    _need(config, "ontology", "glossary", "docs")
    out = _path(args.out, config, CORPUS_FILE, "output path")
    ontology = load_ontology(config.ontology)
    glossary = load_glossary(config.glossary)
    corpus = build_corpus(ingest(config.docs, ontology, glossary), config.tau, ontology.ids)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, out)
    print(f"wrote {out}: {len(corpus.documents)} documents, {len(corpus.stats)} terms")


def _cmd_select(args: argparse.Namespace, config: PipelineConfig) -> None:
    _need(config, "ontology")
    corpus_path = _path(args.corpus, config, CORPUS_FILE, "corpus")
    out = _path(args.out, config, CANDIDATES_FILE, "output path")
    ontology = load_ontology(config.ontology)
    corpus = load_corpus(corpus_path)
    candidates, verdicts = select_sentences(corpus, ontology, config.subordinators)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_candidates(out, verdicts, corpus.checksum())
    print(f"wrote {out}: {len(candidates)} of {len(verdicts)} sentences accepted")


def _cmd_generate(args: argparse.Namespace, config: PipelineConfig) -> None:
    _need(config, "ontology", "glossary")
    corpus_path = _path(args.corpus, config, CORPUS_FILE, "corpus")
    cand_path = _path(args.candidates, config, CANDIDATES_FILE, "candidates")
    out = _path(args.out, config, POOL_FILE, "output path")
    ontology = load_ontology(config.ontology)
    glossary = load_glossary(config.glossary)
    corpus = load_corpus(corpus_path)
    candidates, _, checksum = load_candidates(cand_path, corpus, ontology)
    pool = generate_pool(corpus, ontology, glossary, candidates, config.generation_config(), checksum)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_pool(pool, out)
    print(f"wrote {out}: {len(pool.mcqs)} MCQs from {len(pool.phrases)} question phrases")


def _cmd_stats(args: argparse.Namespace, config: PipelineConfig) -> None:
    corpus_path, pool_path = args.corpus, args.pool
    if corpus_path is None and pool_path is None and config.out is not None:
        corpus_path, pool_path = Path(config.out) / CORPUS_FILE, Path(config.out) / POOL_FILE
    if corpus_path is None and pool_path is None:
        raise UsageError("stats needs --corpus and/or --pool")
    corpus = load_corpus(corpus_path) if corpus_path is not None else None
    pool = load_pool(pool_path) if pool_path is not None else None
    report = build_report(corpus, pool)
    if args.out is not None:
        write_report(report, args.out)
    sys.stdout.write(render_report(report))


def _cmd_run(args: argparse.Namespace, config: PipelineConfig) -> None:
    _need(config, "ontology", "glossary", "docs", "out")
    result = run_pipeline(config)
    for doc in result.skipped_documents:
        print(f"skipped {doc}", file=sys.stderr)
    print(f"wrote {len(result.files)} files to {result.out}: {result.pool_size} MCQs")


_COMMANDS = {
    "build-corpus": _cmd_build_corpus,
    "select": _cmd_select,
    "generate": _cmd_generate,
    "stats": _cmd_stats,
    "run": _cmd_run,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _base_config(args)
        _COMMANDS[args.command](args, config)
    except UsageError as exc:
        print(f"quizsmith {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputFormatError, UnknownConceptError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"quizsmith {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuizsmithError, ValueError, OSError) as exc:
        print(f"quizsmith {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
