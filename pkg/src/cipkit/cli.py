"""Command-line interface for the idiom paraphrasing toolkit.

Exit codes: 0 success, 1 validation error (bad flags or bad data),
2 I/O or remote failure. Diagnostics go to stderr; data goes to files
or stdout only.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import editdiff, inputs, metrics, pseudo
from .corpus import read_pairs, split_corpus, tokenize, write_pairs
from .lexicon import detect_idioms, load_lexicon
from .paraphrase import ParaphraseError, load_backend

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

TRANSLATOR_ENV = "CIPKIT_TRANSLATOR"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; bad flags are validation errors here
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _emit_lines(lines, path: str | None) -> None:
    out = _open_out(path)
    try:
        for line in lines:
            out.write(line + "\n")
    finally:
        if out is not sys.stdout:
            out.close()


def _emit_jsonl(records, path: str | None) -> None:
    _emit_lines((json.dumps(r, ensure_ascii=False) for r in records), path)


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as handle:
        return [line.rstrip("\n") for line in handle if line.strip()]


# -- subcommand handlers ---------------------------------------------------


def _cmd_detect(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    sentences = [args.text] if args.text is not None else _read_lines(args.input)
    records = ({
        "id": str(index),
        "text": sentence,
        "idioms": [occ.to_dict() for occ in detect_idioms(sentence, lexicon)],
    } for index, sentence in enumerate(sentences))
    _emit_jsonl(records, args.output)
    return EXIT_OK


def _cmd_split(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    pairs, skipped = read_pairs(args.input)
    if skipped:
        print(f"skipped {len(skipped)} malformed line(s)", file=sys.stderr)
    split = split_corpus(pairs, lexicon)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = Path(args.input).suffix or ".tsv"
    write_pairs(out_dir / f"d1{suffix}", split.d1)
    write_pairs(out_dir / f"d2{suffix}", split.d2)
    print(f"d1 (idiom-free): {len(split.d1)}  d2 (idiomatic): {len(split.d2)}",
          file=sys.stderr)
    return EXIT_OK


def _cmd_build_pseudo(args) -> int:
    if not args.translator:
        print(f"cipkit: no translator given (flag --translator or ${TRANSLATOR_ENV})",
              file=sys.stderr)
        return EXIT_VALIDATION
    lexicon = load_lexicon(args.lexicon)
    translator = pseudo.load_translator(args.translator)
    pairs, skipped = read_pairs(args.input)
    if skipped:
        print(f"skipped {len(skipped)} malformed line(s)", file=sys.stderr)
    d2 = split_corpus(pairs, lexicon).d2
    built, report = pseudo.build_pseudo_pairs(d2, translator, lexicon,
                                              max_inflight=args.max_inflight)
    pseudo.write_cip_pairs(args.output, built)
    print(json.dumps(report.to_dict(), ensure_ascii=False, indent=2), file=sys.stderr)
    if report.failed and not args.keep_going:
        return EXIT_IO
    return EXIT_OK


def _cmd_dedup(args) -> int:
    pairs = pseudo.read_cip_pairs(args.input)
    kept, removed = pseudo.deduplicate(pairs)
    pseudo.write_cip_pairs(args.output, kept)
    print(f"kept {len(kept)}, removed {len(removed)} duplicate(s)", file=sys.stderr)
    return EXIT_OK


def _cmd_diff(args) -> int:
    lexicon = load_lexicon(args.lexicon) if args.lexicon else None
    source_tokens = tokenize(args.source, lexicon)
    target_tokens = tokenize(args.target, lexicon)
    script = editdiff.diff(source_tokens, target_tokens)
    for run in script.runs:
        print(f"{run.op} {' '.join(run.tokens)}")
    print(f"edit distance: {editdiff.edit_distance(source_tokens, target_tokens)}",
          file=sys.stderr)
    return EXIT_OK


def _cmd_extract_dict(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    pairs = pseudo.read_cip_pairs(args.input)
    dictionary = editdiff.build_dictionary(pairs, lexicon)
    dictionary.save(args.output)
    print(f"{len(dictionary.entries)} idiom(s) with interpretations", file=sys.stderr)
    return EXIT_OK


def _cmd_build_inputs(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    dictionary = None
    if args.mode == "knowledge":
        if not args.dictionary:
            print("cipkit: knowledge mode requires --dictionary", file=sys.stderr)
            return EXIT_VALIDATION
        dictionary = editdiff.InterpretationDictionary.load(args.dictionary)
    pairs = pseudo.read_cip_pairs(args.input)
    records = []
    for pair in pairs:
        if args.mode == "knowledge":
            text = inputs.build_knowledge_input(pair.source, lexicon, dictionary)
            records.append({"id": pair.id, "input": text, "reference": pair.target})
        else:
            # infill reference = the mined interpretation span, when the
            # pair's own diff yields one for that idiom
            mined = dict(editdiff.extract_interpretations(pair, lexicon))
            for index, occurrence in enumerate(pair.idioms):
                infill = inputs.build_infill_input(pair.source, occurrence)
                record = {"id": f"{pair.id}#{index}", "input": infill.text}
                interpretation = mined.get(occurrence.text)
                if interpretation is not None:
                    record["reference"] = interpretation
                records.append(record)
    _emit_jsonl(records, args.output)
    return EXIT_OK


def _cmd_paraphrase(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    backend = load_backend(args.backend, lexicon)
    sentences = [args.text] if args.text is not None else _read_lines(args.input)
    lines = []
    missing_total = 0
    for sentence in sentences:
        result = backend.paraphrase(sentence)
        missing_total += len(result.missing)
        lines.append(result.text)
    _emit_lines(lines, args.output)
    if missing_total:
        print(f"{missing_total} idiom occurrence(s) had no interpretation",
              file=sys.stderr)
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    sources = _read_lines(args.sources)
    outputs = _read_lines(args.outputs)
    references = _read_lines(args.references) if args.references else None
    report = metrics.evaluate(sources, outputs, lexicon, references)
    print(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))
    return EXIT_OK


def _cmd_stats(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    pairs = pseudo.read_cip_pairs(args.dataset)
    stats = metrics.compute_stats(pairs, lexicon)
    print(json.dumps(stats.to_dict(), ensure_ascii=False, indent=2))
    return EXIT_OK


def _cmd_serve(args) -> int:
    from . import review

    lexicon = load_lexicon(args.lexicon)
    review.serve(args.dataset, args.log, lexicon, host=args.host, port=args.port,
                 ui_dir=args.ui_dir)
    return EXIT_OK


# -- parser wiring ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cipkit",
                     description="Detect, rewrite, and evaluate idiomatic Chinese text.")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log debug detail to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name: str, help_text: str, handler):
        cmd = sub.add_parser(name, help=help_text)
        cmd.set_defaults(handler=handler)
        return cmd

    cmd = add("detect", "find idiom occurrences in text", _cmd_detect)
    cmd.add_argument("--lexicon", required=True, help="idiom list, one per line")
    group = cmd.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", help="a single sentence")
    group.add_argument("--in", dest="input", help="file with one sentence per line")
    cmd.add_argument("--out", dest="output", help="output JSONL (default stdout)")

    cmd = add("split", "split a parallel corpus by idiom presence", _cmd_split)
    cmd.add_argument("--lexicon", required=True)
    cmd.add_argument("--in", dest="input", required=True,
                     help="parallel corpus (.tsv or .jsonl)")
    cmd.add_argument("--out-dir", required=True,
                     help="directory receiving d1.* and d2.*")

    cmd = add("build-pseudo", "translate idiomatic pairs into training pairs",
              _cmd_build_pseudo)
    cmd.add_argument("--lexicon", required=True)
    cmd.add_argument("--in", dest="input", required=True, help="parallel corpus")
    cmd.add_argument("--translator", default=os.environ.get(TRANSLATOR_ENV),
                     help=f"mock:TABLE.json or http:URL (default ${TRANSLATOR_ENV})")
    cmd.add_argument("--out", dest="output", required=True, help="output pairs JSONL")
    cmd.add_argument("--max-inflight", type=int, default=1,
                     help="parallel translation requests")
    cmd.add_argument("--keep-going", action="store_true",
                     help="exit 0 even if some translations failed")

    cmd = add("dedup", "drop pairs with duplicate sources", _cmd_dedup)
    cmd.add_argument("--in", dest="input", required=True)
    cmd.add_argument("--out", dest="output", required=True)

    cmd = add("diff", "show the edit script between two sentences", _cmd_diff)
    cmd.add_argument("--lexicon", help="optional; keeps idioms whole")
    cmd.add_argument("source")
    cmd.add_argument("target")

    cmd = add("extract-dict", "mine idiom interpretations from pairs",
              _cmd_extract_dict)
    cmd.add_argument("--lexicon", required=True)
    cmd.add_argument("--in", dest="input", required=True, help="pairs JSONL")
    cmd.add_argument("--out", dest="output", required=True, help="dictionary JSON")

    cmd = add("build-inputs", "render model inputs from pairs", _cmd_build_inputs)
    cmd.add_argument("--lexicon", required=True)
    cmd.add_argument("--in", dest="input", required=True, help="pairs JSONL")
    cmd.add_argument("--mode", required=True, choices=["knowledge", "infill"])
    cmd.add_argument("--dictionary", help="interpretation dictionary JSON")
    cmd.add_argument("--out", dest="output", help="output JSONL (default stdout)")

    cmd = add("paraphrase", "rewrite idioms in text", _cmd_paraphrase)
    cmd.add_argument("--lexicon", required=True)
    cmd.add_argument("--backend", required=True,
                     help="identity, dict:DICT.json, or http:URL")
    group = cmd.add_mutually_exclusive_group(required=True)
    group.add_argument("--text")
    group.add_argument("--in", dest="input", help="one sentence per line")
    cmd.add_argument("--out", dest="output", help="one sentence per line (default stdout)")

    cmd = add("evaluate", "score outputs against sources and references",
              _cmd_evaluate)
    cmd.add_argument("--lexicon", required=True)
    cmd.add_argument("--sources", required=True, help="one sentence per line")
    cmd.add_argument("--outputs", required=True)
    cmd.add_argument("--references", help="optional; enables BLEU and ROUGE")

    cmd = add("stats", "summarize a pairs dataset", _cmd_stats)
    cmd.add_argument("--lexicon", required=True)
    cmd.add_argument("--dataset", required=True, help="pairs JSONL")

    cmd = add("serve", "run the review HTTP service", _cmd_serve)
    cmd.add_argument("--lexicon", required=True)
    cmd.add_argument("--dataset", required=True, help="pairs JSONL to review")
    cmd.add_argument("--log", required=True, help="append-only mutation log")
    cmd.add_argument("--host", default="127.0.0.1")
    cmd.add_argument("--port", type=int, default=8000)
    cmd.add_argument("--ui-dir", help="static directory to serve at /")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    if not getattr(args, "handler", None):
        parser.print_help(sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"cipkit: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, pseudo.TranslationError, ParaphraseError,
            inputs.SpanProviderError) as exc:
        print(f"cipkit: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
