"""Parallel-corpus I/O, tokenization, and idiom/non-idiom corpus splitting.

The default tokenizer is deliberately segmenter-free so that every stage of
the pipeline is reproducible: detected idioms become single tokens, every
other CJK (or punctuation) character is its own token, and maximal ASCII
alphanumeric runs form one token. Whitespace only separates. Joining the
tokens of ``tokenize(s)`` gives back ``s`` with all whitespace removed.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .lexicon import IdiomLexicon, contains_idiom, detect_idioms

logger = logging.getLogger(__name__)

TokenSeq = list[str]

#: (line number, reason) for records dropped while reading a corpus file.
SkippedRecord = tuple[int, str]


@dataclass(frozen=True)
class ParallelPair:
    """One zh-en sentence pair of a machine translation corpus."""

    id: str
    zh: str
    en: str

    def __post_init__(self) -> None:
        if not self.zh.strip() or not self.en.strip():
            raise ValueError(f"pair {self.id!r}: zh and en must be non-empty")


@dataclass
class CorpusSplit:
    """Partition of a parallel corpus by whether the zh side has idioms."""

    d1: list[ParallelPair] = field(default_factory=list)  # no idioms
    d2: list[ParallelPair] = field(default_factory=list)  # at least one idiom


def tokenize(sentence: str, lexicon: IdiomLexicon | None = None) -> TokenSeq:
    """Idiom-aware character tokenization.

    When ``lexicon`` is given, each detected idiom occurrence is one token.
    Remaining text: maximal runs of ASCII letters/digits are one token,
    whitespace separates, and every other character stands alone.
    """
    starts: dict[int, int] = {}
    if lexicon is not None:
        starts = {occ.char_start: occ.char_end for occ in detect_idioms(sentence, lexicon)}
    tokens: list[str] = []
    i = 0
    n = len(sentence)
    while i < n:
        end = starts.get(i)
        if end is not None:
            tokens.append(sentence[i:end])
            i = end
            continue
        ch = sentence[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isascii() and ch.isalnum():
            j = i + 1
            while j < n and j not in starts and sentence[j].isascii() and sentence[j].isalnum():
                j += 1
            tokens.append(sentence[i:j])
            i = j
        else:
            tokens.append(ch)
            i += 1
    return tokens


def split_corpus(pairs: Iterable[ParallelPair], lexicon: IdiomLexicon) -> CorpusSplit:
    """Route each pair to d2 iff its zh side contains an idiom.

    Input order is preserved within both parts.
    """
    split = CorpusSplit()
    for pair in pairs:
        if contains_idiom(pair.zh, lexicon):
            split.d2.append(pair)
        else:
            split.d1.append(pair)
    logger.info("split corpus: %d without idioms, %d with idioms", len(split.d1), len(split.d2))
    return split


def _corpus_format(path: str | Path, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in ("tsv", "jsonl"):
            raise ValueError(f"unknown corpus format: {fmt!r}")
        return fmt
    suffix = Path(path).suffix.lower()
    if suffix in (".tsv", ".txt"):
        return "tsv"
    if suffix == ".jsonl":
        return "jsonl"
    raise ValueError(f"cannot infer corpus format from {path}; pass fmt='tsv' or 'jsonl'")


def _parse_tsv_line(line: str) -> ParallelPair | None:
    parts = line.split("\t")
    if len(parts) != 3:
        return None
    pair_id, zh, en = (part.strip() for part in parts)
    if not pair_id or not zh or not en:
        return None
    return ParallelPair(pair_id, zh, en)


def _parse_jsonl_line(line: str) -> ParallelPair | None:
    try:
        record = json.loads(line)
    except json.JSONDecodeError:
        return None
    if not isinstance(record, dict):
        return None
    values = []
    for key in ("id", "zh", "en"):
        value = record.get(key)
        if not isinstance(value, str):
            return None
        value = value.strip()
        if not value:
            return None
        values.append(value)
    return ParallelPair(*values)


def read_pairs(path: str | Path, fmt: str | None = None) -> tuple[list[ParallelPair], list[SkippedRecord]]:
    """Read a parallel corpus file.

    Malformed records are skipped, not fatal; they come back as
    (line number, reason) so callers can report them.
    """
    kind = _corpus_format(path, fmt)
    parse = _parse_tsv_line if kind == "tsv" else _parse_jsonl_line
    pairs: list[ParallelPair] = []
    skipped: list[SkippedRecord] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            pair = parse(line.rstrip("\n").rstrip("\r"))
            if pair is None:
                skipped.append((lineno, "malformed record"))
            else:
                pairs.append(pair)
    if skipped:
        logger.warning("skipped %d malformed record(s) in %s: lines %s",
                       len(skipped), path, [lineno for lineno, _ in skipped])
    return pairs, skipped


def write_pairs(path: str | Path, pairs: Iterable[ParallelPair], fmt: str | None = None) -> None:
    kind = _corpus_format(path, fmt)
    with open(path, "w", encoding="utf-8") as handle:
        for pair in pairs:
            if kind == "tsv":
                handle.write(f"{pair.id}\t{pair.zh}\t{pair.en}\n")
            else:
                handle.write(json.dumps({"id": pair.id, "zh": pair.zh, "en": pair.en},
                                        ensure_ascii=False) + "\n")
