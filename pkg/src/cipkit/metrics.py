"""Evaluation metrics and corpus statistics for paraphrase outputs.

BLEU here is the corpus-level 4-gram variant with a single reference per
candidate: modified n-gram precisions pooled over the corpus, geometric
mean, and the brevity penalty exp(1 - r/c) when the candidate corpus is
shorter than the reference corpus. No smoothing: any zero pooled precision
makes the score 0. ROUGE-N is the per-sentence F1 of clipped n-gram overlap,
macro-averaged. The paraphrase proportion counts source idiom occurrences
whose surface form no longer appears in the corresponding output.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .corpus import TokenSeq, tokenize
from .editdiff import Tokenizer, edit_distance
from .lexicon import IdiomLexicon, detect_idioms
from .pseudo import CipPair

logger = logging.getLogger(__name__)

BLEU_MAX_ORDER = 4


@dataclass(frozen=True)
class EvalReport:
    """Scores over one evaluation corpus."""

    bleu: float | None
    rouge1_f: float | None
    rouge2_f: float | None
    proportion: float
    n_sentences: int

    def to_dict(self) -> dict:
        return {
            "bleu": self.bleu,
            "rouge1_f": self.rouge1_f,
            "rouge2_f": self.rouge2_f,
            "proportion": self.proportion,
            "n_sentences": self.n_sentences,
        }


@dataclass(frozen=True)
class CorpusStats:
    """Size, length, idiom, and edit-distance statistics of a pair corpus."""

    pairs: int
    src_tokens: int
    ref_tokens: int
    src_avg_len: float
    ref_avg_len: float
    all_idioms: int
    unique_idioms: int
    avg_edit_distance: float

    def to_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "src_tokens": self.src_tokens,
            "ref_tokens": self.ref_tokens,
            "src_avg_len": self.src_avg_len,
            "ref_avg_len": self.ref_avg_len,
            "all_idioms": self.all_idioms,
            "unique_idioms": self.unique_idioms,
            "avg_edit_distance": self.avg_edit_distance,
        }


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _check_corpus(candidates: Sequence[TokenSeq], references: Sequence[TokenSeq]) -> None:
    if len(candidates) != len(references):
        raise ValueError(f"corpus length mismatch: {len(candidates)} candidates, "
                         f"{len(references)} references")
    if not candidates:
        raise ValueError("empty evaluation corpus")


def bleu(candidates: Sequence[TokenSeq], references: Sequence[TokenSeq]) -> float:
    """Corpus-level BLEU-4 as a percentage in [0, 100]."""
    _check_corpus(candidates, references)
    clipped = [0] * BLEU_MAX_ORDER
    totals = [0] * BLEU_MAX_ORDER
    cand_len = 0
    ref_len = 0
    for cand, ref in zip(candidates, references):
        cand_len += len(cand)
        ref_len += len(ref)
        for n in range(1, BLEU_MAX_ORDER + 1):
            cand_counts = _ngram_counts(cand, n)
            if not cand_counts:
                continue
            ref_counts = _ngram_counts(ref, n)
            totals[n - 1] += sum(cand_counts.values())
            clipped[n - 1] += sum(min(count, ref_counts[gram])
                                  for gram, count in cand_counts.items())
    if cand_len == 0 or any(c == 0 or t == 0 for c, t in zip(clipped, totals)):
        return 0.0
    log_precision = sum(math.log(c / t) for c, t in zip(clipped, totals)) / BLEU_MAX_ORDER
    brevity = 1.0 if cand_len >= ref_len else math.exp(1.0 - ref_len / cand_len)
    return 100.0 * brevity * math.exp(log_precision)


def rouge_n(candidates: Sequence[TokenSeq], references: Sequence[TokenSeq], n: int) -> float:
    """Macro-averaged ROUGE-N F1 in [0, 1], for n in {1, 2}."""
    if n not in (1, 2):
        raise ValueError(f"rouge_n supports n in {{1, 2}}, got {n}")
    _check_corpus(candidates, references)
    total_f1 = 0.0
    for cand, ref in zip(candidates, references):
        cand_counts = _ngram_counts(cand, n)
        ref_counts = _ngram_counts(ref, n)
        overlap = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
        cand_total = sum(cand_counts.values())
        ref_total = sum(ref_counts.values())
        precision = overlap / cand_total if cand_total else 0.0
        recall = overlap / ref_total if ref_total else 0.0
        if precision + recall > 0:
            total_f1 += 2 * precision * recall / (precision + recall)
    return total_f1 / len(candidates)


def paraphrase_proportion(sources: Sequence[str], outputs: Sequence[str],
                          lexicon: IdiomLexicon) -> float:
    """Share of source idiom occurrences absent from the paired output, x100.

    Sources without any idiom are skipped (they contribute nothing to either
    side of the ratio) and reported via the returned component being based
    only on idiom-bearing pairs.
    """
    if len(sources) != len(outputs):
        raise ValueError(f"corpus length mismatch: {len(sources)} sources, "
                         f"{len(outputs)} outputs")
    if not sources:
        raise ValueError("empty evaluation corpus")
    paraphrased = 0
    occurrences = 0
    skipped = 0
    for source, output in zip(sources, outputs):
        found = detect_idioms(source, lexicon)
        if not found:
            skipped += 1
            continue
        for occurrence in found:
            occurrences += 1
            if occurrence.text not in output:
                paraphrased += 1
    if occurrences == 0:
        raise ValueError("no idiom occurrence in any source sentence")
    if skipped:
        logger.warning("skipped %d source(s) without idioms", skipped)
    return 100.0 * paraphrased / occurrences


def compute_stats(pairs: Sequence[CipPair], lexicon: IdiomLexicon,
                  tokenizer: Tokenizer = tokenize) -> CorpusStats:
    """Corpus statistics over (source, target) pairs."""
    if not pairs:
        raise ValueError("empty pair corpus")
    src_tokens = 0
    ref_tokens = 0
    all_idioms = 0
    unique: set[str] = set()
    total_distance = 0
    for pair in pairs:
        source_seq = tokenizer(pair.source, lexicon)
        target_seq = tokenizer(pair.target, lexicon)
        src_tokens += len(source_seq)
        ref_tokens += len(target_seq)
        for occurrence in detect_idioms(pair.source, lexicon):
            all_idioms += 1
            unique.add(occurrence.text)
        total_distance += edit_distance(source_seq, target_seq)
    count = len(pairs)
    return CorpusStats(
        pairs=count,
        src_tokens=src_tokens,
        ref_tokens=ref_tokens,
        src_avg_len=src_tokens / count,
        ref_avg_len=ref_tokens / count,
        all_idioms=all_idioms,
        unique_idioms=len(unique),
        avg_edit_distance=total_distance / count,
    )


def evaluate(sources: Sequence[str], outputs: Sequence[str], lexicon: IdiomLexicon,
             references: Sequence[str] | None = None,
             tokenizer: Tokenizer = tokenize) -> EvalReport:
    """Full report over raw sentences; BLEU/ROUGE need references."""
    if len(sources) != len(outputs):
        raise ValueError(f"corpus length mismatch: {len(sources)} sources, "
                         f"{len(outputs)} outputs")
    bleu_score = rouge1 = rouge2 = None
    if references is not None:
        candidate_seqs = [tokenizer(text, lexicon) for text in outputs]
        reference_seqs = [tokenizer(text, lexicon) for text in references]
        bleu_score = bleu(candidate_seqs, reference_seqs)
        rouge1 = rouge_n(candidate_seqs, reference_seqs, 1)
        rouge2 = rouge_n(candidate_seqs, reference_seqs, 2)
    proportion = paraphrase_proportion(sources, outputs, lexicon)
    return EvalReport(bleu=bleu_score, rouge1_f=rouge1, rouge2_f=rouge2,
                      proportion=proportion, n_sentences=len(sources))
