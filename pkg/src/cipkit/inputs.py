"""Model-input construction for interpretation-augmented and infill decoding.

Two input shapes are produced for downstream sequence-to-sequence models:

* knowledge inputs append every source idiom's dictionary interpretations
  after the sentence (``<src> </s> <block> <SEP> <block> ...``), one block
  per idiom in source order;
* infill inputs pair the sentence with a copy in which exactly one idiom is
  replaced by the mask token (``<src> </s> <masked src>``); the model is
  expected to emit only the replacement span.

``recursive_simplify`` drives a span predictor over a sentence until no
idiom remains, masking the leftmost occurrence each round.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .editdiff import InterpretationDictionary
from .lexicon import IdiomLexicon, IdiomOccurrence, detect_idioms

SENTENCE_SEP = "</s>"
BLOCK_SEP = "<SEP>"
MASK_TOKEN = "<X>"


@dataclass(frozen=True)
class InfillInput:
    """A sentence and its masked copy, joined for span-infill prediction."""

    text: str
    masked_source: str
    occurrence: IdiomOccurrence
    mask_token: str = MASK_TOKEN

    @property
    def masked_idiom(self) -> str:
        return self.occurrence.text


@dataclass(frozen=True)
class SimplifyResult:
    """Outcome of recursive idiom simplification.

    ``flagged`` is True when the iteration cap was reached with idioms still
    present (a misbehaving span provider kept reintroducing them).
    """

    text: str
    flagged: bool
    calls: int


class SpanProviderError(RuntimeError):
    """Span provider failed; carries the partial reconstruction so far."""

    def __init__(self, message: str, partial_text: str, calls: int):
        super().__init__(message)
        self.partial_text = partial_text
        self.calls = calls


def _check_occurrence(source: str, occurrence: IdiomOccurrence) -> None:
    if not (0 <= occurrence.char_start < occurrence.char_end <= len(source)):
        raise ValueError(f"occurrence out of bounds: [{occurrence.char_start}, {occurrence.char_end})")
    span = source[occurrence.char_start:occurrence.char_end]
    if span != occurrence.text:
        raise ValueError(f"occurrence text mismatch: sentence has {span!r}, expected {occurrence.text!r}")


def build_knowledge_input(source: str, lexicon: IdiomLexicon,
                          dictionary: InterpretationDictionary) -> str:
    """Concatenate the sentence with per-idiom interpretation blocks.

    One block per detected idiom, in source order; a block joins that
    idiom's dictionary interpretations with single spaces. Idioms missing
    from the dictionary keep an empty block so the block count always equals
    the idiom count.
    """
    occurrences = detect_idioms(source, lexicon)
    if not occurrences:
        raise ValueError("sentence contains no idiom; nothing to augment")
    blocks = [" ".join(dictionary.interpretations(occ.text)) for occ in occurrences]
    return f"{source} {SENTENCE_SEP} " + f" {BLOCK_SEP} ".join(blocks)


def build_infill_input(source: str, occurrence: IdiomOccurrence) -> InfillInput:
    """Mask one idiom occurrence and pair the sentence with the masked copy."""
    _check_occurrence(source, occurrence)
    masked = source[:occurrence.char_start] + MASK_TOKEN + source[occurrence.char_end:]
    return InfillInput(text=f"{source} {SENTENCE_SEP} {masked}",
                       masked_source=masked, occurrence=occurrence)


def apply_infill(source: str, occurrence: IdiomOccurrence, predicted_span: str) -> str:
    """Replace the masked occurrence with the predicted span."""
    _check_occurrence(source, occurrence)
    if not predicted_span:
        raise ValueError("empty predicted span would silently delete content")
    return source[:occurrence.char_start] + predicted_span + source[occurrence.char_end:]


def recursive_simplify(source: str, lexicon: IdiomLexicon,
                       span_provider: Callable[[InfillInput], str]) -> SimplifyResult:
    """Replace idioms one at a time, leftmost first, until none remain.

    Each round masks the leftmost occurrence, asks ``span_provider`` for a
    replacement, and applies it. A hard cap of twice the initial idiom count
    bounds the loop even when provided spans reintroduce idioms; hitting the
    cap flags the result.
    """
    current = source
    occurrences = detect_idioms(current, lexicon)
    cap = 2 * len(occurrences)
    calls = 0
    while occurrences and calls < cap:
        infill = build_infill_input(current, occurrences[0])
        try:
            span = span_provider(infill)
        except Exception as exc:
            raise SpanProviderError(
                f"span provider failed after {calls} replacement(s): {exc}",
                partial_text=current, calls=calls) from exc
        current = apply_infill(current, occurrences[0], span)
        calls += 1
        occurrences = detect_idioms(current, lexicon)
    return SimplifyResult(text=current, flagged=bool(occurrences), calls=calls)
