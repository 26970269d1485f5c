"""Sentence paraphrasing backends.

A backend maps an idiom-bearing sentence to a paraphrase. A trained
sequence-to-sequence model would realize this mapping by factorizing
P(target | source) over target characters; this package does not train one,
it pins the interface and ships two concrete stand-ins: an identity backend
and a dictionary backend that splices each idiom's top-ranked interpretation
into place. An HTTP client forwards to an external model service.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import requests

from .editdiff import InterpretationDictionary
from .lexicon import IdiomLexicon, detect_idioms


class ParaphraseError(Exception):
    """The backend failed to produce a paraphrase."""


@dataclass(frozen=True)
class ParaphraseResult:
    """Paraphrased text plus the idioms no dictionary entry covered."""

    text: str
    missing: tuple[str, ...] = ()


class Backend(Protocol):
    def paraphrase(self, sentence: str) -> ParaphraseResult: ...


class IdentityBackend:
    """Returns the input unchanged; the do-nothing baseline."""

    def paraphrase(self, sentence: str) -> ParaphraseResult:
        return ParaphraseResult(sentence)


class DictionaryBackend:
    """Replaces each detected idiom with its top-ranked interpretation.

    Replacement runs right to left so earlier offsets stay valid; detected
    occurrences never overlap, so the result equals simultaneous
    replacement. Idioms without a dictionary entry are left untouched and
    reported in the result.
    """

    def __init__(self, lexicon: IdiomLexicon, dictionary: InterpretationDictionary):
        self.lexicon = lexicon
        self.dictionary = dictionary

    def paraphrase(self, sentence: str) -> ParaphraseResult:
        missing: list[str] = []
        text = sentence
        for occurrence in reversed(detect_idioms(sentence, self.lexicon)):
            replacement = self.dictionary.top(occurrence.text)
            if replacement is None:
                missing.append(occurrence.text)
                continue
            text = text[:occurrence.char_start] + replacement + text[occurrence.char_end:]
        missing.reverse()  # back to source order
        return ParaphraseResult(text, tuple(missing))


class HttpBackend:
    """Client for an external paraphrasing service.

    Contract: POST {"text": <chinese>} to the endpoint, expect HTTP 200 with
    {"paraphrase": <chinese>}; anything else raises ParaphraseError.
    """

    def __init__(self, url: str, timeout: float = 30.0, session: requests.Session | None = None):
        self.url = url
        self.timeout = timeout
        self._session = session or requests.Session()

    def paraphrase(self, sentence: str) -> ParaphraseResult:
        try:
            response = self._session.post(self.url, json={"text": sentence}, timeout=self.timeout)
        except requests.RequestException as exc:
            raise ParaphraseError(f"paraphrase request failed: {exc}") from exc
        if response.status_code != 200:
            raise ParaphraseError(f"paraphrase service returned HTTP {response.status_code}")
        try:
            text = response.json()["paraphrase"]
        except (ValueError, KeyError) as exc:
            raise ParaphraseError(f"malformed paraphrase response: {exc}") from exc
        if not isinstance(text, str) or not text:
            raise ParaphraseError("paraphrase service returned an empty result")
        return ParaphraseResult(text)


def load_backend(spec: str, lexicon: IdiomLexicon | None = None) -> Backend:
    """Build a backend from a CLI descriptor.

    ``identity`` | ``dict:<dictionary.json>`` | ``http:<url>``; the
    dictionary backend needs a lexicon for idiom detection.
    """
    # a bare URL is the common case; accept it without the http: prefix
    if spec.startswith(("http://", "https://")):
        return HttpBackend(spec)
    kind, _, arg = spec.partition(":")
    if kind == "identity" and not arg:
        return IdentityBackend()
    if kind == "dict" and arg:
        if lexicon is None:
            raise ValueError("dictionary backend requires a lexicon")
        return DictionaryBackend(lexicon, InterpretationDictionary.load(arg))
    if kind == "http" and arg:
        return HttpBackend(arg)
    raise ValueError(f"unknown backend spec: {spec!r} (expected identity, dict:<path> or http:<url>)")


def paraphrase(sentence: str, backend: Backend) -> ParaphraseResult:
    """Paraphrase one sentence with the given backend."""
    return backend.paraphrase(sentence)
