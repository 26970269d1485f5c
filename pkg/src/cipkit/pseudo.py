"""Pseudo paraphrase-pair construction from an idiom-bearing MT corpus.

The English side of each idiom-bearing pair is translated back to Chinese by
a pluggable translator; the original Chinese sentence and the translation
become a (source, target) paraphrase pair. Translations that still contain
an idiom are flagged rather than dropped, so reviewers can fix them later.
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence

import requests

from .corpus import ParallelPair
from .lexicon import IdiomLexicon, IdiomOccurrence, contains_idiom, detect_idioms

logger = logging.getLogger(__name__)

STATUS_MACHINE = "machine"
STATUS_REVISED = "revised"
STATUS_APPROVED = "approved"
STATUS_FLAGGED = "flagged"
STATUSES = (STATUS_MACHINE, STATUS_REVISED, STATUS_APPROVED, STATUS_FLAGGED)


class TranslationError(Exception):
    """The translator failed for one input sentence."""


class Translator(Protocol):
    def translate(self, text: str) -> str: ...


@dataclass(frozen=True)
class Revision:
    """One accepted edit of a pair's target."""

    timestamp: str
    annotator: str
    old_target: str
    new_target: str

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "annotator": self.annotator,
            "old_target": self.old_target,
            "new_target": self.new_target,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Revision":
        return cls(data["timestamp"], data["annotator"], data["old_target"], data["new_target"])


@dataclass
class CipPair:
    """An idiom-bearing source sentence paired with its paraphrase target."""

    id: str
    source: str
    target: str
    idioms: list[IdiomOccurrence]
    status: str = STATUS_MACHINE
    revisions: list[Revision] = field(default_factory=list)
    version: int = 0

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown pair status: {self.status!r}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "target": self.target,
            "idioms": [occ.to_dict() for occ in self.idioms],
            "status": self.status,
            "revisions": [rev.to_dict() for rev in self.revisions],
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CipPair":
        return cls(
            id=str(data["id"]),
            source=data["source"],
            target=data["target"],
            idioms=[IdiomOccurrence.from_dict(occ) for occ in data.get("idioms", [])],
            status=data.get("status", STATUS_MACHINE),
            revisions=[Revision.from_dict(rev) for rev in data.get("revisions", [])],
            version=int(data.get("version", 0)),
        )


class TableTranslator:
    """Deterministic mock translator backed by an exact-match table."""

    def __init__(self, table: Mapping[str, str]):
        self._table = dict(table)

    def translate(self, text: str) -> str:
        try:
            result = self._table[text]
        except KeyError:
            raise TranslationError(f"no table entry for: {text!r}") from None
        if not result:
            raise TranslationError(f"empty translation for: {text!r}")
        return result

    @classmethod
    def load(cls, path: str | Path) -> "TableTranslator":
        with open(path, encoding="utf-8") as handle:
            return cls(json.load(handle))


class HttpTranslator:
    """Client for an external en->zh translation service.

    Contract: POST {"text": <english>} to the endpoint, expect HTTP 200 with
    {"translation": <chinese>}. Anything else is a TranslationError.
    """

    def __init__(self, url: str, timeout: float = 30.0, session: requests.Session | None = None):
        self.url = url
        self.timeout = timeout
        self._session = session or requests.Session()

    def translate(self, text: str) -> str:
        try:
            response = self._session.post(self.url, json={"text": text}, timeout=self.timeout)
        except requests.RequestException as exc:
            raise TranslationError(f"translator request failed: {exc}") from exc
        if response.status_code != 200:
            raise TranslationError(f"translator returned HTTP {response.status_code}")
        try:
            translation = response.json()["translation"]
        except (ValueError, KeyError) as exc:
            raise TranslationError(f"malformed translator response: {exc}") from exc
        if not isinstance(translation, str) or not translation:
            raise TranslationError("translator returned an empty translation")
        return translation


def load_translator(spec: str) -> Translator:
    """Build a translator from a CLI descriptor: ``mock:<table.json>`` or ``http:<url>``."""
    # a bare URL is the common case; accept it without the http: prefix
    if spec.startswith(("http://", "https://")):
        return HttpTranslator(spec)
    kind, _, arg = spec.partition(":")
    if kind == "mock" and arg:
        return TableTranslator.load(arg)
    if kind == "http" and arg:
        return HttpTranslator(arg)
    raise ValueError(f"unknown translator spec: {spec!r} (expected mock:<table.json> or http:<url>)")


@dataclass
class BuildReport:
    """Outcome counts for one pseudo-pair build run."""

    total: int = 0
    built: int = 0
    flagged: int = 0
    failed: int = 0
    errors: list[tuple[str, str]] = field(default_factory=list)  # (pair id, message)
    flagged_ids: list[str] = field(default_factory=list)

    @property
    def flagged_fraction(self) -> float:
        return self.flagged / self.built if self.built else 0.0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "built": self.built,
            "flagged": self.flagged,
            "failed": self.failed,
            "flagged_fraction": self.flagged_fraction,
            "errors": [{"id": pair_id, "error": message} for pair_id, message in self.errors],
        }


def build_pseudo_pairs(d2: Sequence[ParallelPair], translator: Translator,
                       lexicon: IdiomLexicon,
                       max_inflight: int = 1) -> tuple[list[CipPair], BuildReport]:
    """Translate the English side of every pair and build pseudo pairs.

    Every input zh sentence must contain at least one idiom. Targets that
    still contain an idiom are kept but flagged. Translator failures exclude
    the pair from the output and are listed in the report. Output order
    matches input order regardless of ``max_inflight``.
    """
    report = BuildReport(total=len(d2))
    source_idioms: list[list[IdiomOccurrence]] = []
    for pair in d2:
        occurrences = detect_idioms(pair.zh, lexicon)
        if not occurrences:
            raise ValueError(f"pair {pair.id!r} has no idiom in its zh side")
        source_idioms.append(occurrences)

    def translate_one(pair: ParallelPair) -> str | TranslationError:
        try:
            return translator.translate(pair.en)
        except TranslationError as exc:
            return exc

    if max_inflight > 1:
        with ThreadPoolExecutor(max_workers=max_inflight) as pool:
            results = list(pool.map(translate_one, d2))
    else:
        results = [translate_one(pair) for pair in d2]

    pairs: list[CipPair] = []
    for pair, occurrences, result in zip(d2, source_idioms, results):
        if isinstance(result, TranslationError):
            report.failed += 1
            report.errors.append((pair.id, str(result)))
            continue
        if contains_idiom(result, lexicon):
            status = STATUS_FLAGGED
            report.flagged += 1
            report.flagged_ids.append(pair.id)
        else:
            status = STATUS_MACHINE
        pairs.append(CipPair(id=pair.id, source=pair.zh, target=result,
                             idioms=occurrences, status=status))
        report.built += 1
    logger.info("built %d pseudo pairs (%d flagged, %d failed) from %d inputs",
                report.built, report.flagged, report.failed, report.total)
    return pairs, report


def deduplicate(pairs: Sequence[CipPair]) -> tuple[list[CipPair], list[str]]:
    """Drop pairs whose source string repeats, keeping the first occurrence.

    Returns the surviving pairs and the ids of the removed ones.
    """
    seen: set[str] = set()
    kept: list[CipPair] = []
    removed: list[str] = []
    for pair in pairs:
        if pair.source in seen:
            removed.append(pair.id)
        else:
            seen.add(pair.source)
            kept.append(pair)
    if removed:
        logger.info("removed %d duplicate-source pair(s)", len(removed))
    return kept, removed


def read_cip_pairs(path: str | Path) -> list[CipPair]:
    """Read pairs from JSONL, one pair object per line."""
    pairs: list[CipPair] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                pairs.append(CipPair.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed pair record: {exc}") from exc
    return pairs


def write_cip_pairs(path: str | Path, pairs: Iterable[CipPair]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(json.dumps(pair.to_dict(), ensure_ascii=False) + "\n")
