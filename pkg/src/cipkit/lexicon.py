"""Idiom lexicon loading and leftmost-longest idiom detection.

The lexicon is an immutable set of idioms plus a character trie so that
"longest idiom starting at position i" is a single forward walk. Detection
uses a greedy leftmost-longest scan: at each position match the longest
idiom starting there, consume it, and continue after its end, so matches
never overlap.
"""
from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

logger = logging.getLogger(__name__)

MIN_IDIOM_LENGTH = 3

# Trie terminal marker. Node keys are otherwise single characters, so the
# empty string can never collide.
_END = ""


@dataclass(frozen=True)
class Idiom:
    """A fixed idiomatic expression (chengyu), typically four characters."""

    text: str

    def __post_init__(self) -> None:
        if len(self.text) < MIN_IDIOM_LENGTH:
            raise ValueError(f"idiom shorter than {MIN_IDIOM_LENGTH} characters: {self.text!r}")
        for ch in self.text:
            if ch.isspace() or unicodedata.category(ch) == "Cc":
                raise ValueError(f"idiom contains whitespace or control characters: {self.text!r}")

    def __len__(self) -> int:
        return len(self.text)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class IdiomOccurrence:
    """A detected idiom span; offsets are Unicode scalar indices, end exclusive."""

    idiom: Idiom
    char_start: int
    char_end: int

    @property
    def text(self) -> str:
        return self.idiom.text

    def to_dict(self) -> dict:
        return {"idiom": self.idiom.text, "start": self.char_start, "end": self.char_end}

    @classmethod
    def from_dict(cls, data: dict) -> "IdiomOccurrence":
        return cls(Idiom(data["idiom"]), int(data["start"]), int(data["end"]))


class IdiomLexicon:
    """Immutable set of idioms with a prefix index for longest-match queries."""

    def __init__(self, idioms: Iterable[str | Idiom]):
        unique: set[Idiom] = set()
        for entry in idioms:
            unique.add(entry if isinstance(entry, Idiom) else Idiom(entry))
        self._idioms = frozenset(unique)
        self._texts = frozenset(idiom.text for idiom in unique)
        root: dict = {}
        for idiom in unique:
            node = root
            for ch in idiom.text:
                node = node.setdefault(ch, {})
            node[_END] = idiom
        self._root = root

    def __contains__(self, item: object) -> bool:
        if isinstance(item, Idiom):
            return item in self._idioms
        return item in self._texts

    def __len__(self) -> int:
        return len(self._idioms)

    def __iter__(self) -> Iterator[Idiom]:
        return iter(self._idioms)

    @property
    def texts(self) -> frozenset[str]:
        return self._texts

    def longest_match_at(self, text: str, pos: int) -> IdiomOccurrence | None:
        """Longest idiom starting exactly at ``pos``, or None."""
        node = self._root
        best_end = -1
        best: Idiom | None = None
        j = pos
        n = len(text)
        while j < n:
            node = node.get(text[j])
            if node is None:
                break
            j += 1
            hit = node.get(_END)
            if hit is not None:
                best_end = j
                best = hit
        if best is None:
            return None
        return IdiomOccurrence(best, pos, best_end)


def load_lexicon(path: str | Path) -> IdiomLexicon:
    """Load a lexicon from a UTF-8 text file, one idiom per line.

    Surrounding whitespace is trimmed; blank lines are ignored. Lines that do
    not form a valid idiom (shorter than MIN_IDIOM_LENGTH, or containing
    whitespace/control characters) are skipped and counted in a warning.
    """
    # Decoding the raw bytes keeps UnicodeDecodeError byte offsets exact.
    text = Path(path).read_bytes().decode("utf-8")
    idioms: list[Idiom] = []
    skipped = 0
    for line in text.splitlines():
        entry = line.strip()
        if not entry:
            continue
        try:
            idioms.append(Idiom(entry))
        except ValueError:
            skipped += 1
    if skipped:
        logger.warning("skipped %d invalid idiom line(s) in %s", skipped, path)
    return IdiomLexicon(idioms)


def detect_idioms(sentence: str, lexicon: IdiomLexicon) -> list[IdiomOccurrence]:
    """All idiom occurrences under the leftmost-longest greedy policy.

    Returned occurrences are sorted by start offset and pairwise
    non-overlapping.
    """
    occurrences: list[IdiomOccurrence] = []
    i = 0
    n = len(sentence)
    while i < n:
        match = lexicon.longest_match_at(sentence, i)
        if match is None:
            i += 1
        else:
            occurrences.append(match)
            i = match.char_end
    return occurrences


def contains_idiom(sentence: str, lexicon: IdiomLexicon) -> bool:
    """True iff the greedy scan finds at least one idiom."""
    i = 0
    n = len(sentence)
    while i < n:
        if lexicon.longest_match_at(sentence, i) is not None:
            return True
        i += 1
    return False
