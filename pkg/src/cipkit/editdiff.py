"""Edit scripts between token sequences and idiom-interpretation mining.

``diff`` aligns two token sequences by recursively keeping the longest
common contiguous run and diffing the remainders, which yields maximal
keep/delete/insert runs. Mining walks the script for a delete run
immediately followed by an insert run: when the deleted text is exactly one
idiom and the inserted text is idiom-free, the inserted text is recorded as
an interpretation of that idiom. Per idiom, the three most frequent
interpretations form the dictionary.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Callable, Iterable, Sequence

from .corpus import tokenize
from .lexicon import IdiomLexicon, contains_idiom

if TYPE_CHECKING:  # pragma: no cover - circular at runtime only
    from .pseudo import CipPair

logger = logging.getLogger(__name__)

KEEP = "="
DELETE = "-"
INSERT = "+"

#: Maps a (source sentence, lexicon) to a token sequence.
Tokenizer = Callable[[str, IdiomLexicon | None], list[str]]


@dataclass(frozen=True)
class EditRun:
    """A maximal run of one edit operation over consecutive tokens."""

    op: str  # KEEP, DELETE or INSERT
    tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.op not in (KEEP, DELETE, INSERT):
            raise ValueError(f"unknown edit op: {self.op!r}")
        if not self.tokens:
            raise ValueError("edit run must carry at least one token")

    @property
    def text(self) -> str:
        return "".join(self.tokens)


@dataclass(frozen=True)
class EditScript:
    """Ordered edit runs aligning a source to a target token sequence."""

    runs: tuple[EditRun, ...]

    def source_tokens(self) -> list[str]:
        return [tok for run in self.runs if run.op in (KEEP, DELETE) for tok in run.tokens]

    def target_tokens(self) -> list[str]:
        """Replay the script: keeps copy, deletes skip, inserts emit."""
        return [tok for run in self.runs if run.op in (KEEP, INSERT) for tok in run.tokens]

    def __iter__(self):
        return iter(self.runs)

    def __len__(self) -> int:
        return len(self.runs)


def _longest_common_run(a: Sequence[str], a0: int, a1: int,
                        b: Sequence[str], b0: int, b1: int) -> tuple[int, int, int]:
    """Longest run of tokens contiguous in both a[a0:a1] and b[b0:b1].

    Ties go to the earliest source position, then the earliest target
    position. Returns (start in a, start in b, length); length 0 if the
    ranges share no token.
    """
    best_a, best_b, best_len = a0, b0, 0
    # run_ends[j] = length of the common run ending at (i, j); rolling over i.
    run_ends: dict[int, int] = {}
    for i in range(a0, a1):
        next_run_ends: dict[int, int] = {}
        token = a[i]
        for j in range(b0, b1):
            if b[j] == token:
                length = next_run_ends[j] = run_ends.get(j - 1, 0) + 1
                if length > best_len:
                    best_a, best_b, best_len = i - length + 1, j - length + 1, length
        run_ends = next_run_ends
    return best_a, best_b, best_len


def _matching_slices(a: Sequence[str], b: Sequence[str]) -> list[tuple[int, int, int]]:
    """All kept slices, via an explicit work stack to avoid deep recursion."""
    slices: list[tuple[int, int, int]] = []
    stack = [(0, len(a), 0, len(b))]
    while stack:
        a0, a1, b0, b1 = stack.pop()
        if a0 >= a1 or b0 >= b1:
            continue
        sa, sb, n = _longest_common_run(a, a0, a1, b, b0, b1)
        if n == 0:
            continue
        slices.append((sa, sb, n))
        stack.append((a0, sa, b0, sb))
        stack.append((sa + n, a1, sb + n, b1))
    # Kept slices are monotone in both sequences, so one sort restores order.
    slices.sort()
    return slices


def diff(source: Sequence[str], target: Sequence[str]) -> EditScript:
    """Edit script between token sequences, deletes before inserts.

    Adjacent runs never share an op: gaps between kept slices emit at most
    one delete and one insert, and two kept slices always have a gap on at
    least one side (otherwise they would be one longer common run).
    """
    runs: list[EditRun] = []
    ia = ib = 0
    for sa, sb, n in _matching_slices(source, target) + [(len(source), len(target), 0)]:
        if ia < sa:
            runs.append(EditRun(DELETE, tuple(source[ia:sa])))
        if ib < sb:
            runs.append(EditRun(INSERT, tuple(target[ib:sb])))
        if n:
            runs.append(EditRun(KEEP, tuple(source[sa:sa + n])))
        ia, ib = sa + n, sb + n
    return EditScript(tuple(runs))


def edit_distance(source: Sequence[str], target: Sequence[str]) -> int:
    """Token-level Levenshtein distance with unit costs."""
    if len(source) < len(target):
        source, target = target, source
    previous = list(range(len(target) + 1))
    for i, src_tok in enumerate(source, start=1):
        current = [i]
        for j, tgt_tok in enumerate(target, start=1):
            current.append(min(
                previous[j] + 1,            # delete
                current[j - 1] + 1,         # insert
                previous[j - 1] + (src_tok != tgt_tok),  # substitute
            ))
        previous = current
    return previous[-1]


def extract_interpretations(pair: "CipPair", lexicon: IdiomLexicon,
                            tokenizer: Tokenizer = tokenize) -> list[tuple[str, str]]:
    """Mine (idiom, interpretation) pairs from one sentence pair.

    The source is tokenized idiom-aware and diffed against the target; each
    delete run immediately followed by an insert run is considered. The pair
    qualifies only when the deleted text equals exactly one lexicon idiom and
    the inserted text contains no idiom at all.
    """
    script = diff(tokenizer(pair.source, lexicon), tokenizer(pair.target, lexicon))
    found: list[tuple[str, str]] = []
    for left, right in zip(script.runs, script.runs[1:]):
        if left.op != DELETE or right.op != INSERT:
            continue
        deleted = left.text
        inserted = right.text
        if deleted in lexicon and not contains_idiom(inserted, lexicon):
            found.append((deleted, inserted))
    return found


MAX_INTERPRETATIONS = 3


@dataclass
class InterpretationDictionary:
    """Per idiom, up to three interpretation strings ranked by frequency.

    Ranking is by occurrence count descending with first-seen order breaking
    ties; every stored interpretation is idiom-free by construction.
    """

    entries: dict[str, list[tuple[str, int]]] = field(default_factory=dict)

    def __contains__(self, idiom: str) -> bool:
        return idiom in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def interpretations(self, idiom: str) -> list[str]:
        return [text for text, _ in self.entries.get(idiom, [])]

    def top(self, idiom: str) -> str | None:
        ranked = self.entries.get(idiom)
        return ranked[0][0] if ranked else None

    def to_json_dict(self) -> dict[str, list[str]]:
        """Export form: idiom -> interpretation list, counts omitted."""
        return {idiom: [text for text, _ in ranked] for idiom, ranked in self.entries.items()}

    @classmethod
    def from_json_dict(cls, data: dict[str, list[str]]) -> "InterpretationDictionary":
        return cls({idiom: [(text, 0) for text in texts] for idiom, texts in data.items()})

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_json_dict(), handle, ensure_ascii=False, indent=2)
            handle.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "InterpretationDictionary":
        with open(path, encoding="utf-8") as handle:
            return cls.from_json_dict(json.load(handle))


def build_dictionary(pairs: Iterable["CipPair"], lexicon: IdiomLexicon,
                     tokenizer: Tokenizer = tokenize) -> InterpretationDictionary:
    """Aggregate mined interpretations over a corpus into the top-3 dictionary."""
    counts: dict[str, dict[str, int]] = {}
    for pair in pairs:
        for idiom, interpretation in extract_interpretations(pair, lexicon, tokenizer):
            per_idiom = counts.setdefault(idiom, {})
            per_idiom[interpretation] = per_idiom.get(interpretation, 0) + 1
    entries: dict[str, list[tuple[str, int]]] = {}
    for idiom, per_idiom in counts.items():
        # sorted() is stable, so equal counts keep first-seen order.
        ranked = sorted(per_idiom.items(), key=lambda item: -item[1])
        entries[idiom] = ranked[:MAX_INTERPRETATIONS]
    return InterpretationDictionary(entries)
