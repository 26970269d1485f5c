"""Shared fixtures plus a per-criterion acceptance summary.

The golden strings below are the two worked sentence pairs every layer of
the toolkit must reproduce exactly; tests import them from here so a typo
cannot drift between modules.
"""
from __future__ import annotations

import random

import pytest

from cipkit import IdiomLexicon

# kick-one-return-kick pair, given pre-segmented into words
GOLDEN_SOURCE_WORDS = "约翰 踢 了 我 一脚 ， 所以 我 以牙还牙 .".split(" ")
GOLDEN_TARGET_WORDS = "汤姆 踢 我 一脚 吧 ， 所以 我 也 踢了 他 一脚 .".split(" ")
GOLDEN_SOURCE = "约翰踢了我一脚，所以我以牙还牙."
GOLDEN_TARGET = "汤姆踢我一脚吧，所以我也踢了他一脚."
GOLDEN_DIFF = (
    ("-", ("约翰",)),
    ("+", ("汤姆",)),
    ("=", ("踢",)),
    ("-", ("了",)),
    ("=", ("我", "一脚")),
    ("+", ("吧",)),
    ("=", ("，", "所以", "我")),
    ("-", ("以牙还牙",)),
    ("+", ("也", "踢了", "他", "一脚")),
    ("=", (".",)),
)
GOLDEN_IDIOM = "以牙还牙"
GOLDEN_INTERPRETATION = "也踢了他一脚"

# mend-the-fold pair (ASCII comma and period, as printed)
MEND_SOURCE = "虽然你已经犯下了错误,但是亡羊补牢也为时不晚."
MEND_TARGET = "虽然你已经犯下了错误,但是现在改正也为时不晚."
MEND_IDIOM = "亡羊补牢"
MEND_INTERPRETATION = "现在改正"

# character pools for generated fixtures; idioms are drawn from IDIOM_CHARS
# so planted occurrences can collide and overlap with sentence text
SENTENCE_CHARS = "天地人你我他好大小上下前后东西南北山水火木金土日月星云风雨"
IDIOM_CHARS = "甲乙丙丁戊己庚辛壬癸"


@pytest.fixture
def lexicon() -> IdiomLexicon:
    return IdiomLexicon([
        GOLDEN_IDIOM, MEND_IDIOM, "深居简出", "缘木求鱼", "一诺千金",
        "画蛇添足", "井底之蛙", "对牛弹琴", "守株待兔", "杯弓蛇影",
    ])


def make_synthetic_lexicon(rng: random.Random, size: int = 12) -> IdiomLexicon:
    """Random short idioms over a tiny alphabet, so overlaps are common."""
    idioms = set()
    while len(idioms) < size:
        length = rng.randint(3, 5)
        idioms.add("".join(rng.choice(IDIOM_CHARS) for _ in range(length)))
    return IdiomLexicon(idioms)


def make_sentence_with_idioms(rng: random.Random, lexicon: IdiomLexicon,
                              n_idioms: int) -> str:
    """Random sentence text with n_idioms lexicon entries planted in it."""
    idioms = sorted(lexicon.texts)
    chunks = []
    for _ in range(n_idioms):
        chunks.append("".join(rng.choice(SENTENCE_CHARS)
                              for _ in range(rng.randint(1, 6))))
        chunks.append(rng.choice(idioms))
    chunks.append("".join(rng.choice(SENTENCE_CHARS)
                          for _ in range(rng.randint(1, 6))))
    return "".join(chunks)


# -- acceptance criterion reporting -----------------------------------------

ACCEPTANCE_LABELS = {
    "test_golden_edit_script": "golden sentence pair: ten-run edit script + mined interpretation",
    "test_substitution_golden": "golden substitution pair: dictionary backend output + proportion",
    "test_metric_identities": "metric identities on 100 randomized fixtures",
    "test_oracle_equivalence": "oracle equivalence: rouge, edit distance, diff replay x1000",
    "test_pipeline_property": "50-pair pipeline: split oracle, idiom-free targets, planted flags",
    "test_infill_roundtrip": "infill round-trip x500 + recursive simplify leaves no idioms",
    "test_annotation_durability": "annotation durability: 100 mutations, byte-identical replay",
    "test_released_dataset_stats": "released dataset statistics (conditional on CIP_DATASET)",
}

_acceptance_reports: dict[str, object] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.skipped):
        _acceptance_reports[report.nodeid] = report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_reports:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_acceptance_reports):
        report = _acceptance_reports[nodeid]
        name = nodeid.split("::")[-1].split("[")[0]
        label = ACCEPTANCE_LABELS.get(name, name)
        if report.passed:
            status = "PASS"
        elif report.skipped:
            status = "SKIP"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"[{status}] {label}")
