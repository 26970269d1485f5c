"""Tokenizer rules, corpus splitting, and parallel-pair file round-trips."""
from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cipkit import (
    IdiomLexicon,
    ParallelPair,
    contains_idiom,
    read_pairs,
    split_corpus,
    tokenize,
    write_pairs,
)
from conftest import make_sentence_with_idioms, make_synthetic_lexicon


class TestTokenize:
    def test_cjk_one_char_per_token(self):
        assert tokenize("约翰踢了我") == ["约", "翰", "踢", "了", "我"]

    def test_idiom_is_one_token(self):
        lexicon = IdiomLexicon(["以牙还牙"])
        assert tokenize("以牙还牙.", lexicon) == ["以牙还牙", "."]

    def test_ascii_runs_are_one_token(self):
        assert tokenize("BLEU得分84") == ["BLEU", "得", "分", "84"]

    def test_whitespace_separates_only(self):
        assert tokenize("the cat") == ["the", "cat"]
        assert tokenize("  你 好  ") == ["你", "好"]

    def test_punctuation_single_tokens(self):
        assert tokenize("你好，世界!") == ["你", "好", "，", "世", "界", "!"]

    def test_empty(self):
        assert tokenize("") == []

    def test_pure_cjk_token_count_is_scalar_count(self):
        sentence = "今天天气很好我们出去玩"
        assert len(tokenize(sentence)) == len(sentence)

    def test_idiom_mid_ascii_run_boundary(self):
        # an idiom start must terminate a pending ASCII run
        lexicon = IdiomLexicon(["abc的def"])
        assert tokenize("xyabc的defgh", lexicon) == ["xy", "abc的def", "gh"]


ascii_chunk = st.text("abcXYZ019", min_size=1, max_size=5)
cjk_chunk = st.text("天地人你我他好大", min_size=1, max_size=5)
punct_chunk = st.sampled_from(list("，。!?,."))
space_chunk = st.sampled_from([" ", "  ", "\t", "\n"])
sentence_strategy = st.lists(
    st.one_of(ascii_chunk, cjk_chunk, punct_chunk, space_chunk),
    min_size=0, max_size=12,
).map("".join)


@settings(max_examples=300, deadline=None)
@given(sentence=sentence_strategy)
def test_tokenize_round_trip(sentence):
    tokens = tokenize(sentence)
    assert "".join(tokens) == "".join(sentence.split())
    assert all(tokens), "no empty tokens"


@settings(max_examples=150, deadline=None)
@given(sentence=sentence_strategy)
def test_tokenize_deterministic(sentence):
    assert tokenize(sentence) == tokenize(sentence)


def test_tokenize_round_trip_with_idioms():
    rng = random.Random(7)
    lexicon = make_synthetic_lexicon(rng)
    for _ in range(100):
        sentence = make_sentence_with_idioms(rng, lexicon, rng.randint(1, 3))
        tokens = tokenize(sentence, lexicon)
        assert "".join(tokens) == "".join(sentence.split())
        # every planted-and-detected idiom surfaces as a whole token
        from cipkit import detect_idioms
        for occ in detect_idioms(sentence, lexicon):
            assert occ.text in tokens


class TestParallelPair:
    def test_rejects_blank_sides(self):
        with pytest.raises(ValueError):
            ParallelPair("1", " ", "ok")
        with pytest.raises(ValueError):
            ParallelPair("1", "好的句子", "")


class TestSplitCorpus:
    def test_two_pairs(self, lexicon):
        pairs = [
            ParallelPair("1", "他亡羊补牢了.", "He mended the fold."),
            ParallelPair("2", "今天天气好.", "Nice weather."),
        ]
        split = split_corpus(pairs, lexicon)
        assert [p.id for p in split.d2] == ["1"]
        assert [p.id for p in split.d1] == ["2"]

    def test_no_idioms_anywhere(self, lexicon):
        pairs = [ParallelPair(str(i), "今天天气好.", "x") for i in range(4)]
        split = split_corpus(pairs, lexicon)
        assert split.d2 == [] and split.d1 == pairs

    def test_twenty_pair_fixture_against_per_line_oracle(self):
        rng = random.Random(20240812)
        lexicon = make_synthetic_lexicon(rng)
        pairs = []
        idiom_lines = 0
        for i in range(20):
            if idiom_lines < 7 and rng.random() < 0.5:
                zh = make_sentence_with_idioms(rng, lexicon, 1)
                idiom_lines += 1
            else:
                zh = "".join(rng.choice("天地人你我他") for _ in range(8))
                assert not contains_idiom(zh, lexicon)
            pairs.append(ParallelPair(str(i), zh, f"en {i}"))
        while idiom_lines < 7:
            pairs[idiom_lines] = ParallelPair(
                pairs[idiom_lines].id,
                make_sentence_with_idioms(rng, lexicon, 1),
                pairs[idiom_lines].en)
            idiom_lines += 1
        split = split_corpus(pairs, lexicon)
        assert len(split.d2) == sum(1 for p in pairs if contains_idiom(p.zh, lexicon))
        assert len(split.d2) >= 7
        assert len(split.d1) + len(split.d2) == 20
        for pair in split.d2:
            assert contains_idiom(pair.zh, lexicon)
        for pair in split.d1:
            assert not contains_idiom(pair.zh, lexicon)

    def test_order_preserved(self, lexicon):
        pairs = [
            ParallelPair("a", "他亡羊补牢了.", "x"),
            ParallelPair("b", "平常的句子.", "x"),
            ParallelPair("c", "她深居简出.", "x"),
            ParallelPair("d", "又一个句子.", "x"),
        ]
        split = split_corpus(pairs, lexicon)
        assert [p.id for p in split.d2] == ["a", "c"]
        assert [p.id for p in split.d1] == ["b", "d"]


class TestPairFiles:
    def _pairs(self):
        return [
            ParallelPair("1", "他亡羊补牢了.", "He mended the fold."),
            ParallelPair("2", "今天天气好.", "Nice weather, isn't it?"),
        ]

    def test_tsv_round_trip(self, tmp_path):
        path = tmp_path / "corpus.tsv"
        write_pairs(path, self._pairs())
        loaded, skipped = read_pairs(path)
        assert loaded == self._pairs() and skipped == []

    def test_jsonl_round_trip(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_pairs(path, self._pairs())
        loaded, skipped = read_pairs(path)
        assert loaded == self._pairs() and skipped == []
        record = json.loads(path.read_text(encoding="utf-8").splitlines()[0])
        assert record == {"id": "1", "zh": "他亡羊补牢了.", "en": "He mended the fold."}

    def test_malformed_lines_skipped_and_numbered(self, tmp_path, caplog):
        path = tmp_path / "corpus.tsv"
        path.write_text("1\t你好世界\thello\nonly-one-column\n3\t再见\tbye\n",
                        encoding="utf-8")
        with caplog.at_level("WARNING", logger="cipkit.corpus"):
            loaded, skipped = read_pairs(path)
        assert [p.id for p in loaded] == ["1", "3"]
        assert [lineno for lineno, _ in skipped] == [2]

    def test_malformed_jsonl_skipped(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"id":"1","zh":"你好呀","en":"hi"}\nnot json\n'
                        '{"id":"2","zh":" ","en":"hi"}\n', encoding="utf-8")
        loaded, skipped = read_pairs(path)
        assert [p.id for p in loaded] == ["1"]
        assert [lineno for lineno, _ in skipped] == [2, 3]
