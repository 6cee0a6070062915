import pytest
from hypothesis import given, strategies as st

from censorlens.segmenter import (IDIOM, NOUN, OTHER, PRONOUN_1ST, VERB, MaxMatchSegmenter,
                                  SegmenterDict, load_dict, pick_tag, segment, sentence_split)

DICT = SegmenterDict({
    "中国": (50.0, frozenset({NOUN})),
    "中国人": (20.0, frozenset({NOUN})),
    "国人": (5.0, frozenset({NOUN})),
    "人民": (40.0, frozenset({NOUN})),
    "民主": (30.0, frozenset({NOUN})),
    "我们": (90.0, frozenset({PRONOUN_1ST})),
    "支持": (25.0, frozenset({VERB, NOUN})),
    "一言难尽": (1.0, frozenset({IDIOM, OTHER})),
})


def test_empty_text():
    assert segment("", DICT) == []


def test_single_entry_spans_text():
    (tok,) = segment("中国人", DICT)
    assert (tok.surface, tok.start, tok.end, tok.pos, tok.dict_frequency) == ("中国人", 0, 3, NOUN, 20.0)


def test_hand_segmented_overlaps():
    # 10 characters; 中国人 beats 中国, then 民主 because 人 was consumed
    text = "我们中国人民主支持好"
    assert len(text) == 10
    assert [t.surface for t in segment(text, DICT)] == ["我们", "中国人", "民主", "支持", "好"]
    assert [t.pos for t in segment(text, DICT)] == [PRONOUN_1ST, NOUN, NOUN, VERB, OTHER]


def test_unknown_characters_are_single_tokens():
    toks = segment("哈哈，", DICT)
    assert [(t.surface, t.pos, t.dict_frequency) for t in toks] == [
        ("哈", OTHER, None), ("哈", OTHER, None), ("，", OTHER, None)]
    assert not toks[2].is_word


def test_tag_priority():
    assert pick_tag({NOUN, VERB}) == VERB
    assert pick_tag({IDIOM, VERB}) == IDIOM
    assert pick_tag({NOUN, PRONOUN_1ST}) == PRONOUN_1ST
    assert pick_tag(set()) == OTHER


def test_sentence_split():
    assert len(sentence_split("A。B！")) == 2
    assert sentence_split("") == []
    # 。 ！ ; ?? and a trailing fragment; the empty piece between ?? is dropped
    text = "第一句。第二句！第三;第四??\n尾巴"
    spans = sentence_split(text)
    assert [text[a:b] for a, b in spans] == ["第一句。", "第二句！", "第三;", "第四?", "尾巴"]


def test_load_dict(tmp_path):
    f = tmp_path / "d.tsv"
    f.write_text("# comment\n中国\t50\tnoun\n跑\t3\tverb,noun\n的\t900\n", encoding="utf-8")
    d = load_dict(f)
    assert d.entries["跑"] == (3.0, frozenset({VERB, NOUN}))
    assert d.entries["的"] == (900.0, frozenset())
    assert d.max_len == 2


def test_bad_dict_entries():
    with pytest.raises(ValueError):
        SegmenterDict({"x": (-1.0, frozenset())})
    with pytest.raises(ValueError):
        SegmenterDict({"x": (1.0, frozenset({"adverb"}))})


def brute_force_longest(text, entries):
    out, i = [], 0
    while i < len(text):
        best = max((w for w in entries if text.startswith(w, i)), key=len, default=text[i])
        out.append(best)
        i += len(best)
    return out


@given(st.text(alphabet="我们中国人民主支持一言难尽好", max_size=40))
def test_tiles_input_and_matches_longest_match(text):
    toks = MaxMatchSegmenter(DICT).segment(text)
    assert "".join(t.surface for t in toks) == text
    assert all(a.end == b.start for a, b in zip(toks, toks[1:]))
    assert all(t.start < t.end for t in toks)
    assert [t.surface for t in toks] == brute_force_longest(text, DICT.entries)


@given(st.text(max_size=60))
def test_sentence_spans_ordered_and_nonblank(text):
    spans = sentence_split(text)
    assert all(a < b for a, b in spans)
    assert all(b1 <= a2 for (_, b1), (a2, _) in zip(spans, spans[1:]))
    assert all(text[a:b].strip("。！？；!?;\n").strip() for a, b in spans)
