import pytest

from censorlens.lexicons import (RESOURCE_FILES, ResourceError, SentimentLexicon, Thesaurus,
                                 FrequencyTable, demo_resource_dir, load_category_lexicon,
                                 load_embeddings, Resources)
from censorlens.segmenter import IDIOM, MaxMatchSegmenter

from conftest import write_tiny_resources


def test_category_tree(tmp_path):
    f = tmp_path / "liwc.tsv"
    f.write_text("#cat\ta\tsocial\t-\n#cat\tb\tfamily\ta\n#cat\tc\tmoney\t-\n"
                 "妈妈\tb\n钱\tc\n", encoding="utf-8")
    lex = load_category_lexicon(f)
    assert lex.depth() == 2
    assert lex.closure("妈妈") == {"a", "b"}
    assert lex.closure("钱") == {"c"}
    assert lex.closure("未知") == frozenset()


def test_category_cycle_rejected(tmp_path):
    f = tmp_path / "liwc.tsv"
    f.write_text("#cat\tA\ta\tB\n#cat\tB\tb\tA\n", encoding="utf-8")
    with pytest.raises(ResourceError, match="cycle"):
        load_category_lexicon(f)


def test_unknown_category_rejected(tmp_path):
    f = tmp_path / "liwc.tsv"
    f.write_text("#cat\ta\tx\t-\n词\tz\n", encoding="utf-8")
    with pytest.raises(ResourceError, match="unknown categories"):
        load_category_lexicon(f)


def test_header_count_checked(tmp_path):
    f = tmp_path / "liwc.tsv"
    f.write_text("#cat\ta\tx\t-\n#count\t2\n", encoding="utf-8")
    with pytest.raises(ResourceError, match="declares 2"):
        load_category_lexicon(f)


def test_demo_category_count_matches_header():
    path = demo_resource_dir() / "liwc.tsv"
    declared = next(int(l.split("\t")[1]) for l in path.read_text(encoding="utf-8").splitlines()
                    if l.startswith("#count"))
    assert len(load_category_lexicon(path).categories) == declared


def test_embeddings(tmp_path):
    f = tmp_path / "e.txt"
    f.write_text("2 3\n甲 1 2 3\n乙 4 5 6\n", encoding="utf-8")
    emb = load_embeddings(f)
    assert (len(emb), emb.dim) == (2, 3)
    assert emb.get("乙").tolist() == [4.0, 5.0, 6.0]
    assert emb.get("丙") is None


def test_embedding_dimension_error_names_line(tmp_path):
    f = tmp_path / "e.txt"
    f.write_text("2 3\n甲 1 2 3\n乙 4 5\n", encoding="utf-8")
    with pytest.raises(ResourceError, match=r"e.txt:3"):
        load_embeddings(f)


def test_embedding_header_count(tmp_path):
    f = tmp_path / "e.txt"
    f.write_text("3 1\n甲 1\n", encoding="utf-8")
    with pytest.raises(ResourceError):
        load_embeddings(f)


def test_frequency_floor():
    table = FrequencyTable({"常": 0.5, "稀": 0.3, "零": 0.0}, {"常": 5000, "稀": 49})
    assert table.lookup("常") == 0.5
    assert table.lookup("稀") == 0.0001
    assert table.lookup("零") == 0.0001
    assert table.lookup("无") == 0.0001


def test_thesaurus_class_range():
    with pytest.raises(ResourceError):
        Thesaurus({"词": frozenset({13})})
    with pytest.raises(ResourceError):
        Thesaurus({}, {"跑": 6})


def test_sentiment_lists_disjoint():
    with pytest.raises(ResourceError):
        SentimentLexicon(frozenset({"好"}), frozenset({"好"}))


def test_resources_load_tiny(tmp_path):
    res = Resources.load(write_tiny_resources(tmp_path / "r"))
    assert res.negations == {"不"}
    assert set(res.digests) == {*RESOURCE_FILES.values(), "negations.txt"}
    # idioms from the list are segmented whole and tagged idiom
    toks = MaxMatchSegmenter(res.segmenter_dict).segment("真是一言难尽")
    assert toks[-1].surface == "一言难尽" and toks[-1].pos == IDIOM


def test_missing_resource_names_path(tmp_path):
    d = write_tiny_resources(tmp_path / "r")
    (d / "thesaurus.tsv").unlink()
    with pytest.raises(FileNotFoundError, match="thesaurus.tsv"):
        Resources.load(d)
    with pytest.raises(FileNotFoundError, match="nowhere"):
        Resources.load(tmp_path / "nowhere")


def test_demo_resources_load(demo_resources):
    assert len(demo_resources.embeddings) == 50
    assert len(demo_resources.idioms) > 0
