"""Regenerate the bundled demo resources in src/censorlens/data/demo/.

The demo lexicons are tiny, hand-made stand-ins for the real (proprietary or
unpublished) resources. Run from the repository root:

    python scripts/make_demo_resources.py
"""

from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "src" / "censorlens" / "data" / "demo"

# word: (tags, thesaurus classes, liwc category ids, verb class)
# thesaurus classes: 1 person, 2 thing, 3 time/space, 4 abstract, 5 property,
# 6 action, 7 psychology, 8 activity, 9 phenomenon, 10 relation, 11 auxiliary, 12 honorific
VOCAB = {
    # first-person pronouns
    "我": ("pronoun-1st", [1], ["i"], None),
    "我们": ("pronoun-1st", [1], ["we"], None),
    "咱们": ("pronoun-1st", [1], ["we"], None),
    # other function words
    "他们": ("other", [1], ["pronoun"], None),
    "你们": ("other", [1], ["pronoun"], None),
    "的": ("other", [11], ["function"], None),
    "了": ("other", [11], ["function"], None),
    "是": ("verb", [10, 11], ["function", "verb"], 5),
    "在": ("other", [11], ["function"], None),
    "和": ("other", [11], ["function"], None),
    "也": ("other", [11], ["function"], None),
    "都": ("other", [11], ["function"], None),
    "很": ("other", [11], ["function"], None),
    "今天": ("noun", [3], [], None),
    "明天": ("noun", [3], [], None),
    "这个": ("other", [11], ["function"], None),
    # negations
    "不": ("other", [11], ["negate"], None),
    "没有": ("verb", [10, 11], ["negate", "verb"], 5),
    "别": ("other", [11], ["negate"], None),
    # nouns
    "政府": ("noun", [1, 4], ["power"], None),
    "人民": ("noun", [1], ["social"], None),
    "国家": ("noun", [3, 4], ["power"], None),
    "民主": ("noun", [4], ["power"], None),
    "自由": ("noun", [4, 5], [], None),
    "人权": ("noun", [4], [], None),
    "警察": ("noun", [1], ["power"], None),
    "社会": ("noun", [4], ["social"], None),
    "历史": ("noun", [3, 4], [], None),
    "新闻": ("noun", [2, 4], [], None),
    "城市": ("noun", [3], [], None),
    "学校": ("noun", [3], ["work"], None),
    "孩子": ("noun", [1], ["social"], None),
    "公司": ("noun", [1, 3], ["work"], None),
    "总统": ("noun", [1], ["power"], None),
    "美国": ("noun", [3], [], None),
    "中国": ("noun", [3], [], None),
    "经济": ("noun", [4], ["money"], None),
    "工资": ("noun", [2], ["money", "work"], None),
    "股票": ("noun", [2], ["money"], None),
    "银行": ("noun", [3], ["money"], None),
    "奖金": ("noun", [2], ["money", "reward"], None),
    "礼物": ("noun", [2], ["reward"], None),
    "电影": ("noun", [2], ["leisure"], None),
    "音乐": ("noun", [2, 8], ["leisure"], None),
    "周末": ("noun", [3], ["leisure"], None),
    "假期": ("noun", [3], ["leisure"], None),
    "美食": ("noun", [2], ["leisure"], None),
    # verbs by verb class: 1 actions, 2 psychology, 3 human activities,
    # 4 states and phenomena, 5 relations
    "抗议": ("verb", [6, 8], ["power", "verb"], 1),
    "游行": ("verb", [6, 8], ["verb"], 1),
    "集合": ("verb", [6], ["verb"], 1),
    "推翻": ("verb", [6], ["power", "verb"], 1),
    "反抗": ("verb", [6, 7], ["anger", "verb"], 1),
    "举报": ("verb", [6], ["verb"], 1),
    "担心": ("verb", [7], ["negemo", "verb"], 2),
    "害怕": ("verb", [7], ["negemo", "verb"], 2),
    "希望": ("verb", [7], ["posemo", "verb"], 2),
    "相信": ("verb", [7], ["verb"], 2),
    "怀疑": ("verb", [7], ["verb"], 2),
    "工作": ("verb", [8], ["work", "verb"], 3),
    "学习": ("verb", [8], ["work", "verb"], 3),
    "旅游": ("verb", [8], ["leisure", "verb"], 3),
    "购物": ("verb", [8], ["leisure", "money", "verb"], 3),
    "投资": ("verb", [8], ["money", "verb"], 3),
    "参加": ("verb", [8, 10], ["social", "verb"], 3),
    "组织": ("verb", [8, 1], ["social", "verb"], 3),
    "发生": ("verb", [9], ["verb"], 4),
    "出现": ("verb", [9], ["verb"], 4),
    "消失": ("verb", [9], ["verb"], 4),
    "死亡": ("verb", [9], ["death", "verb"], 4),
    "增长": ("verb", [9], ["money", "verb"], 4),
    "支持": ("verb", [10], ["social", "verb"], 5),
    "反对": ("verb", [10, 6], ["verb"], 5),
    "依靠": ("verb", [10], ["verb"], 5),
    # sentiment words
    "好": ("other", [5], ["posemo"], None),
    "开心": ("other", [5, 7], ["posemo"], None),
    "幸福": ("other", [5, 7], ["posemo"], None),
    "美好": ("other", [5], ["posemo"], None),
    "喜欢": ("verb", [7], ["posemo", "verb"], 2),
    "快乐": ("other", [5, 7], ["posemo", "leisure"], None),
    "成功": ("other", [5, 9], ["posemo", "reward"], None),
    "感谢": ("verb", [7, 12], ["posemo", "social", "verb"], 2),
    "满意": ("other", [5, 7], ["posemo"], None),
    "坏": ("other", [5], ["negemo"], None),
    "悲伤": ("other", [5, 7], ["negemo"], None),
    "痛苦": ("other", [5, 7], ["negemo"], None),
    "可怕": ("other", [5], ["negemo"], None),
    "愤怒": ("other", [7], ["anger"], None),
    "失望": ("other", [7], ["negemo"], None),
    "黑暗": ("other", [5, 9], ["negemo"], None),
    "腐败": ("other", [5, 4], ["negemo", "power"], None),
    "残酷": ("other", [5], ["anger"], None),
}

IDIOMS = {
    # idiom: (thesaurus classes, liwc categories)
    "民不聊生": ([9, 4], ["negemo"]),
    "官逼民反": ([6, 10], ["anger", "power"]),
    "忍无可忍": ([7], ["anger"]),
    "水深火热": ([9], ["negemo"]),
    "众志成城": ([10, 6], ["social"]),
    "一意孤行": ([6, 5], ["negemo"]),
    "颠倒黑白": ([6, 4], ["anger"]),
    "怨声载道": ([9, 7], ["anger"]),
    "暗无天日": ([9, 5], ["negemo"]),
    "安居乐业": ([9, 8], ["posemo"]),
    "心想事成": ([7, 9], ["posemo", "reward"]),
    "国泰民安": ([9, 4], ["posemo"]),
}

POSITIVE = ["好", "开心", "幸福", "美好", "喜欢", "快乐", "成功", "感谢", "满意", "希望",
            "安居乐业", "心想事成", "国泰民安"]
NEGATIVE = ["坏", "悲伤", "痛苦", "可怕", "愤怒", "失望", "黑暗", "腐败", "残酷", "担心", "害怕",
            "民不聊生", "水深火热", "暗无天日", "怨声载道"]
NEGATIONS = ["不", "没有", "别"]

# id, name, parent
CATEGORIES = [
    ("1", "function", None),
    ("2", "pronoun", "1"),
    ("3", "i", "2"),
    ("4", "we", "2"),
    ("5", "negate", "1"),
    ("6", "affect", None),
    ("7", "posemo", "6"),
    ("8", "negemo", "6"),
    ("9", "anger", "8"),
    ("10", "social", None),
    ("11", "concerns", None),
    ("12", "work", "11"),
    ("13", "leisure", "11"),
    ("14", "money", "11"),
    ("15", "death", "11"),
    ("16", "drives", None),
    ("17", "reward", "16"),
    ("18", "power", "16"),
    ("19", "verb", None),
]

TERMS = [
    ("文革", "cultural revolution"),
    ("人权", "human rights"),
    ("计划生育", "family planning"),
    ("审查", "censorship & propaganda"),
    ("宣传", "censorship & propaganda"),
    ("民主", "democracy"),
    ("选举", "democracy"),
    ("爱国", "patriotism"),
    ("中国", "China"),
    ("中共", "China"),
    ("特朗普", "Trump"),
    ("川普", "Trump"),
    ("贸易战", "Trump"),
    ("孟晚舟", "Meng Wanzhou"),
    ("华为", "Meng Wanzhou"),
    ("红黄蓝", "kindergarten abuse"),
    ("虐童", "kindergarten abuse"),
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    name_to_id = {name: cid for cid, name, _ in CATEGORIES}
    rng = np.random.default_rng(20181229)

    with open(OUT / "dict.tsv", "w", encoding="utf-8") as fh:
        fh.write("# word\tfreq_per_million\ttags\n")
        for w, (tag, _, _, _) in VOCAB.items():
            fh.write(f"{w}\t{rng.uniform(1, 2000):.1f}\t{tag}\n")
        for w in IDIOMS:
            fh.write(f"{w}\t{rng.uniform(0.1, 5):.2f}\tidiom\n")

    with open(OUT / "liwc.tsv", "w", encoding="utf-8") as fh:
        fh.write(f"#count\t{len(CATEGORIES)}\n")
        for cid, name, parent in CATEGORIES:
            fh.write(f"#cat\t{cid}\t{name}\t{parent or '-'}\n")
        entries = {w: cats for w, (_, _, cats, _) in VOCAB.items()}
        entries.update({w: cats for w, (_, cats) in IDIOMS.items()})
        for w, cats in entries.items():
            if cats:
                fh.write(f"{w}\t{','.join(name_to_id[c] for c in cats)}\n")

    with open(OUT / "thesaurus.tsv", "w", encoding="utf-8") as fh:
        for w, (_, classes, _, _) in VOCAB.items():
            fh.write(f"{w}\t{','.join(map(str, classes))}\n")
        for w, (classes, _) in IDIOMS.items():
            fh.write(f"{w}\t{','.join(map(str, classes))}\n")

    with open(OUT / "verb_classes.tsv", "w", encoding="utf-8") as fh:
        for w, (_, _, _, vc) in VOCAB.items():
            if vc is not None:
                fh.write(f"{w}\t{vc}\n")

    words = list(VOCAB) + list(IDIOMS)
    chars = sorted({ch for w in words for ch in w})
    with open(OUT / "char_freq.tsv", "w", encoding="utf-8") as fh:
        for ch in chars:
            count = int(rng.integers(20, 200_000))
            fh.write(f"{ch}\t{count / 1e6 * 100:.6f}\t{count}\n")
    with open(OUT / "word_freq.tsv", "w", encoding="utf-8") as fh:
        for w in words:
            # idioms are rare and fall below the count floor
            count = int(rng.integers(5, 45)) if w in IDIOMS else int(rng.integers(60, 80_000))
            fh.write(f"{w}\t{count / 1e6 * 100:.6f}\t{count}\n")

    for name, items in (("positive.txt", POSITIVE), ("negative.txt", NEGATIVE),
                        ("negations.txt", NEGATIONS), ("idioms.txt", list(IDIOMS))):
        (OUT / name).write_text("\n".join(items) + "\n", encoding="utf-8")

    # 50-word embedding table; sentiment words lean along a shared direction
    dim = 16
    emb_words = words[::2][:50]
    polarity = rng.normal(size=dim)
    polarity /= np.linalg.norm(polarity)
    with open(OUT / "embeddings.txt", "w", encoding="utf-8") as fh:
        fh.write(f"{len(emb_words)} {dim}\n")
        for w in emb_words:
            v = rng.normal(scale=0.5, size=dim)
            if w in POSITIVE:
                v += polarity
            elif w in NEGATIVE:
                v -= polarity
            fh.write(w + " " + " ".join(f"{x:.6f}" for x in v) + "\n")

    with open(OUT / "terms.txt", "w", encoding="utf-8") as fh:
        for term, topic in TERMS:
            fh.write(f"{term}\t{topic}\n")


if __name__ == "__main__":
    main()
