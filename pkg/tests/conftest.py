from pathlib import Path

import pytest

from censorlens.lexicons import Resources, demo_resource_dir

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def demo_resources() -> Resources:
    return Resources.load(demo_resource_dir())


def write_tiny_resources(directory: Path) -> Path:
    """A hand-sized resource set whose numbers are easy to tally by hand."""
    directory.mkdir(parents=True, exist_ok=True)
    files = {
        "dict.tsv": "我\t100\tpronoun-1st\n我们\t80\tpronoun-1st\n政府\t50\tnoun\n"
                    "抗议\t20\tverb\n支持\t30\tverb\n钱\t40\tnoun\n快乐\t25\tother\n"
                    "痛苦\t10\tother\n不\t90\tother\n",
        "liwc.tsv": "#cat\t1\tsocial\t-\n#cat\t2\tfamily\t1\n#cat\t3\tmoney\t-\n"
                    "#cat\t4\tposemo\t-\n#cat\t5\tnegemo\t-\n#count\t5\n"
                    "我们\t2\n政府\t1\n钱\t3\n快乐\t4\n痛苦\t5\n",
        "thesaurus.tsv": "政府\t1\n抗议\t2,3\n支持\t3\n钱\t4\n快乐\t5\n痛苦\t5,6\n我\t7\n",
        "verb_classes.tsv": "抗议\t1\n支持\t5\n",
        "char_freq.tsv": "我\t0.5\t5000\n政\t0.2\t2000\n府\t0.1\t1000\n钱\t0.05\t10\n",
        "word_freq.tsv": "我\t0.4\t4000\n政府\t0.02\t300\n抗议\t0.001\t49\n",
        "positive.txt": "快乐\n支持\n",
        "negative.txt": "痛苦\n抗议\n",
        "idioms.txt": "一言难尽\n",
        "embeddings.txt": "3 2\n我 1.0 0.0\n政府 0.0 2.0\n钱 -1.0 4.0\n",
        "negations.txt": "不\n",
    }
    for name, text in files.items():
        (directory / name).write_text(text, encoding="utf-8")
    return directory


@pytest.fixture
def tiny_resources(tmp_path) -> Resources:
    return Resources.load(write_tiny_resources(tmp_path / "res"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
