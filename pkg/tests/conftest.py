import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from banglatc.corpus import generate_synthetic_corpus
from banglatc.features import Dataset, SparseVector, Vocabulary


def dense_dataset(X, labels, categories=None):
    """Dataset over raw feature rows, bypassing text and TF-IDF."""
    X = np.asarray(X, dtype=float)
    n, dim = X.shape
    vectors = tuple(SparseVector.from_dict({j: v for j, v in enumerate(row) if v != 0}) for row in X)
    m = max(labels) + 1
    vocab = Vocabulary(tuple(f"f{j:04d}" for j in range(dim)), (n,) * dim, n)
    return Dataset(
        vectors,
        tuple(int(y) for y in labels),
        tuple(frozenset(v.indices) for v in vectors),
        vocab,
        tuple(categories or (f"c{i}" for i in range(m))),
    )


def write_tree(root, layout):
    """layout: {category: {filename: text}}."""
    for cat, files in layout.items():
        (root / cat).mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (root / cat / name).write_text(text, encoding="utf-8")
    return root


@pytest.fixture(scope="session")
def synthetic():
    return generate_synthetic_corpus(7, 5, 200)


@pytest.fixture
def toy_corpus_dir(tmp_path):
    return write_tree(tmp_path / "corpus", {
        "খেলা": {f"{i}.txt": f"ক্রিকেট ফুটবল মাঠ খেলোয়াড় {i}" for i in range(6)},
        "শিক্ষা": {f"{i}.txt": f"বিদ্যালয় পরীক্ষা ছাত্র শিক্ষক {i}" for i in range(6)},
    })


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
