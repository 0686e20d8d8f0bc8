import itertools
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = ROOT / "corpus"


def naive_axiom_failures(elements, zero, one, sums):
    """Independent E1-E4 checker on a dict {(x, y): z}; returns the set of failing axiom tags."""
    bad = set()
    s = dict(sums)
    for (x, y), z in s.items():
        if (y, x) in s and s[(y, x)] != z:
            bad.add("E1")
        if (y, x) not in s:
            bad.add("E1")
    for a, b, c in itertools.product(elements, repeat=3):
        ab = s.get((a, b))
        if ab is None or (ab, c) not in s:
            continue
        bc = s.get((b, c))
        if bc is None or s.get((a, bc)) != s[(ab, c)]:
            bad.add("E2")
    for a in elements:
        if sum(1 for b in elements if s.get((a, b)) == one) != 1:
            bad.add("E3")
        if (a, one) in s and a != zero:
            bad.add("E4")
    return bad


def sums_of(A):
    return {(A.names[a], A.names[b]): A.names[c] for a, b, c in A.pairs}


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS_DIR
