import itertools
import json

import pytest

from effalg.core import boolean, chain, load, loads, one_element, product, save, validate
from effalg.corpus import algebras_of_size, corpus, load_golden, named_algebras, small_algebras
from effalg.iso import is_isomorphic
from effalg.observables import decompositions
from effalg.props import property_report

from conftest import naive_axiom_failures


def brute_models(n):
    """All effect algebras on {0..n-1} with 0 bottom and n-1 top, by filtering every candidate table."""
    if n == 1:
        return [{(0, 0): 0}]
    top = n - 1
    mid = list(range(1, top))
    pairs = list(itertools.combinations_with_replacement(mid, 2))
    found = []
    for vals in itertools.product([None] + list(range(1, n)), repeat=len(pairs)):
        s = {}
        for x in range(n):
            s[0, x] = s[x, 0] = x
        for (a, b), v in zip(pairs, vals):
            if v is not None:
                s[a, b] = s[b, a] = v
        if not naive_axiom_failures(range(n), 0, top, s):
            found.append(s)
    return found


def brute_iso_classes(models, n):
    reps = []
    for s in models:
        if not any(_brute_iso(s, r, n) for r in reps):
            reps.append(s)
    return reps


def _brute_iso(s, r, n):
    if len(s) != len(r):
        return False
    for perm in itertools.permutations(range(n)):
        if all(r.get((perm[a], perm[b])) == perm[c] for (a, b), c in s.items()):
            return True
    return False


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_model_finder_matches_brute_force(n):
    reps = brute_iso_classes(brute_models(n), n)
    found = algebras_of_size(n)
    assert len(found) == len(reps)
    mine = [validate(list(map(str, range(n))), "0", str(n - 1),
                     [[str(a), str(b), str(c)] for (a, b), c in s.items()]) for s in reps]
    for A in found:
        assert sum(is_isomorphic(A, B) for B in mine) == 1


def test_golden_counts_recorded(corpus_dir):
    golden = load_golden(corpus_dir / "golden.json")
    assert golden["iso_class_counts"] == {"1": 1, "2": 1, "3": 1, "4": 3, "5": 4, "6": 10}
    assert {str(n): len(algebras_of_size(n)) for n in range(1, 7)} == golden["iso_class_counts"]


def test_golden_regression(corpus_dir):
    entries = corpus(load_golden(corpus_dir / "golden.json"))
    assert all(e.expected is not None for e in entries)
    for e in entries:
        assert e.compute() == e.expected, e.name


def test_boolean2_observable_counts(corpus_dir):
    golden = load_golden(corpus_dir / "golden.json")
    B2 = boolean(2)
    # ordered decompositions of the unit into n parts: each atom picks one slot
    assert [len(decompositions(B2, n)) for n in (1, 2, 3)] == [1, 4, 9]
    assert golden["entries"]["b2"]["observables"] == [1, 4, 9]


def test_shipped_files_round_trip(corpus_dir, tmp_path):
    names = {nm for nm, _, _ in named_algebras()} | {A.label for A in small_algebras(5)}
    for nm in sorted(names):
        path = corpus_dir / f"{nm}.json"
        A = load(path)
        B = loads(A.to_json())
        assert B == A and B.to_json() == A.to_json()
        save(A, tmp_path / "x.json")
        assert load(tmp_path / "x.json") == A
        assert json.loads(path.read_text(encoding="utf-8")) == json.loads(A.to_json())


def test_shipped_files_match_constructors(corpus_dir):
    for nm, _, A in named_algebras():
        assert load(corpus_dir / f"{nm}.json").table == A.table


def test_closed_under_small_constructors():
    members = small_algebras(5)
    for A in (product(boolean(1), boolean(1)), boolean(2), chain(4), product(chain(1), chain(1))):
        assert any(is_isomorphic(A, M) for M in members)


def test_trivial_algebra_flags():
    rep = property_report(one_element())
    assert rep.flags() == {"boolean": True, "orthoalgebra": True, "rdp": True}


def test_names_unique():
    names = [e.name for e in corpus()]
    assert len(names) == len(set(names))
