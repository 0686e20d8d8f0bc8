import itertools

import pytest
from hypothesis import given, settings, strategies as st

from effalg.core import (boolean, chain, from_table, horizontal_sum, interval_vector, mo, one_element,
                         product)
from effalg.corpus import small_algebras
from effalg.iso import canonical_form, identify, is_isomorphic, isomorphism


def relabel(A, perm):
    """Copy of A with element i moved to position perm[i]."""
    n = A.size
    inv = [0] * n
    for i, p in enumerate(perm):
        inv[p] = i
    names = [A.names[inv[k]] for k in range(n)]
    table = [[-1] * n for _ in range(n)]
    for a, b, c in A.pairs:
        table[perm[a]][perm[b]] = perm[c]
    return from_table(names, perm[A.zero], perm[A.one], table)


def brute_iso(A, B):
    if A.size != B.size:
        return False
    for perm in itertools.permutations(range(B.size)):
        if perm[A.one] != B.one:
            continue
        if all(B.add(perm[a], perm[b]) == perm[c] for a, b, c in A.pairs) and len(A.pairs) == len(B.pairs):
            return True
    return False


POOL = [one_element(), boolean(1), boolean(2), chain(2), chain(3), chain(5), mo(2),
        product(chain(2), boolean(1)), product(boolean(1), boolean(1)), interval_vector([1, 2]),
        horizontal_sum(chain(2), chain(2)), boolean(3), mo(3), product(chain(1), chain(3))]


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(range(len(POOL))), st.randoms(use_true_random=False))
def test_relabelled_copy_is_isomorphic(i, rnd):
    A = POOL[i]
    perm = list(range(A.size))
    rnd.shuffle(perm)
    B = relabel(A, perm)
    f = isomorphism(A, B)
    assert f is not None
    assert all(B.add(f[a], f[b]) == f[c] for a, b, c in A.pairs)
    assert canonical_form(A) == canonical_form(B) or A.size > 8


def test_small_pairs_against_brute_force():
    algs = small_algebras(5) + [product(boolean(1), boolean(1)), product(chain(1), chain(2))]
    for A, B in itertools.combinations_with_replacement(algs, 2):
        assert is_isomorphic(A, B) == brute_iso(A, B)


def test_named_isomorphisms():
    assert is_isomorphic(product(boolean(1), boolean(1)), boolean(2))
    assert is_isomorphic(chain(1), boolean(1))
    assert is_isomorphic(product(boolean(2), boolean(1)), boolean(3))
    assert not is_isomorphic(chain(3), boolean(2))
    assert not is_isomorphic(mo(2), product(chain(2), boolean(1)))
    assert is_isomorphic(interval_vector([1, 1]), boolean(2))


@pytest.mark.parametrize("A,name", [
    (one_element(), "trivial"), (boolean(3), "boolean(3)"), (chain(4), "chain(4)"),
    (mo(2), "mo(2)"), (product(chain(2), boolean(1)), None),
])
def test_identify(A, name):
    assert identify(A) == name


def test_canonical_form_separates_classes():
    algs = small_algebras(6)
    forms = [canonical_form(A) for A in algs]
    assert len(set(forms)) == len(forms)
