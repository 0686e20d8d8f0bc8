import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from effalg.core import (
    AxiomError, FormatError, SummableFamily, boolean, chain, derive_structure, from_table,
    horizontal_sum, interval_vector, is_refinement, is_subalgebra, load, loads, make_standard,
    mo, one_element, product, save, sum_family, validate,
)
from effalg.finbool import FinMap

from conftest import naive_axiom_failures, sums_of

CONSTRUCTED = [
    one_element(), chain(1), chain(2), chain(5), boolean(0), boolean(1), boolean(2), boolean(3),
    mo(1), mo(2), mo(3), product(chain(2), boolean(1)), horizontal_sum(chain(2), boolean(2)),
    interval_vector([1, 2]), interval_vector([2, 1, 1]),
]


@pytest.mark.parametrize("A", CONSTRUCTED, ids=lambda A: A.label)
def test_constructors_pass_naive_checker(A):
    assert naive_axiom_failures(A.names, A.names[A.zero], A.names[A.one], sums_of(A)) == set()


def test_two_element_table():
    A = validate(["0", "1"], "0", "1", [["0", "0", "0"], ["0", "1", "1"]])
    assert A.size == 2 and A.atoms == (1,)


def test_three_chain_from_triples():
    A = validate(["0", "a", "1"], "0", "1",
                 [["0", "0", "0"], ["0", "a", "a"], ["0", "1", "1"], ["a", "a", "1"]])
    a = A.index("a")
    assert A.perp(a) == a
    assert A.diff(A.one, a) == a


def test_two_orthosupplements_reports_e3():
    triples = [["0", x, x] for x in ("0", "a", "b", "1")] + [["a", "a", "1"], ["b", "b", "1"], ["a", "b", "1"]]
    with pytest.raises(AxiomError) as exc:
        validate(["0", "a", "b", "1"], "0", "1", triples)
    e3 = [v for v in exc.value.violations if v.axiom == "E3"]
    assert any(v.witness[0] == "a" for v in e3)


def test_symmetrisation_and_conflict():
    tr = [["0", x, x] for x in ("0", "a", "1")] + [["a", "a", "1"]]
    A = validate(["0", "a", "1"], "0", "1", tr)
    assert A.add(A.index("a"), A.index("0")) == A.index("a")
    bad = tr + [["a", "0", "1"]]
    with pytest.raises(AxiomError) as exc:
        validate(["0", "a", "1"], "0", "1", bad)
    assert any(v.axiom == "E1" for v in exc.value.violations)


@pytest.mark.parametrize("text, fragment", [
    ("{not json", "line 1"),
    ('{"elements": ["0"], "zero": "0", "one": "0"}', "missing"),
    ('{"elements": ["0", "0"], "zero": "0", "one": "0", "sum": []}', "duplicate"),
    ('{"elements": ["0"], "zero": "0", "one": "0", "sum": [["0", "0", "q"]]}', "unknown"),
    ('{"elements": ["0"], "zero": "z", "one": "0", "sum": []}', "not listed"),
])
def test_format_errors(text, fragment):
    with pytest.raises(FormatError, match=fragment):
        loads(text)


def test_derived_structure_boolean1():
    d = derive_structure(boolean(1))
    assert d.leq == {("{}", "{}"), ("{}", "{1}"), ("{1}", "{1}")}
    assert d.perp["{}"] == "{1}"


def test_orth_in_boolean2():
    d = derive_structure(boolean(2))
    assert ("{1}", "{2}") in d.orth
    assert ("{1}", "{1}") not in d.orth


def test_sum_family_examples():
    B = boolean(2)
    assert sum_family(B, [1, 2]) == 3
    assert sum_family(B, []) == B.zero
    C = chain(2)
    assert sum_family(C, [1, 1, 1]) is None


@pytest.mark.parametrize("A", [boolean(3), chain(4), mo(2), interval_vector([1, 2])], ids=lambda A: A.label)
def test_sum_family_order_independent(A):
    rnd = random.Random(1)
    for _ in range(300):
        k = rnd.randint(0, 5)
        items = [rnd.randrange(A.size) for _ in range(k)]
        ref = sum_family(A, items)
        for perm in itertools.permutations(items):
            assert sum_family(A, perm) == ref


def test_refinement_examples():
    B = boolean(2)
    coarse = SummableFamily(B, (3,))
    fine = SummableFamily(B, (1, 2))
    assert is_refinement(fine, coarse, FinMap(2, 1, (0, 0)))
    assert is_refinement(fine, fine, (0, 1))
    assert not is_refinement(SummableFamily(B, (2, 1)), fine, (0, 1))
    with pytest.raises(ValueError):
        is_refinement(fine, coarse, (0,))


def test_standard_sizes():
    assert boolean(2).size == 4 and len(boolean(2).atoms) == 2
    assert chain(1).table == boolean(1).table
    assert mo(2).size == 6
    assert make_standard("mo", 3).size == 8
    with pytest.raises(ValueError):
        make_standard("nope")
    with pytest.raises(ValueError):
        mo(0)
    with pytest.raises(ValueError):
        chain(-1)
    with pytest.raises(ValueError):
        interval_vector([])


def test_mo2_two_part_decompositions():
    A = mo(2)
    pairs = {frozenset((a, b)) for a, b, c in A.pairs if c == A.one and A.zero not in (a, b)}
    assert len(pairs) == 2


def test_subalgebra_examples():
    A = mo(2)
    assert is_subalgebra(A, {A.zero, A.one})
    assert is_subalgebra(A, {A.zero, A.index("x1"), A.index("x1'"), A.one})
    C = chain(2)
    assert not is_subalgebra(C, {C.zero, 1})


@pytest.mark.parametrize("A", CONSTRUCTED, ids=lambda A: A.label)
def test_derived_laws(A):
    n = A.size
    for a in range(n):
        assert A.perp(A.perp(a)) == a
        for b in range(n):
            assert A.orth(a, b) == A.leq(a, A.perp(b)) == A.leq(b, A.perp(a))
            for c in range(n):
                if A.add(a, b) is not None and A.add(a, b) == A.add(a, c):
                    assert b == c


def test_large_constructors_validate():
    for n in range(7):
        boolean(n)
    for n in range(13):
        chain(n)


@pytest.mark.parametrize("A", [boolean(2), chain(3)], ids=["b2", "c3"])
@pytest.mark.parametrize("mirror", [False, True])
def test_every_defined_entry_flip_is_caught(A, mirror):
    n = A.size
    names = A.names
    for a, b, c in A.pairs:
        for other in range(n):
            if other == c:
                continue
            t = [list(r) for r in A.table]
            t[a][b] = other
            if mirror:
                t[b][a] = other
            with pytest.raises(AxiomError):
                from_table(names, A.zero, A.one, t)
            s = {(names[x], names[y]): names[t[x][y]] for x in range(n) for y in range(n) if t[x][y] >= 0}
            assert naive_axiom_failures(names, names[A.zero], names[A.one], s)


def test_symmetric_edits_that_stay_valid_swap_b2_and_c3():
    # making or unmaking a+a on the diagonal turns 2^[2] into the 4-chain and back
    from effalg.iso import is_isomorphic
    survivors = []
    for A in (boolean(2), chain(3)):
        n = A.size
        for a in range(n):
            for b in range(a, n):
                for v in range(-1, n):
                    if v == A.table[a][b]:
                        continue
                    t = [list(r) for r in A.table]
                    t[a][b] = t[b][a] = v
                    try:
                        survivors.append((A, from_table(A.names, A.zero, A.one, t)))
                    except AxiomError:
                        pass
    assert len(survivors) == 3
    for A, B in survivors:
        other = chain(3) if A.label == "boolean(2)" else boolean(2)
        assert is_isomorphic(B, other)


def test_save_load_roundtrip(tmp_path):
    for A in CONSTRUCTED:
        p = tmp_path / "a.json"
        save(A, p)
        B = load(p)
        assert B == A
        assert json.loads(p.read_text())["zero"] == A.names[A.zero]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=3))
def test_interval_vector_is_product_of_chains(u):
    A = interval_vector(u)
    B = chain(u[0])
    for x in u[1:]:
        B = product(B, chain(x))
    assert A.size == B.size
    assert sorted(map(len, (A.below(x) for x in range(A.size)))) == \
        sorted(map(len, (B.below(x) for x in range(B.size))))
