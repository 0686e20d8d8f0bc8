import itertools

import pytest

from effalg.core import boolean, chain, mo
from effalg.diagram import FiniteDiagram, count_cocones, enumerate_cocones
from effalg.presheaf import elements_diagram
from effalg.tensor import enumerate_homs


def brute_cocones(D, C):
    choices = [[p for p in itertools.product(range(C.size), repeat=n) if C.sum_of(p) == C.one]
               for n in D.arities]
    return [list(c) for c in itertools.product(*choices) if D.is_cocone(C, list(c))]


def test_single_object():
    D = FiniteDiagram([2])
    assert count_cocones(D, chain(2)) == 3


def test_parallel_pair():
    D = FiniteDiagram([1, 2])
    D.add_arrow(0, 1, (0, 0))
    D.add_arrow(1, 1, (1, 0))  # swap on the arity-2 object
    for C in (boolean(2), chain(2), mo(2)):
        got = sorted(map(tuple, enumerate_cocones(D, C)))
        assert got == sorted(map(tuple, brute_cocones(D, C)))
        assert all(c[1][0] == c[1][1] for c in got)


def test_bad_arrow():
    D = FiniteDiagram([1, 2])
    with pytest.raises(ValueError):
        D.add_arrow(0, 1, (0,))
    with pytest.raises(ValueError):
        D.add_arrow(0, 1, (0, 1))


def test_limit():
    D = FiniteDiagram([2, 2])
    assert len(list(enumerate_cocones(D, boolean(2), limit=3))) == 3


@pytest.mark.parametrize("A", [boolean(1), chain(2), boolean(2)], ids=lambda A: A.label)
def test_elements_diagram_cocones_are_homs(A):
    D, objs = elements_diagram(A, 2)
    for C in (boolean(1), chain(2), boolean(2)):
        assert count_cocones(D, C) == len(brute_cocones(D, C))
    D3, _ = elements_diagram(A, 3)
    for C in (boolean(1), chain(2), boolean(2)):
        assert count_cocones(D3, C) == sum(1 for _ in enumerate_homs(A, C))
