import itertools

import pytest

from effalg.core import boolean, chain, mo, one_element
from effalg.corpus import small_algebras
from effalg.iso import is_isomorphic
from effalg.presheaf import (
    TruncatedPresheaf, _Blocks, colimit_L, copower_check, day_convolution, generating_maps, lr_check,
    restrict_representation,
)
from effalg.tensor import tensor


def test_representation_sizes():
    assert restrict_representation(boolean(1), 3).sizes() == [1, 2, 3]
    assert restrict_representation(chain(2), 3).sizes() == [1, 3, 6]
    with pytest.raises(ValueError):
        restrict_representation(boolean(1), 0)


@pytest.mark.parametrize("A", [boolean(2), chain(2), mo(2), chain(3)], ids=lambda A: A.label)
def test_representation_functorial(A):
    P = restrict_representation(A, 3)
    ok, info = P.check_functorial()
    assert ok, info
    for n in range(1, 4):
        assert P.act(n, n, tuple(range(n)), 0) == 0


def test_broken_presheaf_detected():
    P = restrict_representation(boolean(1), 2)
    key = (2, 2, (1, 0))
    P.restrictions[key] = tuple(reversed(P.restrictions[key]))
    P.restrictions[2, 2, (0, 1)] = (1, 0)
    ok, info = P.check_functorial()
    assert not ok and info["law"] == "identity"


def test_single_token_presheaf():
    P = TruncatedPresheaf(1, {1: ["g"]}, {(1, 1, (0,)): (0,)})
    res = colimit_L(P)
    assert res.exact and res.algebra.size == 2


@pytest.mark.parametrize("A", small_algebras(4) + [boolean(2), mo(2), chain(3)], ids=lambda A: A.label)
def test_reflection_and_truncation_stability(A):
    L3 = colimit_L(restrict_representation(A, 3))
    L4 = colimit_L(restrict_representation(A, 4))
    assert L3.exact and L4.exact
    assert is_isomorphic(L3.algebra, A)
    assert is_isomorphic(L4.algebra, L3.algebra)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_generating_maps_generate_everything(N):
    gens = generating_maps(N)
    # closure of identities under precomposition with generators, per (dom, cod)
    reached = {(n, n, tuple(range(n))) for n in range(1, N + 1)}
    frontier = list(reached)
    while frontier:
        nxt = []
        for (a, b, f) in frontier:
            for (ga, gb, g) in gens:
                if gb != a:
                    continue
                h = (ga, b, tuple(f[g[x]] for x in range(ga)))
                if h not in reached:
                    reached.add(h)
                    nxt.append(h)
        frontier = nxt
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            for img in itertools.product(range(b), repeat=a):
                assert (a, b, img) in reached


def naive_day_reps(X, Y, N):
    """Coend quotient using every map [n2] -> [n], not just generators."""
    nx = {n: len(X.values[n]) for n in range(1, N + 1)}
    ny = {m: len(Y.values[m]) for m in range(1, N + 1)}
    out = {}
    for c in range(1, N + 1):
        B = _Blocks(c, N, nx, ny)
        parent = list(range(B.total))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        def code(t):
            return sum(v * c ** k for k, v in enumerate(t))

        for n, m, n2 in itertools.product(range(1, N + 1), repeat=3):
            for t in itertools.product(range(c), repeat=n * m):
                for sigma in itertools.product(range(n), repeat=n2):
                    t2 = tuple(t[sigma[j] * m + l] for j in range(n2) for l in range(m))
                    Xs = X.restrictions[n, n2, sigma]
                    for x2 in range(nx[n2]):
                        for y in range(ny[m]):
                            union(B.index(n, m, code(t), Xs[x2], y), B.index(n2, m, code(t2), x2, y))
                m2 = n2
                for sigma in itertools.product(range(m), repeat=m2):
                    t2 = tuple(t[j * m + sigma[l]] for j in range(n) for l in range(m2))
                    Ys = Y.restrictions[m, m2, sigma]
                    for x in range(nx[n]):
                        for y2 in range(ny[m2]):
                            union(B.index(n, m, code(t), x, Ys[y2]), B.index(n, m2, code(t2), x, y2))
        out[c] = sorted({find(x) for x in range(B.total)})
    return out


@pytest.mark.parametrize("A,B", [(boolean(1), chain(2)), (boolean(2), boolean(1)), (chain(2), chain(2))],
                         ids=["b1c2", "b2b1", "c2c2"])
def test_day_generators_match_all_maps(A, B):
    X, Y = restrict_representation(A, 2), restrict_representation(B, 2)
    day = day_convolution(X, Y, 2)
    naive = naive_day_reps(X, Y, 2)
    for c in (1, 2):
        assert day.presheaf.values[c] == naive[c]


def test_day_order_and_backend_independent():
    X, Y = restrict_representation(boolean(2), 3), restrict_representation(chain(2), 3)
    a = day_convolution(X, Y)
    b = day_convolution(X, Y, reverse=True)
    c = day_convolution(X, Y, backend="python")
    for other in (b, c):
        assert other.presheaf.values == a.presheaf.values
        assert other.presheaf.restrictions == a.presheaf.restrictions
    ok, info = a.presheaf.check_functorial()
    assert ok, info


@pytest.mark.parametrize("A,B", [(boolean(1), boolean(1)), (chain(2), boolean(1)), (one_element(), boolean(2))],
                         ids=["b1b1", "c2b1", "trivial-b2"])
def test_day_reflects_to_tensor(A, B):
    X, Y = restrict_representation(A, 3), restrict_representation(B, 3)
    L = colimit_L(day_convolution(X, Y).presheaf)
    assert L.exact
    assert is_isomorphic(L.algebra, tensor(A, B).algebra)
    assert copower_check(X, Y, A, B, 3)


def test_day_bound_error():
    X = restrict_representation(boolean(1), 2)
    with pytest.raises(ValueError):
        day_convolution(X, X, 3)


@pytest.mark.parametrize("A", [boolean(1), chain(2), mo(2)], ids=lambda A: A.label)
def test_lr_check_small_targets(A):
    v = lr_check(A, 3, targets=small_algebras(4) + [chain(2)])
    assert v.ok and v.iso and v.cocones > 0


def test_lr_check_needs_arity_three():
    with pytest.raises(ValueError):
        lr_check(boolean(1), 2)
