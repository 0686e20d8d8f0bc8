import pytest
from hypothesis import given, settings, strategies as st

from effalg.core import boolean, chain, mo, product
from effalg.corpus import small_algebras
from effalg.iso import is_isomorphic
from effalg.saturate import CAP_HIT, EXACT, Presentation, env_cap


def test_generator_equal_to_one():
    P = Presentation()
    g = P.generator("g")
    P.add_equal(g, P.ONE)
    r = P.saturate(cap=50)
    assert r.exact and r.algebra.size == 2
    assert r.value(g) == r.algebra.one


def test_half_gives_three_chain():
    P = Presentation()
    g = P.generator("g")
    P.add_sum(g, g, P.ONE)
    r = P.saturate(cap=50)
    assert is_isomorphic(r.algebra, chain(2))


def test_thirds_give_four_chain():
    P = Presentation()
    g = P.generator("g")
    P.add_sum_family([g, g, g], P.ONE)
    r = P.saturate(cap=50)
    assert is_isomorphic(r.algebra, chain(3))
    assert r.algebra.names[r.value(g)] == "g"


def test_two_complements_give_boolean2():
    P = Presentation()
    x, y = P.generator("x"), P.generator("y")
    P.add_sum(x, y, P.ONE)
    assert is_isomorphic(P.saturate(cap=50).algebra, boolean(2))


def test_idempotent_sum_collapses_to_zero():
    P = Presentation()
    g = P.generator("g")
    P.add_sum(g, g, g)
    r = P.saturate(cap=50)
    assert r.value(g) == r.algebra.zero
    assert r.algebra.size == 2


def test_orthogonal_unit_collapses_everything():
    P = Presentation()
    g = P.generator("g")
    z = P.generator("z")
    P.add_sum(P.ONE, P.ONE, z)
    r = P.saturate(cap=50)
    assert r.exact and r.algebra.size == 1
    assert r.value(g) == r.value(P.ZERO) == r.value(P.ONE)


def two_blocks():
    P = Presentation()
    a, b, c, d = (P.generator(s) for s in "abcd")
    P.add_sum(a, b, P.ONE)
    P.add_sum(c, d, P.ONE)
    return P


def test_two_blocks_free_is_mo2():
    assert is_isomorphic(two_blocks().saturate(cap=50).algebra, mo(2))


def test_cap_hit_and_monotonicity():
    P = Presentation()
    g = P.generator("g")
    P.add_sum_family([g] * 6, P.ONE)
    low = P.saturate(cap=1)
    assert low.status == CAP_HIT and low.algebra is None
    exact = None
    for cap in (2, 3, 5, 8, 20, 100):
        Q = Presentation()
        h = Q.generator("g")
        Q.add_sum_family([h] * 6, Q.ONE)
        r = Q.saturate(cap=cap)
        if r.exact:
            if exact is None:
                exact = r.algebra
            assert r.algebra == exact
    assert exact is not None and is_isomorphic(exact, chain(6))


def test_node_limit_is_cap_hit():
    P = Presentation()
    g = P.generator("g")
    P.add_sum_family([g] * 30, P.ONE)
    assert P.saturate(cap=1000, max_nodes=20).status == CAP_HIT


def test_env_cap(monkeypatch):
    monkeypatch.delenv("EA_CAP", raising=False)
    assert env_cap(7) == 7
    monkeypatch.setenv("EA_CAP", "12")
    assert env_cap() == 12
    for bad in ("x", "0", "-3"):
        monkeypatch.setenv("EA_CAP", bad)
        with pytest.raises(ValueError):
            env_cap()


ALGS = small_algebras(6) + [boolean(3), mo(3), product(chain(2), chain(1))]


def present(A, shuffle):
    P = Presentation()
    nodes = {}
    for x in shuffle:
        if x == A.zero:
            nodes[x] = P.ZERO
        elif x == A.one:
            nodes[x] = P.ONE
        else:
            nodes[x] = P.generator(A.names[x])
    if A.zero == A.one:
        P.add_equal(P.ZERO, P.ONE)
    for a, b, c in A.pairs:
        P.add_sum(nodes[a], nodes[b], nodes[c])
    return P, nodes


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(range(len(ALGS))), st.randoms(use_true_random=False))
def test_full_table_presentation_reproduces_algebra(i, rnd):
    A = ALGS[i]
    order = list(range(A.size))
    rnd.shuffle(order)
    P, nodes = present(A, order)
    r = P.saturate(cap=100)
    assert r.status == EXACT
    T = r.algebra
    assert T.size == A.size
    f = [r.value(nodes[x]) for x in range(A.size)]
    assert len(set(f)) == A.size
    assert all(T.add(f[a], f[b]) == f[c] for a, b, c in A.pairs)
    assert len(T.pairs) == len(A.pairs)


def test_saturation_is_deterministic():
    a = two_blocks().saturate(cap=50).algebra
    b = two_blocks().saturate(cap=50).algebra
    assert a.to_json() == b.to_json()
