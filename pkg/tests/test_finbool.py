import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from effalg.finbool import (
    ArityError, BoolMorphism, FinMap, all_bool_morphisms, all_finmaps, dualize, dualize_inv,
    free_product, mask_of, points_of, star_finmap, star_map,
)


def preimage(t: FinMap, X: int) -> int:
    return mask_of([j for j in range(t.dom) if X >> t.image[j] & 1])


def test_constant_map_dual():
    f = dualize(FinMap(2, 1, (0, 0)))
    assert f.to_json() == {"n": 1, "m": 2, "atom_images": [[1, 2]]}


def test_identity_and_swap():
    assert dualize(FinMap.identity(3)) == BoolMorphism.identity(3)
    f = dualize(FinMap(2, 2, (1, 0)))
    assert f.atom_images == (0b10, 0b01)


@pytest.mark.parametrize("m,n", [(a, b) for a in range(5) for b in range(5)])
def test_duality_bijection(m, n):
    maps = list(all_finmaps(m, n))
    duals = [dualize(t) for t in maps]
    assert len(set(duals)) == len(maps) == n ** m
    for t, f in zip(maps, duals):
        assert dualize_inv(f) == t
        for X in range(1 << n):
            assert f(X) == preimage(t, X)


def test_bool_morphism_counts():
    for n in range(4):
        for m in range(4):
            assert sum(1 for _ in all_bool_morphisms(n, m)) == n ** m


def test_malformed_atom_images():
    with pytest.raises(ValueError):
        BoolMorphism(2, 2, (0b01, 0b01))
    with pytest.raises(ValueError):
        BoolMorphism(2, 2, (0b01, 0b00))
    with pytest.raises(ValueError):
        FinMap(2, 1, (0, 1))
    with pytest.raises(ArityError):
        FinMap(-1, 0, ())


def test_contravariance():
    rnd = random.Random(3)
    for _ in range(200):
        a, b, c = (rnd.randint(0, 4) for _ in range(3))
        if b == 0 and a > 0 or c == 0 and b > 0:
            continue
        u = FinMap(a, b, tuple(rnd.randrange(b) for _ in range(a)))
        t = FinMap(b, c, tuple(rnd.randrange(c) for _ in range(b)))
        assert dualize(t.compose(u)) == dualize(u).compose(dualize(t))


def test_free_product_shapes():
    k, left, right = free_product(2, 3)
    assert k == 6
    k, left, right = free_product(1, 4)
    assert right == BoolMorphism.identity(4)
    k, left, right = free_product(2, 2)
    assert points_of(left.atom_images[0]) == [0, 1]
    assert points_of(right.atom_images[1]) == [1, 3]


def test_star_with_z():
    s = BoolMorphism.identity(2)
    z = BoolMorphism(2, 1, (0b1, 0b0))
    st_ = star_map(s, z)
    # atoms (i, j) flattened i*2+j, images in [2] x [1]
    assert st_.atom_images == (0b01, 0b00, 0b10, 0b00)


def test_star_identity():
    for n in range(4):
        for m in range(4):
            assert star_map(BoolMorphism.identity(n), BoolMorphism.identity(m)) == BoolMorphism.identity(n * m)


def _rand_bm(rnd, n, m):
    return dualize(FinMap(m, n, tuple(rnd.randrange(n) for _ in range(m))))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3),
       st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_star_functorial(n, n2, n3, m, m2, m3, seed):
    rnd = random.Random(seed)
    s, s2 = _rand_bm(rnd, n, n2), _rand_bm(rnd, n2, n3)
    t, t2 = _rand_bm(rnd, m, m2), _rand_bm(rnd, m2, m3)
    assert star_map(s2.compose(s), t2.compose(t)) == star_map(s2, t2).compose(star_map(s, t))


def test_star_rectangles_disjoint_and_dual():
    rnd = random.Random(5)
    for _ in range(100):
        s = _rand_bm(rnd, rnd.randint(1, 3), rnd.randint(1, 3))
        t = _rand_bm(rnd, rnd.randint(1, 3), rnd.randint(1, 3))
        st_ = star_map(s, t)
        for X in range(1 << st_.n):
            seen = 0
            for p in points_of(X):
                r = st_.atom_images[p]
                assert r & seen == 0
                seen |= r
        assert dualize(star_finmap(dualize_inv(s), dualize_inv(t))) == st_


def test_coproduct_universal_property():
    # a pair of morphisms out of 2^[n], 2^[m] into 2^[k] factors uniquely through the free product
    for n, m, k in itertools.product(range(1, 3), range(1, 3), range(1, 4)):
        size, left, right = free_product(n, m)
        out = list(all_bool_morphisms(size, k))
        for f in all_bool_morphisms(n, k):
            for g in all_bool_morphisms(m, k):
                hits = [h for h in out if h.compose(left) == f and h.compose(right) == g]
                # commuting images force the meet rule: h({(i,j)}) = f({i}) & g({j})
                meets = tuple(f.atom_images[i] & g.atom_images[j] for i in range(n) for j in range(m))
                assert [h.atom_images for h in hits] == [meets]
