"""Isomorphisms between finite effect algebras.

A morphism out of a finite effect algebra is fixed by its values on atoms,
since every element is a finite sum of atoms, so the search backtracks over
atom bijections and verifies the induced element map.
"""
from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache

from .core import FiniteEffectAlgebra, boolean, chain, mo, one_element


def _isotropic_index(A: FiniteEffectAlgebra, a: int) -> int:
    k, acc = 1, a
    while True:
        nxt = A.add(acc, a)
        if nxt is None or k > A.size:
            return k
        acc, k = nxt, k + 1


@lru_cache(maxsize=None)
def _atom_sigs(A: FiniteEffectAlgebra) -> dict[int, tuple]:
    ups = Counter()
    for (b, a) in A._diff:
        ups[a] += 1
    sig = {}
    for a in A.atoms:
        orth = sum(1 for b in A.atoms if A.orth(a, b))
        sig[a] = (_isotropic_index(A, a), orth, ups[a], A.rank[A.perp(a)])
    return sig


@lru_cache(maxsize=None)
def invariants(A: FiniteEffectAlgebra) -> tuple:
    return (A.size, len(A.pairs), len(A.atoms), tuple(sorted(Counter(A.rank).items())),
            tuple(sorted(Counter(_atom_sigs(A).values()).items())))


def _pair_sig(A, a, b):
    s = A.add(a, b)
    return None if s is None else A.rank[s]


def _extend(A: FiniteEffectAlgebra, B: FiniteEffectAlgebra, amap: dict[int, int]) -> list[int] | None:
    f = []
    for x in range(A.size):
        v = B.sum_of(amap[a] for a in A.atom_decomposition[x])
        if v is None:
            return None
        f.append(v)
    if len(set(f)) != A.size:
        return None
    tb = B.table
    if f[A.one] != B.one:
        return None
    for a, b, c in A.pairs:
        if tb[f[a]][f[b]] != f[c]:
            return None
    return f


def isomorphism(A: FiniteEffectAlgebra, B: FiniteEffectAlgebra) -> list[int] | None:
    """An element bijection A -> B preserving and reflecting +, or ``None``."""
    if invariants(A) != invariants(B):
        return None
    if A.size == 1:
        return [0]
    sa, sb = _atom_sigs(A), _atom_sigs(B)
    # most constrained first: rarest signature classes lead
    atoms = sorted(A.atoms, key=lambda a: (sum(1 for b in A.atoms if sa[b] == sa[a]), a))
    amap: dict[int, int] = {}
    used: set[int] = set()

    def rec(k):
        if k == len(atoms):
            return _extend(A, B, amap)
        a = atoms[k]
        for b in B.atoms:
            if b in used or sb[b] != sa[a]:
                continue
            if any(_pair_sig(A, a, x) != _pair_sig(B, b, amap[x]) for x in atoms[:k]):
                continue
            amap[a] = b
            used.add(b)
            res = rec(k + 1)
            if res is not None:
                return res
            del amap[a]
            used.discard(b)
        return None

    return rec(0)


def is_isomorphic(A: FiniteEffectAlgebra, B: FiniteEffectAlgebra) -> bool:
    return isomorphism(A, B) is not None


def canonical_form(A: FiniteEffectAlgebra) -> tuple:
    """Lexicographically least sum table over orderings with 0 first and 1 last.

    Factorial in the number of elements; meant for the small-model finder.
    """
    n = A.size
    if n == 1:
        return (1,)
    mids = [x for x in range(n) if x not in (A.zero, A.one)]
    best = None
    for perm in itertools.permutations(mids):
        order = (A.zero,) + perm + (A.one,)
        pos = {x: i for i, x in enumerate(order)}
        tbl = tuple(pos[A.table[a][b]] if A.table[a][b] >= 0 else -1 for a in order for b in order)
        if best is None or tbl < best:
            best = tbl
    return (n,) + best


def identify(A: FiniteEffectAlgebra) -> str | None:
    """Name of a standard algebra isomorphic to A, if one of the usual families matches."""
    n = A.size
    if n == 1:
        return "trivial"
    cands = []
    k = n.bit_length() - 1
    if 1 << k == n and k <= 12:
        cands.append(("boolean", k))
    cands.append(("chain", n - 1))
    if n % 2 == 0 and n >= 4:
        cands.append(("mo", (n - 2) // 2))
    makers = {"boolean": boolean, "chain": chain, "mo": mo, "trivial": one_element}
    for kind, p in cands:
        B = makers[kind](p)
        if is_isomorphic(A, B):
            return f"{kind}({p})"
    return None
