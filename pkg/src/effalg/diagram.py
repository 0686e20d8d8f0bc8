"""Finite diagrams of Boolean algebras and their cocones into an effect algebra.

An object is just an arity ``n`` (standing for ``2^[n]``).  An arrow
``2^[n] -> 2^[m]`` is kept as its Stone dual ``phi: [m] -> [n]``.  A cocone
with apex C assigns to each object an observable ``2^[n] -> C`` (a
decomposition of unit) so that ``r_tgt o f = r_src`` for every arrow f.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .core import FiniteEffectAlgebra
from .observables import decompositions, restrict


@dataclass
class FiniteDiagram:
    arities: list[int]
    arrows: list[tuple[int, int, tuple[int, ...]]] = field(default_factory=list)
    labels: list = field(default_factory=list)

    def add_arrow(self, src: int, tgt: int, phi: Sequence[int]) -> None:
        if len(phi) != self.arities[tgt] or any(not 0 <= i < self.arities[src] for i in phi):
            raise ValueError("arrow does not match object arities")
        self.arrows.append((src, tgt, tuple(phi)))

    def is_cocone(self, C: FiniteEffectAlgebra, comps: Sequence[Sequence[int]]) -> bool:
        for k, r in enumerate(comps):
            if len(r) != self.arities[k] or C.sum_of(r) != C.one:
                return False
        return all(restrict(C, comps[t], phi, self.arities[s]) == tuple(comps[s])
                   for s, t, phi in self.arrows)


def enumerate_cocones(D: FiniteDiagram, C: FiniteEffectAlgebra,
                      limit: int | None = None) -> Iterator[list[tuple[int, ...]]]:
    """Every cocone over ``D`` with apex ``C``, by backtracking in increasing arity.

    Each candidate component is filtered against every arrow whose other end
    is already assigned, so the leaves are exactly the cocones.
    """
    n_obj = len(D.arities)
    order = sorted(range(n_obj), key=lambda k: (D.arities[k], k))
    pos = {k: i for i, k in enumerate(order)}
    # constraints checked when the later endpoint (in ``order``) is assigned
    checks: list[list[tuple[int, int, tuple[int, ...]]]] = [[] for _ in range(n_obj)]
    for s, t, phi in D.arrows:
        later = s if pos[s] > pos[t] else t
        checks[later].append((s, t, phi))
    comps: list[tuple[int, ...] | None] = [None] * n_obj
    count = 0

    def candidates(k):
        # an arrow into an assigned object fixes this component outright
        for s, t, phi in checks[k]:
            if s == k and t != k and comps[t] is not None:
                return (restrict(C, comps[t], phi, D.arities[s]),)
        return decompositions(C, D.arities[k])

    def ok(k):
        for s, t, phi in checks[k]:
            if restrict(C, comps[t], phi, D.arities[s]) != comps[s]:
                return False
        return True

    def rec(i):
        nonlocal count
        if i == n_obj:
            count += 1
            yield list(comps)  # type: ignore[arg-type]
            return
        k = order[i]
        for r in candidates(k):
            if len(r) != D.arities[k] or C.sum_of(r) != C.one:
                continue
            comps[k] = r
            if ok(k):
                yield from rec(i + 1)
                if limit is not None and count >= limit:
                    comps[k] = None
                    return
            comps[k] = None

    yield from rec(0)


def count_cocones(D: FiniteDiagram, C: FiniteEffectAlgebra) -> int:
    return sum(1 for _ in enumerate_cocones(D, C))
