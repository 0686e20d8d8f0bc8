"""Reference implementations of the hot kernels (pure Python + numpy)."""
from __future__ import annotations

import numpy as np


def assoc_violations(table, limit: int = 1000) -> list[tuple[int, int, int]]:
    # only triples whose premise holds can fail, so walk the defined entries
    n = len(table)
    rows = [[(b, c) for b, c in enumerate(r) if c >= 0] for r in table]
    out = []
    for a in range(n):
        ta = table[a]
        for b, d in rows[a]:
            tb = table[b]
            for c, e in rows[d]:
                f = tb[c]
                if f < 0 or ta[f] != e:
                    out.append((a, b, c))
                    if len(out) >= limit:
                        return out
    return out


class UnionFind:
    """Edge-accumulating union-find; ``labels`` resolves by min-label propagation."""

    def __init__(self, n: int):
        self.n = n
        self._left: list[np.ndarray] = []
        self._right: list[np.ndarray] = []

    def union_arrays(self, left, right) -> None:
        self._left.append(np.asarray(left, dtype=np.int64).ravel())
        self._right.append(np.asarray(right, dtype=np.int64).ravel())

    def labels(self) -> np.ndarray:
        lab = np.arange(self.n, dtype=np.int64)
        if not self._left:
            return lab
        L = np.concatenate(self._left)
        R = np.concatenate(self._right)
        while True:
            m = np.minimum(lab[L], lab[R])
            new = lab.copy()
            np.minimum.at(new, L, m)
            np.minimum.at(new, R, m)
            while True:
                jumped = new[new]
                if np.array_equal(jumped, new):
                    break
                new = jumped
            if np.array_equal(new, lab):
                return lab
            lab = new
