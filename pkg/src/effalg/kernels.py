"""Kernel dispatch: the compiled ``_ext`` module when importable, else ``_pykernels``.

Set ``EA_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_ext = None
if os.environ.get("EA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ext  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        _ext = None


def assoc_violations(table, limit: int = 1000, backend: str | None = None):
    """Triples (a, b, c) on which associativity (E2) fails."""
    if (backend or BACKEND) == "compiled" and _ext is not None:
        arr = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
        return _ext.assoc_violations(arr, limit)
    return _pykernels.assoc_violations(table, limit)


class _CompiledUnionFind:
    def __init__(self, n: int):
        self.n = n
        self.parent = np.arange(n, dtype=np.int64)

    def union_arrays(self, left, right) -> None:
        left = np.ascontiguousarray(np.asarray(left, dtype=np.int64).ravel())
        right = np.ascontiguousarray(np.asarray(right, dtype=np.int64).ravel())
        _ext.uf_union(self.parent, left, right)

    def labels(self) -> np.ndarray:
        return _ext.uf_labels(self.parent)


def union_find(n: int, backend: str | None = None):
    """A union-find over ``range(n)`` whose ``labels()`` gives each component's minimum."""
    if (backend or BACKEND) == "compiled" and _ext is not None:
        return _CompiledUnionFind(n)
    return _pykernels.UnionFind(n)
