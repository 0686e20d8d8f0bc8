# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see _pykernels for the reference versions."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def assoc_violations(const int[:, ::1] table, Py_ssize_t limit=1000):
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t a, b, c
    cdef int d, e, f
    out = []
    for a in range(n):
        for b in range(n):
            d = table[a, b]
            if d < 0:
                continue
            for c in range(n):
                e = table[d, c]
                if e < 0:
                    continue
                f = table[b, c]
                if f < 0 or table[a, f] != e:
                    out.append((a, b, c))
                    if len(out) >= limit:
                        return out
    return out


cdef inline cnp.int64_t _find(cnp.int64_t[::1] parent, cnp.int64_t x) noexcept nogil:
    cdef cnp.int64_t root = x, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def uf_union(cnp.int64_t[::1] parent, const cnp.int64_t[::1] left, const cnp.int64_t[::1] right):
    cdef Py_ssize_t k, m = left.shape[0]
    cdef cnp.int64_t ra, rb
    with nogil:
        for k in range(m):
            ra = _find(parent, left[k])
            rb = _find(parent, right[k])
            if ra < rb:
                parent[rb] = ra
            elif rb < ra:
                parent[ra] = rb


def uf_labels(cnp.int64_t[::1] parent):
    # roots are always the minimum index of their component
    cdef Py_ssize_t i, n = parent.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _find(parent, i)
    return out
