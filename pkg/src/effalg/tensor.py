"""Bimorphisms and the tensor product of finite effect algebras."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import FiniteEffectAlgebra, boolean
from .diagram import FiniteDiagram, count_cocones, enumerate_cocones
from .finbool import FinMap, star_finmap
from .observables import ElementsCategory, decompositions
from .props import Check
from .saturate import EXACT, Presentation, SaturationResult

Table = list[list[int]]


def is_bimorphism(h: Sequence[Sequence[int]], A: FiniteEffectAlgebra, B: FiniteEffectAlgebra,
                  C: FiniteEffectAlgebra) -> Check:
    if h[A.one][B.one] != C.one:
        return Check(False, {"clause": "unitality",
                             "args": [A.names[A.one], B.names[B.one]],
                             "value": C.names[h[A.one][B.one]]})
    tc = C.table
    for a1, a2, a in A.pairs:
        if a1 > a2:
            continue
        for b in range(B.size):
            if tc[h[a1][b]][h[a2][b]] != h[a][b]:
                return Check(False, {"clause": "left-additivity",
                                     "args": [A.names[a1], A.names[a2], B.names[b]]})
    for b1, b2, b in B.pairs:
        if b1 > b2:
            continue
        for a in range(A.size):
            if tc[h[a][b1]][h[a][b2]] != h[a][b]:
                return Check(False, {"clause": "right-additivity",
                                     "args": [A.names[a], B.names[b1], B.names[b2]]})
    return Check(True)


def _unit_decompositions(A: FiniteEffectAlgebra) -> list[tuple[int, ...]]:
    """Atom decompositions of one that together mention every atom."""
    out = []
    for a in A.atoms:
        d = tuple(sorted((a,) + A.atom_decomposition[A.perp(a)]))
        if d not in out:
            out.append(d)
    if not A.atoms and A.size > 1:  # pragma: no cover - finite algebras are atomic
        raise AssertionError("non-trivial algebra without atoms")
    return out


def enumerate_bimorphisms(A: FiniteEffectAlgebra, B: FiniteEffectAlgebra, C: FiniteEffectAlgebra,
                          guard: int = 50_000_000) -> Iterator[Table]:
    """All bimorphisms ``A x B -> C`` as ``|A| x |B|`` index tables.

    A bimorphism is additive in each variable, hence fixed by its values on
    pairs of atoms.  Those values are chosen by backtracking; each pair of
    atom decompositions of one yields a family of cells that must sum to one,
    which prunes partial assignments.
    """
    if A.size == 1 or B.size == 1:
        # h(0, b) = 0 and h(1, b) = h(0, b) force 0 = 1 in C
        if C.size == 1:
            yield [[0] * B.size for _ in range(A.size)]
        return
    at_a, at_b = A.atoms, B.atoms
    cells = [(i, j) for i in range(len(at_a)) for j in range(len(at_b))]
    ia = {a: i for i, a in enumerate(at_a)}
    ib = {b: j for j, b in enumerate(at_b)}
    cons = []
    for da in _unit_decompositions(A):
        for db in _unit_decompositions(B):
            cons.append([ia[a] * len(at_b) + ib[b] for a in da for b in db])
    cell_cons: list[list[int]] = [[] for _ in cells]
    last_cell = [max(c) for c in cons]
    for k, c in enumerate(cons):
        for x in set(c):
            cell_cons[x].append(k)
    mult = [{x: c.count(x) for x in set(c)} for c in cons]
    if len(C.names) ** len(cells) > guard and not cons:  # pragma: no cover
        raise ValueError("bimorphism search space exceeds the guard")
    vals = [0] * len(cells)
    tc = C.table
    dec_a, dec_b = A.atom_decomposition, B.atom_decomposition

    def partial_ok(x):
        for k in cell_cons[x]:
            acc = C.zero
            for y, m in mult[k].items():
                if y > x:
                    continue
                for _ in range(m):
                    acc = tc[acc][vals[y]]
                    if acc < 0:
                        return False
            if last_cell[k] == x and acc != C.one:
                return False
        return True

    def build():
        h = [[0] * B.size for _ in range(A.size)]
        nb = len(at_b)
        for a in range(A.size):
            for b in range(B.size):
                acc = C.zero
                for x in dec_a[a]:
                    for y in dec_b[b]:
                        acc = tc[acc][vals[ia[x] * nb + ib[y]]]
                        if acc < 0:
                            return None
                h[a][b] = acc
        return h

    def rec(x):
        if x == len(cells):
            h = build()
            if h is not None and is_bimorphism(h, A, B, C):
                yield h
            return
        for v in range(C.size):
            vals[x] = v
            if partial_ok(x):
                yield from rec(x + 1)

    yield from rec(0)


def count_bimorphisms(A, B, C) -> int:
    return sum(1 for _ in enumerate_bimorphisms(A, B, C))


def enumerate_homs(A: FiniteEffectAlgebra, C: FiniteEffectAlgebra) -> Iterator[list[int]]:
    """Effect-algebra morphisms A -> C, via bimorphisms ``A x 2^[1] -> C``."""
    B = boolean(1)
    for h in enumerate_bimorphisms(A, B, C):
        yield [h[a][B.one] for a in range(A.size)]


# ---------------------------------------------------------------------------
# the free-product diagram and bimorphism/cocone translation
# ---------------------------------------------------------------------------

@dataclass
class FreeProductDiagram:
    """``D_{A,B}`` truncated to observables of arity ``<= bound`` on each side."""
    A: FiniteEffectAlgebra
    B: FiniteEffectAlgebra
    bound: int
    diagram: FiniteDiagram = field(init=False)
    pairs: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(init=False)

    def __post_init__(self):
        ca, cb = ElementsCategory(self.A, self.bound), ElementsCategory(self.B, self.bound)
        oa = [k for k, g in enumerate(ca.objects) if g]
        ob = [k for k, g in enumerate(cb.objects) if g]
        self.pairs = []
        index = {}
        for ka in oa:
            for kb in ob:
                index[ka, kb] = len(self.pairs)
                self.pairs.append((ca.objects[ka], cb.objects[kb]))
        self.diagram = FiniteDiagram([len(x) * len(y) for x, y in self.pairs], labels=self.pairs)
        for ka in oa:
            outs_a = [(t, phi) for t, phi in ca.out_arrows(ka) if ca.objects[t]]
            for kb in ob:
                outs_b = [(t, phi) for t, phi in cb.out_arrows(kb) if cb.objects[t]]
                na, nb = len(ca.objects[ka]), len(cb.objects[kb])
                src = index[ka, kb]
                for ta, pa in outs_a:
                    fa = FinMap(len(pa), na, pa)
                    for tb, pb in outs_b:
                        star = star_finmap(fa, FinMap(len(pb), nb, pb))
                        self.diagram.add_arrow(src, index[ta, tb], star.image)
        self.index = {p: k for k, p in enumerate(self.pairs)}


def cocone_of_bimorphism(h: Sequence[Sequence[int]], D: FreeProductDiagram) -> list[tuple[int, ...]]:
    """``v_{gA,gB}({(i,j)}) = h(gA({i}), gB({j}))``."""
    return [tuple(h[a][b] for a in ga for b in gb) for ga, gb in D.pairs]


def bimorphism_of_cocone(v: Sequence[Sequence[int]], D: FreeProductDiagram) -> Table:
    """``h(a, b) = v_{<a>,<b>}({(1,1)})``."""
    A, B = D.A, D.B
    h = [[0] * B.size for _ in range(A.size)]
    for a in range(A.size):
        for b in range(B.size):
            k = D.index[((a, A.perp(a)), (b, B.perp(b)))]
            h[a][b] = v[k][0]
    return h


def cocone_counts(A, B, C, bound: int = 3) -> tuple[int, int]:
    D = FreeProductDiagram(A, B, bound)
    return count_bimorphisms(A, B, C), count_cocones(D.diagram, C)


# ---------------------------------------------------------------------------
# the tensor product
# ---------------------------------------------------------------------------

@dataclass
class TensorResult:
    A: FiniteEffectAlgebra
    B: FiniteEffectAlgebra
    status: str
    algebra: FiniteEffectAlgebra | None
    tau: Table | None
    saturation: SaturationResult = field(repr=False)
    relations: int = 0

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    def tau_json(self) -> list:
        T = self.algebra
        assert T is not None and self.tau is not None
        return [[self.A.names[a], self.B.names[b], T.names[self.tau[a][b]]]
                for a in range(self.A.size) for b in range(self.B.size)]


def tensor_relations(A: FiniteEffectAlgebra, B: FiniteEffectAlgebra) -> list[tuple]:
    """Relation instances in a fixed order: unitality, then left, then right additivity."""
    rels: list[tuple] = [("unit",)]
    for a1, a2, a in A.pairs:
        if a1 <= a2:
            for b in range(B.size):
                rels.append(("left", a1, a2, a, b))
    for b1, b2, b in B.pairs:
        if b1 <= b2:
            for a in range(A.size):
                rels.append(("right", a, b1, b2, b))
    return rels


def tensor(A: FiniteEffectAlgebra, B: FiniteEffectAlgebra, cap: int | None = None,
           drop: Iterable[int] = ()) -> TensorResult:
    """Saturate the bimorphism presentation; ``drop`` removes relation instances by position."""
    P = Presentation()
    g = {(a, b): P.generator(f"{A.names[a]}⊗{B.names[b]}")
         for a in range(A.size) for b in range(B.size)}
    skip = set(drop)
    rels = tensor_relations(A, B)
    for k, r in enumerate(rels):
        if k in skip:
            continue
        if r[0] == "unit":
            P.add_equal(g[A.one, B.one], P.ONE)
        elif r[0] == "left":
            _, a1, a2, a, b = r
            P.add_sum(g[a1, b], g[a2, b], g[a, b])
        else:
            _, a, b1, b2, b = r
            P.add_sum(g[a, b1], g[a, b2], g[a, b])
    res = P.saturate(cap, label=f"tensor({A.label},{B.label})")
    tau = None
    if res.exact:
        tau = [[res.value(g[a, b]) for b in range(B.size)] for a in range(A.size)]
    return TensorResult(A, B, res.status, res.algebra, tau, res, len(rels) - len(skip))


def _generation_plan(T: FiniteEffectAlgebra, seeds: set[int]) -> tuple[list[tuple[int, int, int]], set[int]]:
    known = set(seeds) | {T.zero}
    plan = []
    progress = True
    while progress:
        progress = False
        for a, b, c in T.pairs:
            if c not in known and a in known and b in known:
                known.add(c)
                plan.append((a, b, c))
                progress = True
    return plan, known


@dataclass
class UniversalReport:
    ok: bool
    checked: int = 0
    targets: int = 0
    failure: dict | None = None

    def as_dict(self) -> dict:
        out = {"ok": self.ok, "targets": self.targets, "bimorphisms_checked": self.checked}
        if self.failure:
            out["failure"] = self.failure
        return out


def mediating_morphisms(res: TensorResult, h: Table, C: FiniteEffectAlgebra, limit: int = 2,
                        plan: list[tuple[int, int, int]] | None = None) -> list[list[int]]:
    """Morphisms ``f: T -> C`` with ``f o tau = h`` (at most ``limit`` of them)."""
    T, tau = res.algebra, res.tau
    assert T is not None and tau is not None
    A, B = res.A, res.B
    fixed: dict[int, int] = {}
    for a in range(A.size):
        for b in range(B.size):
            t, v = tau[a][b], h[a][b]
            if fixed.setdefault(t, v) != v:
                return []
    fixed.setdefault(T.zero, C.zero)
    if fixed[T.zero] != C.zero:
        return []
    out: list[list[int]] = []
    free = [x for x in range(T.size) if x not in fixed]
    tp = np.array(T.pairs, dtype=np.int64).reshape(-1, 3)
    ct = np.array(C.table, dtype=np.int64)

    def check(f):
        fa = np.asarray(f, dtype=np.int64)
        if fa[T.one] != C.one:
            return False
        if len(tp) == 0:
            return True
        got = ct[fa[tp[:, 0]], fa[tp[:, 1]]]
        return bool(np.all(got == fa[tp[:, 2]]))

    # propagate through sums first; anything left over is searched exhaustively
    f = [-1] * T.size
    for x, v in fixed.items():
        f[x] = v
    if plan is None:
        plan, _ = _generation_plan(T, set(fixed))
    for a, b, c in plan:
        s = C.table[f[a]][f[b]]
        if s < 0:
            return []
        f[c] = s
    rest = [x for x in free if f[x] < 0]

    def rec(i):
        if len(out) >= limit:
            return
        if i == len(rest):
            if check(f):
                out.append(list(f))
            return
        for v in range(C.size):
            f[rest[i]] = v
            rec(i + 1)
        f[rest[i]] = -1

    rec(0)
    return out


def verify_universal(res: TensorResult, targets: Sequence[FiniteEffectAlgebra]) -> UniversalReport:
    """Initiality check of ``(T, tau)`` against every bimorphism into each target."""
    if not res.exact:
        raise ValueError("universal property can only be verified on exact results")
    T, tau, A, B = res.algebra, res.tau, res.A, res.B
    assert T is not None and tau is not None
    bim = is_bimorphism(tau, A, B, T)
    if not bim:
        return UniversalReport(False, 0, 0, {"reason": "tau is not a bimorphism", **bim.witness})
    seeds = {tau[a][b] for a in range(A.size) for b in range(B.size)}
    plan, known = _generation_plan(T, seeds | {T.zero})
    if len(known) != T.size:
        missing = sorted(set(range(T.size)) - known)
        return UniversalReport(False, 0, 0, {"reason": "ambiguous: T is not generated by tau",
                                             "elements": [T.names[x] for x in missing[:5]]})
    checked = 0
    for C in targets:
        for h in enumerate_bimorphisms(A, B, C):
            checked += 1
            ms = mediating_morphisms(res, h, C, plan=plan)
            if len(ms) != 1:
                return UniversalReport(False, checked, len(targets), {
                    "reason": "missing" if not ms else "ambiguous",
                    "target": C.label or f"|C|={C.size}",
                    "h": [[A.names[a], B.names[b], C.names[h[a][b]]]
                          for a in range(A.size) for b in range(B.size)],
                })
    return UniversalReport(True, checked, len(targets))


def matches_free_product(res: TensorResult, n: int, m: int) -> bool:
    """For ``A = 2^[n]`` and ``B = 2^[m]``: the map sending ``tau({i},{j})`` to the point
    ``(i, j)`` is an isomorphism ``T -> 2^[n*m]`` carrying ``tau(X, Y)`` to ``X x Y``."""
    from .finbool import rectangle
    T, tau = res.algebra, res.tau
    assert T is not None and tau is not None
    atom_img = {}
    for i in range(n):
        for j in range(m):
            atom_img.setdefault(tau[1 << i][1 << j], 1 << (i * m + j))
    if sorted(atom_img) != sorted(T.atoms) or len(atom_img) != n * m:
        return False
    f = []
    for x in range(T.size):
        v = 0
        for a in T.atom_decomposition[x]:
            if v & atom_img[a]:
                return False
            v |= atom_img[a]
        f.append(v)
    if len(set(f)) != T.size or T.size != 1 << (n * m):
        return False
    for a, b, c in T.pairs:
        if f[a] & f[b] or f[a] | f[b] != f[c]:
            return False
    return all(f[tau[X][Y]] == rectangle(X, Y, m) for X in range(1 << n) for Y in range(1 << m))
