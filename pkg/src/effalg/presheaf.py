"""Truncated presheaves on finite Boolean algebras: R(A), L, Day convolution.

A presheaf is recorded at arities ``1..N``.  A morphism ``f: 2^[n] -> 2^[m]``
is indexed by its dual ``phi: [m] -> [n]``; ``restrictions[n, m, phi]`` sends
token indices at arity m to token indices at arity n.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .core import FiniteEffectAlgebra, morphism_preserves
from .diagram import FiniteDiagram, enumerate_cocones
from .observables import decompositions, restrict
from .saturate import Presentation, SaturationResult


def finmaps(dom: int, cod: int):
    return itertools.product(range(cod), repeat=dom)


@dataclass
class TruncatedPresheaf:
    bound: int
    values: dict[int, list] = field(default_factory=dict)
    restrictions: dict[tuple[int, int, tuple[int, ...]], tuple[int, ...]] = field(default_factory=dict)
    part_label: Callable[[int, int, int], str] | None = field(default=None, repr=False)
    representable: bool = False

    def sizes(self) -> list[int]:
        return [len(self.values.get(n, ())) for n in range(1, self.bound + 1)]

    def act(self, n: int, m: int, phi: Sequence[int], y: int) -> int:
        return self.restrictions[n, m, tuple(phi)][y]

    def check_functorial(self) -> tuple[bool, dict | None]:
        N = self.bound
        for n in range(1, N + 1):
            ident = self.restrictions[n, n, tuple(range(n))]
            if ident != tuple(range(len(self.values[n]))):
                return False, {"law": "identity", "arity": n}
        # f: n -> m (dual phi: [m] -> [n]), f2: m -> k (dual psi: [k] -> [m]); P(f2 o f) = P(f) o P(f2)
        for n, m, k in itertools.product(range(1, N + 1), repeat=3):
            for phi in finmaps(m, n):
                Pf = self.restrictions[n, m, phi]
                for psi in finmaps(k, m):
                    Pf2 = self.restrictions[m, k, psi]
                    comp = tuple(phi[psi[j]] for j in range(k))
                    Pc = self.restrictions[n, k, comp]
                    if any(Pc[z] != Pf[Pf2[z]] for z in range(len(Pf2))):
                        return False, {"law": "composition", "arities": [n, m, k],
                                       "phi": [x + 1 for x in phi], "psi": [x + 1 for x in psi]}
        return True, None


def restrict_representation(A: FiniteEffectAlgebra, N: int) -> TruncatedPresheaf:
    if N < 1:
        raise ValueError("bound must be >= 1")
    P = TruncatedPresheaf(N, representable=True)
    for n in range(1, N + 1):
        P.values[n] = list(decompositions(A, n))
    index = {n: {g: i for i, g in enumerate(P.values[n])} for n in P.values}
    for n in range(1, N + 1):
        for m in range(1, N + 1):
            for phi in finmaps(m, n):
                P.restrictions[n, m, phi] = tuple(index[n][restrict(A, y, phi, n)] for y in P.values[m])
    P.part_label = lambda n, k, i: A.names[P.values[n][k][i]]
    return P


def colimit_presentation(P: TruncatedPresheaf) -> tuple[Presentation, dict[tuple[int, int, int], int]]:
    """One generator per (arity, token, atom); atoms of a token decompose unit, and
    every restriction identifies a generator with the sum of its fibre."""
    pres = Presentation()
    gen: dict[tuple[int, int, int], int] = {}
    for n in range(1, P.bound + 1):
        for k in range(len(P.values[n])):
            for i in range(n):
                nm = P.part_label(n, k, i) if P.part_label else f"t{n}.{k}[{i + 1}]"
                gen[n, k, i] = pres.generator(nm)
            pres.add_sum_family([gen[n, k, i] for i in range(n)], pres.ONE)
    for (n, m, phi), table in P.restrictions.items():
        fib: list[list[int]] = [[] for _ in range(n)]
        for j, i in enumerate(phi):
            fib[i].append(j)
        for y, x in enumerate(table):
            for i in range(n):
                parts = [gen[m, y, j] for j in fib[i]]
                if parts:
                    pres.add_sum_family(parts, gen[n, x, i])
                else:
                    pres.add_equal(gen[n, x, i], pres.ZERO)
    return pres, gen


def colimit_L(P: TruncatedPresheaf, cap: int | None = None, label: str = "L(P)") -> SaturationResult:
    pres, _ = colimit_presentation(P)
    return pres.saturate(cap, label=label)


# ---------------------------------------------------------------------------
# Day convolution
# ---------------------------------------------------------------------------

def generating_maps(N: int) -> list[tuple[int, int, tuple[int, ...]]]:
    """Maps ``[a] -> [b]`` (as ``(a, b, image)``) generating all maps between sets of size 1..N.

    Adjacent transpositions, the surjection merging the last two points and
    the inclusion missing the last point; every map factors through these
    with intermediate sizes between its domain and codomain sizes.
    """
    out = []
    for k in range(2, N + 1):
        for i in range(k - 1):
            img = list(range(k))
            img[i], img[i + 1] = img[i + 1], img[i]
            out.append((k, k, tuple(img)))
    for k in range(1, N):
        out.append((k + 1, k, tuple(range(k)) + (k - 1,)))
        out.append((k, k + 1, tuple(range(k))))
    return out


@dataclass
class DayResult:
    presheaf: TruncatedPresheaf
    tokens: dict[int, int]     # arity -> number of raw coend tokens
    classes: dict[int, int]    # arity -> number of classes
    edges: int


class _Blocks:
    """Integer encoding of tokens ``(t, x, y)`` at a fixed output arity c."""

    def __init__(self, c: int, N: int, nx: dict[int, int], ny: dict[int, int]):
        self.c = c
        self.offset: dict[tuple[int, int], int] = {}
        total = 0
        for n in range(1, N + 1):
            for m in range(1, N + 1):
                self.offset[n, m] = total
                total += c ** (n * m) * nx[n] * ny[m]
        self.total = total
        self.nx, self.ny = nx, ny

    def digits(self, n: int, m: int) -> np.ndarray:
        L = n * m
        codes = np.arange(self.c ** L, dtype=np.int64)
        return np.stack([(codes // self.c ** k) % self.c for k in range(L)], axis=1) if L else codes[:, None]

    def powers(self, L: int) -> np.ndarray:
        return self.c ** np.arange(L, dtype=np.int64)

    def index(self, n, m, tcode, xi, yi):
        return self.offset[n, m] + (tcode * self.nx[n] + xi) * self.ny[m] + yi


def _table(P: TruncatedPresheaf, n: int, m: int, phi: tuple[int, ...]) -> np.ndarray:
    return np.asarray(P.restrictions[n, m, phi], dtype=np.int64)


def day_convolution(X: TruncatedPresheaf, Y: TruncatedPresheaf, N: int | None = None,
                    reverse: bool = False, backend: str | None = None) -> DayResult:
    """``(X ⊗ Y)(c) = ∫^{n,m} Hom(2^[c], 2^[n] * 2^[m]) x X(n) x Y(m)``, truncated at N.

    Tokens are integers; the coend relations along the generating maps in each
    variable are fed to a union-find, and each class is named by its least token.
    """
    N = min(X.bound, Y.bound) if N is None else N
    if N > min(X.bound, Y.bound):
        raise ValueError("bound exceeds the presheaves' bounds")
    nx = {n: len(X.values[n]) for n in range(1, N + 1)}
    ny = {m: len(Y.values[m]) for m in range(1, N + 1)}
    gens = generating_maps(N)
    if reverse:
        gens = gens[::-1]
    out = TruncatedPresheaf(N)
    labels: dict[int, np.ndarray] = {}
    blocks: dict[int, _Blocks] = {}
    tokens, classes = {}, {}
    edges = 0
    for c in range(1, N + 1):
        B = _Blocks(c, N, nx, ny)
        uf = kernels.union_find(B.total, backend)
        order = range(1, N + 1)
        for n in order:
            for m in order:
                dig = B.digits(n, m)
                # left variable: sigma: [n2] -> [n] dual to s: 2^[n] -> 2^[n2]
                for a, b, sigma in gens:
                    if b != n:
                        continue
                    n2 = a
                    idx = np.array([sigma[j2] * m + l for j2 in range(n2) for l in range(m)], dtype=np.int64)
                    t2 = dig[:, idx] @ B.powers(n2 * m)
                    Xs = _table(X, n, n2, sigma)  # X(n2) -> X(n)
                    t1 = np.arange(len(dig), dtype=np.int64)
                    x2 = np.arange(nx[n2], dtype=np.int64)
                    yy = np.arange(ny[m], dtype=np.int64)
                    left = B.index(n, m, t1[:, None, None], Xs[None, :, None], yy[None, None, :])
                    right = B.index(n2, m, t2[:, None, None], x2[None, :, None], yy[None, None, :])
                    uf.union_arrays(left.ravel(), right.ravel())
                    edges += left.size
                # right variable
                for a, b, sigma in gens:
                    if b != m:
                        continue
                    m2 = a
                    idx = np.array([j * m + sigma[l2] for j in range(n) for l2 in range(m2)], dtype=np.int64)
                    t2 = dig[:, idx] @ B.powers(n * m2)
                    Ys = _table(Y, m, m2, sigma)
                    t1 = np.arange(len(dig), dtype=np.int64)
                    xx = np.arange(nx[n], dtype=np.int64)
                    y2 = np.arange(ny[m2], dtype=np.int64)
                    left = B.index(n, m, t1[:, None, None], xx[None, :, None], Ys[None, None, :])
                    right = B.index(n, m2, t2[:, None, None], xx[None, :, None], y2[None, None, :])
                    uf.union_arrays(left.ravel(), right.ravel())
                    edges += left.size
        lab = uf.labels()
        labels[c], blocks[c] = lab, B
        reps = np.unique(lab)
        out.values[c] = [int(r) for r in reps]
        tokens[c], classes[c] = B.total, len(reps)
    # restrictions: token (t, x, y) at c maps to (t o f, x, y); dual of t o f is psi o dual(t)
    rep_pos = {c: {r: k for k, r in enumerate(out.values[c])} for c in out.values}
    for c in range(1, N + 1):
        B = blocks[c]
        reps = np.asarray(out.values[c], dtype=np.int64)
        for c2 in range(1, N + 1):
            B2 = blocks[c2]
            for psi in finmaps(c, c2):
                psi_arr = np.asarray(psi, dtype=np.int64)
                img = np.empty(len(reps), dtype=np.int64)
                for (n, m), off in B.offset.items():
                    size = c ** (n * m) * nx[n] * ny[m]
                    sel = (reps >= off) & (reps < off + size)
                    if not sel.any():
                        continue
                    local = reps[sel] - off
                    yi = local % ny[m]
                    xi = (local // ny[m]) % nx[n]
                    tcode = local // (ny[m] * nx[n])
                    L = n * m
                    dig = np.stack([(tcode // c ** k) % c for k in range(L)], axis=1)
                    t2 = psi_arr[dig] @ B2.powers(L)
                    img[sel] = labels[c2][B2.index(n, m, t2, xi, yi)]
                out.restrictions[c2, c, tuple(psi)] = tuple(rep_pos[c2][int(v)] for v in img)
    return DayResult(out, tokens, classes, edges)


def copower_check(X: TruncatedPresheaf, Y: TruncatedPresheaf, A: FiniteEffectAlgebra,
                  B: FiniteEffectAlgebra, N: int) -> bool:
    """At fixed (n, m) the integrand splits into |EA(2^[n],A)| x |EA(2^[m],B)| copies of Hom(c, n*m).

    The morphism counts come from an independent search, not from the presheaves.
    """
    from .core import boolean
    from .tensor import enumerate_homs
    for n in range(1, N + 1):
        if len(X.values[n]) != sum(1 for _ in enumerate_homs(boolean(n), A)):
            return False
        if len(Y.values[n]) != sum(1 for _ in enumerate_homs(boolean(n), B)):
            return False
    for c in range(1, N + 1):
        blk = _Blocks(c, N, {n: len(X.values[n]) for n in range(1, N + 1)},
                      {m: len(Y.values[m]) for m in range(1, N + 1)})
        for (n, m) in blk.offset:
            start = blk.offset[n, m]
            # each (x, y) owns exactly c^(n m) tokens
            for xi in range(len(X.values[n])):
                for yi in range(len(Y.values[m])):
                    ts = blk.index(n, m, np.arange(c ** (n * m)), xi, yi)
                    if len(np.unique(ts)) != c ** (n * m) or ts.min() < start:
                        return False
    return True


# ---------------------------------------------------------------------------
# reflection check
# ---------------------------------------------------------------------------

def elements_diagram(A: FiniteEffectAlgebra, N: int) -> tuple[FiniteDiagram, list[tuple[int, ...]]]:
    objs = [g for n in range(1, N + 1) for g in decompositions(A, n)]
    index = {g: k for k, g in enumerate(objs)}
    D = FiniteDiagram([len(g) for g in objs], labels=objs)
    from .observables import arrow_maps
    for k, g in enumerate(objs):
        for k2, g2 in enumerate(objs):
            for phi in arrow_maps(A, g, g2):
                D.add_arrow(k, k2, phi)
    return D, objs


@dataclass
class LRVerdict:
    ok: bool
    bound: int
    iso: bool
    cocones: int = 0
    targets: int = 0
    counterexample: dict | None = None

    def as_dict(self) -> dict:
        out = {"verdict": "pass" if self.ok else "counterexample", "bound": self.bound,
               "iso": self.iso, "cocones_checked": self.cocones, "targets": self.targets}
        if self.counterexample:
            out["counterexample"] = self.counterexample
        return out


def lr_check(A: FiniteEffectAlgebra, N: int = 3, target_size_bound: int = 6,
             targets: Sequence[FiniteEffectAlgebra] | None = None) -> LRVerdict:
    from .iso import isomorphism
    from .tensor import enumerate_homs
    if N < 3:
        raise ValueError("lr_check needs N >= 3")
    res = colimit_L(restrict_representation(A, N), label=f"L(R({A.label}))")
    iso = res.exact and isomorphism(res.algebra, A) is not None  # type: ignore[arg-type]
    if not iso:
        return LRVerdict(False, N, False, counterexample={"reason": "L(R(A)) is not isomorphic to A",
                                                          "status": res.status,
                                                          "size": res.algebra.size if res.algebra else None})
    if targets is None:
        from .corpus import small_algebras
        targets = small_algebras(target_size_bound)
    D, objs = elements_diagram(A, N)
    index = {g: k for k, g in enumerate(objs)}
    checked = 0
    for C in targets:
        homs = list(enumerate_homs(A, C))
        ncoc = 0
        for r in enumerate_cocones(D, C):
            ncoc += 1
            checked += 1
            u = [r[index[(a, A.perp(a))]][0] for a in range(A.size)]
            bad = None
            if not morphism_preserves(A, C, u):
                bad = "mediating map is not a morphism"
            elif any(tuple(u[p] for p in g) != r[k] for k, g in enumerate(objs)):
                bad = "mediating map is not a cocone morphism"
            elif sum(1 for f in homs if all(tuple(f[p] for p in g) == r[k] for k, g in enumerate(objs))) != 1:
                bad = "mediating map is not unique"
            if bad:
                return LRVerdict(False, N, True, checked, len(targets), {
                    "reason": bad, "target": C.label, "u": [C.names[x] for x in u]})
        if ncoc != len(homs):
            return LRVerdict(False, N, True, checked, len(targets), {
                "reason": "cocone count differs from morphism count", "target": C.label,
                "cocones": ncoc, "morphisms": len(homs)})
    return LRVerdict(True, N, True, checked, len(targets))
