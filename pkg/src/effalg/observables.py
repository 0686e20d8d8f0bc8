"""Finite observables and the category of elements of R(A).

An observable ``g: 2^[n] -> A`` is stored as its decomposition of unit
``(g({1}), ..., g({n}))``.  An arrow ``g -> g'`` is a Boolean morphism
``f: 2^[n] -> 2^[m]`` with ``g' o f = g``; internally it is handled through its
Stone dual ``phi: [m] -> [n]``, for which the condition reads
``g(i) = sum of g'(j) over phi(j) = i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .core import FiniteEffectAlgebra, morphism_preserves
from .finbool import BoolMorphism, FinMap, dualize, dualize_inv, points_of
from .props import interpolation_refinement, matrix_fits, refinement_matrix_search

AMALGAMATED = "amalgamated-up-to-bound"
COEQUALIZING = "coequalizing-up-to-bound"
FILTERED = "filtered-up-to-bound"
COUNTEREXAMPLE = "counterexample"


@dataclass(frozen=True)
class Observable:
    algebra: FiniteEffectAlgebra = field(repr=False, compare=False)
    parts: tuple[int, ...]

    def __post_init__(self):
        if self.algebra.sum_of(self.parts) != self.algebra.one:
            raise ValueError("parts do not form a decomposition of unit")

    @property
    def arity(self) -> int:
        return len(self.parts)

    def __call__(self, X: int) -> int:
        """Value on the subset with bitmask ``X``."""
        return self.algebra.sum_of(self.parts[i] for i in points_of(X))  # type: ignore[return-value]

    def part_names(self) -> list[str]:
        return [self.algebra.names[p] for p in self.parts]

    def __str__(self) -> str:
        inner = ", ".join(self.part_names()[:-1]) if self.arity > 1 else \
            ("" if self.arity == 0 else "∅")
        return f"⟨{inner}⟩"


@dataclass(frozen=True)
class ElementsArrow:
    source: Observable
    target: Observable
    map: BoolMorphism

    def __post_init__(self):
        if not is_arrow(self.source.algebra, self.source.parts, self.target.parts,
                        dualize_inv(self.map).image):
            raise ValueError("g' o f != g")

    def then(self, other: "ElementsArrow") -> "ElementsArrow":
        """Composite ``other o self``."""
        if other.source.parts != self.target.parts:
            raise ValueError("arrows are not composable")
        return ElementsArrow(self.source, other.target, other.map.compose(self.map))


def observable(A: FiniteEffectAlgebra, prefix: Sequence) -> Observable:
    """``⟨a_1, ..., a_{n-1}⟩``: the last part is the orthosupplement of the prefix sum."""
    idx = [A.index(x) if isinstance(x, str) else int(x) for x in prefix]
    s = A.sum_of(idx)
    if s is None:
        raise ValueError("prefix is not summable")
    return Observable(A, tuple(idx) + (A.perp(s),))


def check_morphism(A: FiniteEffectAlgebra, B: FiniteEffectAlgebra, mapping) -> bool:
    """True iff ``mapping`` (sequence or name dict) is an effect-algebra morphism A -> B."""
    if isinstance(mapping, dict):
        f = [B.index(mapping[nm]) for nm in A.names]
    else:
        f = [B.index(x) if isinstance(x, str) else int(x) for x in mapping]
    ok = morphism_preserves(A, B, f)
    if ok:
        for (b, a) in A._diff:
            assert B.leq(f[a], f[b])
    return ok


@lru_cache(maxsize=None)
def decompositions(A: FiniteEffectAlgebra, n: int) -> tuple[tuple[int, ...], ...]:
    """All ``n``-part decompositions of unit, lexicographic in element order."""
    if n == 0:
        return ((),) if A.zero == A.one else ()
    out = []
    t = A.table
    size = A.size

    def rec(prefix, acc):
        if len(prefix) == n - 1:
            out.append(prefix + (A.perp(acc),))
            return
        row = t[acc]
        for a in range(size):
            s = row[a]
            if s >= 0:
                rec(prefix + (a,), s)

    rec((), A.zero)
    return tuple(out)


def enumerate_observables(A: FiniteEffectAlgebra, n: int) -> list[Observable]:
    if n < 0:
        raise ValueError("arity must be >= 0")
    return [Observable(A, p) for p in decompositions(A, n)]


def is_arrow(A: FiniteEffectAlgebra, g: Sequence[int], g2: Sequence[int], phi: Sequence[int]) -> bool:
    acc = [A.zero] * len(g)
    t = A.table
    for j, i in enumerate(phi):
        acc[i] = t[acc[i]][g2[j]]
        if acc[i] < 0:
            return False
    return list(acc) == list(g)


def arrow_maps(A: FiniteEffectAlgebra, g: Sequence[int], g2: Sequence[int]) -> list[tuple[int, ...]]:
    """Every dual map ``phi: [m] -> [n]`` witnessing an arrow ``g -> g2``, lexicographic."""
    n, m = len(g), len(g2)
    if n == 0:
        return [()] if m == 0 else []
    t = A.table
    acc = [A.zero] * n
    phi = [0] * m
    out: list[tuple[int, ...]] = []

    def rec(j):
        if j == m:
            if all(acc[i] == g[i] for i in range(n)):
                out.append(tuple(phi))
            return
        x = g2[j]
        for i in range(n):
            s = t[acc[i]][x]
            if s < 0 or not A.leq(s, g[i]):
                continue
            old = acc[i]
            acc[i] = s
            phi[j] = i
            rec(j + 1)
            acc[i] = old

    rec(0)
    return out


def elements_arrows(g: Observable, g2: Observable) -> list[ElementsArrow]:
    if g.algebra != g2.algebra:
        raise ValueError("observables live in different algebras")
    A = g.algebra
    return [ElementsArrow(g, g2, dualize(FinMap(g2.arity, g.arity, phi)))
            for phi in arrow_maps(A, g.parts, g2.parts)]


def restrict(A: FiniteEffectAlgebra, g2: Sequence[int], phi: Sequence[int], n: int) -> tuple[int, ...]:
    """``g2 o f`` for the morphism f dual to ``phi: [m] -> [n]``."""
    acc = [A.zero] * n
    t = A.table
    for j, i in enumerate(phi):
        acc[i] = t[acc[i]][g2[j]]
        if acc[i] < 0:
            return None  # type: ignore[return-value]
    return tuple(acc)


def range_subalgebra(g: Observable) -> list[int]:
    """The range ``{g(X)}`` when it is a sub-effect algebra, else ``ValueError``."""
    from .core import is_subalgebra
    A = g.algebra
    rng = sorted({g(X) for X in range(1 << g.arity)})
    if not is_subalgebra(A, rng):
        raise ValueError(f"range of {g} is not a sub-effect algebra "
                         "(possible outside orthoalgebras)")
    return rng


# ---------------------------------------------------------------------------
# the truncated category of elements
# ---------------------------------------------------------------------------

class ElementsCategory:
    """Objects of ``∫R(A)`` with arity ``<= bound`` and all arrows among them."""

    def __init__(self, A: FiniteEffectAlgebra, bound: int):
        self.A = A
        self.bound = bound
        self.objects: list[tuple[int, ...]] = []
        for n in range(bound + 1):
            self.objects.extend(decompositions(A, n))
        self.index = {g: k for k, g in enumerate(self.objects)}
        self._out: dict[int, list[tuple[int, tuple[int, ...]]]] = {}

    def out_arrows(self, k: int) -> list[tuple[int, tuple[int, ...]]]:
        """``(target index, phi)`` for every arrow leaving object ``k``; targets in arity order."""
        if k not in self._out:
            g = self.objects[k]
            res = []
            for k2, g2 in enumerate(self.objects):
                for phi in arrow_maps(self.A, g, g2):
                    res.append((k2, phi))
            self._out[k] = res
        return self._out[k]

    def arrows_between(self, k: int, k2: int) -> list[tuple[int, ...]]:
        return [phi for t, phi in self.out_arrows(k) if t == k2]

    def names(self, k: int) -> list[str]:
        return [self.A.names[x] for x in self.objects[k]]


@dataclass
class Verdict:
    verdict: str
    bound: int
    witness: dict | None = None
    counterexample: dict | None = None
    checked: int = 0
    failing_arity: int | None = None

    @property
    def ok(self) -> bool:
        return self.verdict != COUNTEREXAMPLE

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        out = {"verdict": self.verdict, "bound": self.bound, "checked": self.checked}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
            out["failing_arity"] = self.failing_arity
        else:
            out["witness"] = self.witness
        return out


def _fibres(phi: Sequence[int], n: int) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(n)]
    for j, i in enumerate(phi):
        out[i].append(j)
    return out


def _bm_json(phi: Sequence[int], n: int) -> dict:
    return dualize(FinMap(len(phi), n, tuple(phi))).to_json()


class _BlockSolver:
    """Memoised common-refinement search for pairs of families with equal sums."""

    def __init__(self, A: FiniteEffectAlgebra, use_interpolation: bool):
        self.A = A
        self.use_interpolation = use_interpolation
        self.cache: dict[tuple, bool] = {}

    def solvable(self, f1: tuple[int, ...], f2: tuple[int, ...]) -> bool:
        key = (tuple(sorted(f1)), tuple(sorted(f2)))
        if key[0] > key[1]:
            key = (key[1], key[0])
        hit = self.cache.get(key)
        if hit is None:
            hit = refinement_matrix_search(self.A, key[0], key[1]) is not None
            self.cache[key] = hit
        return hit

    def matrix(self, f1, f2):
        A = self.A
        if self.use_interpolation:
            z = interpolation_refinement(A, f1, f2)
            if z is not None:
                assert matrix_fits(A, z, f1, f2)
                return z
        return refinement_matrix_search(A, f1, f2)


def amalgamation_witness(A, g, g1, phi1, g2, phi2, solver: _BlockSolver):
    """Cospan ``g1 -> z <- g2`` over a span, assembled from per-fibre refinement matrices.

    The points of ``z`` are the pairs ``(j, l)`` lying over the same point of g,
    listed fibre by fibre.
    """
    n = len(g)
    fib1, fib2 = _fibres(phi1, n), _fibres(phi2, n)
    parts, psi1, psi2 = [], [], []
    for i in range(n):
        rows = [g1[j] for j in fib1[i]]
        cols = [g2[l] for l in fib2[i]]
        z = solver.matrix(rows, cols)
        if z is None:
            return None
        for r, j in enumerate(fib1[i]):
            for c, l in enumerate(fib2[i]):
                parts.append(z[r][c])
                psi1.append(j)
                psi2.append(l)
    return tuple(parts), tuple(psi1), tuple(psi2)


def check_amalgamated(A: FiniteEffectAlgebra, max_arity: int = 4, *, rdp: bool | None = None) -> Verdict:
    """Bounded search for a span ``g1 <- g -> g2`` admitting no commutative square.

    A cospan completing a span exists iff, over every point ``i`` of g, the two
    fibre families have a common refinement: any cospan factors through the
    pair-indexed observable built from such matrices, so the search over
    cospans of arity ``<= arity(g1) * arity(g2)`` is exhaustive.  Spans are
    therefore grouped by the (sorted) fibre families they induce over each
    point, and each distinct pair of families is solved once.
    """
    if max_arity < 2:
        raise ValueError("max_arity must be >= 2")
    if rdp is None:
        from .props import has_rdp
        rdp = has_rdp(A).ok
    cat = ElementsCategory(A, max_arity)
    solver = _BlockSolver(A, use_interpolation=rdp)
    best = None
    checked = 0
    last = None
    for k, g in enumerate(cat.objects):
        n = len(g)
        outs = cat.out_arrows(k)
        # per point: fibre family -> (target arity, arrow position) of its first realisation
        seen: list[dict[tuple[int, ...], tuple[int, int]]] = [{} for _ in range(n)]
        for pos, (t, phi) in enumerate(outs):
            tgt = cat.objects[t]
            for i, fib in enumerate(_fibres(phi, n)):
                fam = tuple(sorted(tgt[j] for j in fib))
                prev = seen[i].get(fam)
                if prev is None or len(tgt) < prev[0]:
                    seen[i][fam] = (len(tgt), pos)
        for i in range(n):
            fams = sorted(seen[i].items(), key=lambda kv: (kv[1], kv[0]))
            for a in range(len(fams)):
                for b in range(a, len(fams)):
                    checked += 1
                    (f1, (n1, p1)), (f2, (n2, p2)) = fams[a], fams[b]
                    key = max(n, n1, n2)
                    if best is not None and key >= best[0]:
                        continue
                    if not solver.solvable(f1, f2):
                        best = (key, k, p1, p2, i)
            if outs:
                last = (k, outs[0], outs[-1])
    if best is not None:
        key, k, p1, p2, i = best
        (t1, phi1), (t2, phi2) = cat.out_arrows(k)[p1], cat.out_arrows(k)[p2]
        g = cat.objects[k]
        return Verdict(COUNTEREXAMPLE, max_arity, counterexample={
            "g": cat.names(k), "g1": cat.names(t1), "g2": cat.names(t2),
            "f1": _bm_json(phi1, len(g)), "f2": _bm_json(phi2, len(g)),
            "point": i + 1,
        }, checked=checked, failing_arity=key)
    witness = None
    if last is not None:
        k, (t1, phi1), (t2, phi2) = last
        g, g1, g2 = cat.objects[k], cat.objects[t1], cat.objects[t2]
        w = amalgamation_witness(A, g, g1, phi1, g2, phi2, solver)
        if w is not None:
            witness = _square_json(A, cat, k, t1, phi1, t2, phi2, w)
            witness["construction"] = "common-refinement" if rdp else "search"
    return Verdict(AMALGAMATED, max_arity, witness=witness, checked=checked)


def _square_json(A, cat, k, t1, phi1, t2, phi2, w) -> dict:
    g, g1, g2 = cat.objects[k], cat.objects[t1], cat.objects[t2]
    parts, psi1, psi2 = w
    return {
        "g": cat.names(k), "g1": cat.names(t1), "g2": cat.names(t2),
        "f1": _bm_json(phi1, len(g)), "f2": _bm_json(phi2, len(g)),
        "z": [A.names[p] for p in parts],
        "h1": _bm_json(psi1, len(g1)), "h2": _bm_json(psi2, len(g2)),
    }


def _coequalizes(phi1, phi2, psi) -> bool:
    return all(phi1[j] == phi2[j] for j in psi)


def coequalizer_recipe(A, g2: Sequence[int], phi1, phi2):
    """Witness from the Boolean coequalizer: keep the points where the two duals agree.

    Returns ``(u, psi)`` with ``psi`` the inclusion of the agreement set, or
    ``None`` when g2 is non-zero somewhere the duals disagree.
    """
    keep = [j for j in range(len(g2)) if phi1[j] == phi2[j]]
    if any(g2[j] != A.zero for j in range(len(g2)) if phi1[j] != phi2[j]):
        return None
    return tuple(g2[j] for j in keep), tuple(keep)


def check_coequalizing(A: FiniteEffectAlgebra, max_arity: int = 4, *,
                       orthoalgebra: bool | None = None) -> Verdict:
    """Bounded search for a parallel pair ``g => g'`` with no coequalizing arrow out of g'."""
    if max_arity < 2:
        raise ValueError("max_arity must be >= 2")
    if orthoalgebra is None:
        from .props import is_orthoalgebra
        orthoalgebra = is_orthoalgebra(A).ok
    cat = ElementsCategory(A, max_arity)
    checked = 0
    witness = None
    # out-arrows of g' ordered by increasing target arity, then lexicographic parts
    for n2 in range(max_arity + 1):
        for k2, g2 in enumerate(cat.objects):
            if len(g2) != n2:
                continue
            for k, g in enumerate(cat.objects):
                phis = cat.arrows_between(k, k2)
                for a in range(len(phis)):
                    for b in range(a + 1, len(phis)):
                        checked += 1
                        phi1, phi2 = phis[a], phis[b]
                        found = None
                        for t, psi in cat.out_arrows(k2):
                            if len(cat.objects[t]) > n2:
                                break
                            # psi: [arity u] -> [arity g2]; q o f_i is dual to phi_i o psi
                            if _coequalizes(phi1, phi2, psi):
                                found = (t, psi)
                                break
                        if found is None:
                            return Verdict(COUNTEREXAMPLE, max_arity, counterexample={
                                "g": cat.names(k), "g_prime": cat.names(k2),
                                "f1": _bm_json(phi1, len(g)), "f2": _bm_json(phi2, len(g)),
                            }, checked=checked, failing_arity=n2)
                        t, psi = found
                        witness = {
                            "g": cat.names(k), "g_prime": cat.names(k2),
                            "f1": _bm_json(phi1, len(g)), "f2": _bm_json(phi2, len(g)),
                            "u": cat.names(t), "q": _bm_json(psi, n2), "construction": "search",
                        }
                        if orthoalgebra:
                            rec = coequalizer_recipe(A, g2, phi1, phi2)
                            if rec is not None:
                                u, psi = rec
                                witness.update({"u": [A.names[x] for x in u],
                                                "q": _bm_json(psi, n2),
                                                "construction": "boolean-coequalizer"})
    return Verdict(COEQUALIZING, max_arity, witness=witness, checked=checked)


def check_filtered(A: FiniteEffectAlgebra, max_arity: int = 4) -> Verdict:
    """Nonempty, cospans over every pair of objects, and coequalizing arrows."""
    if max_arity < 2:
        raise ValueError("max_arity must be >= 2")
    cat = ElementsCategory(A, max_arity)
    if not cat.objects:  # pragma: no cover - ⟨∅⟩ always exists
        return Verdict(COUNTEREXAMPLE, max_arity, counterexample={"reason": "empty"})
    solver = _BlockSolver(A, use_interpolation=False)
    # ⟨∅⟩ is initial, so a cospan over (g1, g2) is a common refinement of the two decompositions
    checked = 0
    objs = cat.objects
    order = sorted(range(len(objs)), key=lambda k: len(objs[k]))
    for x in range(len(order)):
        for y in range(x, len(order)):
            k1, k2 = order[x], order[y]
            checked += 1
            if not solver.solvable(objs[k1], objs[k2]):
                return Verdict(COUNTEREXAMPLE, max_arity, counterexample={
                    "reason": "no cospan", "g1": cat.names(k1), "g2": cat.names(k2),
                }, checked=checked, failing_arity=max(len(objs[k1]), len(objs[k2])))
    co = check_coequalizing(A, max_arity)
    if not co.ok:
        ce = dict(co.counterexample or {})
        ce["reason"] = "no coequalizing arrow"
        return Verdict(COUNTEREXAMPLE, max_arity, counterexample=ce,
                       checked=checked + co.checked, failing_arity=co.failing_arity)
    return Verdict(FILTERED, max_arity, witness={"initial": ["∅"]}, checked=checked + co.checked)


def iter_spans(A: FiniteEffectAlgebra, max_arity: int) -> Iterator[tuple]:
    """``(g, g1, phi1, g2, phi2)`` for every span in the truncated category."""
    cat = ElementsCategory(A, max_arity)
    for k, g in enumerate(cat.objects):
        outs = cat.out_arrows(k)
        for a in range(len(outs)):
            for b in range(a, len(outs)):
                yield g, cat.objects[outs[a][0]], outs[a][1], cat.objects[outs[b][0]], outs[b][1]
