"""Named test algebras and an exhaustive small-model finder."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .core import (FiniteEffectAlgebra, boolean, chain, from_table, horizontal_sum,
                   interval_vector, mo, one_element, product)
from .iso import canonical_form

UNKNOWN = -2
UNDEF = -1


def _consistent(t: list[list[int]], n: int, one: int) -> bool:
    """Partial-table pruning: cancellation, at most one orthosupplement, known E2 instances."""
    for a in range(n):
        row = t[a]
        seen = set()
        ones = 0
        for b in range(n):
            c = row[b]
            if c >= 0:
                if c in seen:
                    return False
                seen.add(c)
                if c == one:
                    ones += 1
        if ones > 1:
            return False
    for a in range(n):
        ta = t[a]
        for b in range(n):
            d = ta[b]
            if d < 0:
                continue
            tb = t[b]
            td = t[d]
            for c in range(n):
                e = td[c]
                if e < 0:
                    continue
                f = tb[c]
                if f == UNDEF:
                    return False
                if f >= 0:
                    g = ta[f]
                    if g == UNDEF or (g >= 0 and g != e):
                        return False
    return True


def _models(n: int):
    if n == 1:
        yield [[0]]
        return
    one = n - 1
    t = [[UNKNOWN] * n for _ in range(n)]
    for a in range(n):
        t[0][a] = t[a][0] = a
    for a in range(1, n):
        t[a][one] = t[one][a] = UNDEF
    t[0][one] = t[one][0] = one
    mids = range(1, n - 1)
    slots = [(a, b) for a in mids for b in mids if a <= b]

    def rec(k):
        if k == len(slots):
            for a in range(n):
                if sum(1 for c in t[a] if c == one) != 1:
                    return
            yield [row[:] for row in t]
            return
        a, b = slots[k]
        for c in [UNDEF] + list(range(1, n)):
            if c in (a, b):
                continue
            t[a][b] = t[b][a] = c
            if _consistent(t, n, one):
                yield from rec(k + 1)
        t[a][b] = t[b][a] = UNKNOWN

    yield from rec(0)


@lru_cache(maxsize=None)
def algebras_of_size(n: int) -> tuple[FiniteEffectAlgebra, ...]:
    """All effect algebras with exactly ``n`` elements, one per isomorphism class."""
    if n < 1:
        raise ValueError("size must be >= 1")
    seen = {}
    for t in _models(n):
        names = ["0"] + [f"e{i}" for i in range(1, n - 1)] + (["1"] if n > 1 else [])
        A = from_table(names, 0, n - 1, t)
        key = canonical_form(A)
        if key not in seen:
            seen[key] = A
    out = []
    for k, key in enumerate(sorted(seen)):
        out.append(seen[key].with_label(f"ea{n}.{k + 1}"))
    return tuple(out)


def small_algebras(max_size: int) -> list[FiniteEffectAlgebra]:
    return [A for n in range(1, max_size + 1) for A in algebras_of_size(n)]


@dataclass
class CorpusEntry:
    name: str
    algebra: FiniteEffectAlgebra = field(repr=False)
    recipe: str = ""
    expected: dict | None = None

    def compute(self) -> dict:
        from .observables import decompositions
        from .props import property_report
        rep = property_report(self.algebra, self.name)
        return {"flags": rep.flags(), "observables": [len(decompositions(self.algebra, n)) for n in (1, 2, 3)],
                "size": self.algebra.size}


def named_algebras() -> list[tuple[str, str, FiniteEffectAlgebra]]:
    out = [("trivial", "one_element()", one_element())]
    for n in range(1, 7):
        out.append((f"chain{n}", f"chain({n})", chain(n)))
    for n in range(1, 5):
        out.append((f"b{n}", f"boolean({n})", boolean(n)))
    for k in range(1, 4):
        out.append((f"mo{k}", f"mo({k})", mo(k)))
    b1, c2, b2 = boolean(1), chain(2), boolean(2)
    out += [
        ("b1xb1", "product(boolean(1),boolean(1))", product(b1, b1)),
        ("c2xb1", "product(chain(2),boolean(1))", product(c2, b1)),
        ("c2xc2", "product(chain(2),chain(2))", product(c2, c2)),
        ("hsum-c2-c2", "horizontal_sum(chain(2),chain(2))", horizontal_sum(c2, c2)),
        ("hsum-b2-c2", "horizontal_sum(boolean(2),chain(2))", horizontal_sum(b2, c2)),
        ("hsum-c3-b2", "horizontal_sum(chain(3),boolean(2))", horizontal_sum(chain(3), b2)),
        ("iv12", "interval_vector([1,2])", interval_vector([1, 2])),
    ]
    return out


def corpus(golden: dict | None = None, finder_size: int = 5) -> list[CorpusEntry]:
    entries = [CorpusEntry(nm, A.with_label(nm), rec) for nm, rec, A in named_algebras()]
    for A in small_algebras(finder_size):
        entries.append(CorpusEntry(A.label, A, f"model-finder({A.size})"))
    if golden:
        for e in entries:
            e.expected = golden.get("entries", {}).get(e.name)
    return entries


def check_corpus() -> list[FiniteEffectAlgebra]:
    """Every algebra with at most five elements up to isomorphism, plus mo(2), mo(3), boolean(3)."""
    return small_algebras(5) + [mo(2), mo(3), boolean(3)]


def golden_values(finder_max: int = 6) -> dict:
    entries = {e.name: e.compute() for e in corpus()}
    return {
        "entries": entries,
        "iso_class_counts": {str(n): len(algebras_of_size(n)) for n in range(1, finder_max + 1)},
    }


def load_golden(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def save_corpus(directory: str | Path, finder_size: int = 5) -> list[Path]:
    from .core import save
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    written = []
    for e in corpus(finder_size=finder_size):
        p = d / f"{e.name}.json"
        save(e.algebra, p)
        written.append(p)
    return written
