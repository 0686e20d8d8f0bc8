"""Effect algebras presented by generators and sum relations.

Every rule applied here holds in any effect algebra (functionality and
cancellation of +, commutativity, the zero law, E4, existence of
orthosupplements, and the associativity clause of E2).  The fixpoint is
therefore an effect algebra into which the presentation maps, and every node
in it is a term forced to exist, so the fixpoint is the presented algebra.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

from .core import FiniteEffectAlgebra, from_table

DEFAULT_CAP = 10_000
DEFAULT_MAX_NODES = 250_000
EXACT = "exact"
CAP_HIT = "cap-hit"


def env_cap(default: int = DEFAULT_CAP) -> int:
    raw = os.environ.get("EA_CAP")
    if raw is None or raw == "":
        return default
    try:
        val = int(raw)
    except ValueError:
        raise ValueError(f"EA_CAP must be an integer, got {raw!r}") from None
    if val < 1:
        raise ValueError("EA_CAP must be >= 1")
    return val


@dataclass
class SaturationResult:
    status: str
    algebra: FiniteEffectAlgebra | None
    node_class: list[int] = field(repr=False)  # node id -> element index (or -1 on cap-hit)
    rounds: int = 0
    nodes: int = 0

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    def value(self, node: int) -> int:
        return self.node_class[node]


class Presentation:
    ZERO = 0
    ONE = 1

    def __init__(self):
        self.parent: list[int] = [0, 1]
        self.names: list[str | None] = ["0", "1"]
        self.rows: list[dict[int, int]] = [{}, {}]
        self.pending_eq: list[tuple[int, int]] = []
        self._sum_memo: dict[tuple[int, ...], int] = {}
        self.relations = 0

    # -- construction ------------------------------------------------------
    def _node(self, name: str | None = None) -> int:
        k = len(self.parent)
        self.parent.append(k)
        self.names.append(name)
        self.rows.append({})
        return k

    def generator(self, name: str) -> int:
        return self._node(name)

    def _put(self, a: int, b: int, c: int) -> None:
        for x, y in ((a, b), (b, a)):
            old = self.rows[x].get(y)
            if old is None:
                self.rows[x][y] = c
            elif old != c:
                self.pending_eq.append((old, c))

    def add_sum(self, x: int, y: int, z: int) -> None:
        """Relation ``x + y = z`` (in particular x and y are orthogonal)."""
        self.relations += 1
        self._put(x, y, z)

    def add_equal(self, x: int, y: int) -> None:
        self.relations += 1
        self.pending_eq.append((x, y))

    def sum_node(self, items: Sequence[int]) -> int:
        """A node standing for ``items[0] + ... + items[-1]`` (left fold, shared prefixes)."""
        if not items:
            return self.ZERO
        acc = items[0]
        key: tuple[int, ...] = (items[0],)
        for x in items[1:]:
            key = key + (x,)
            nxt = self._sum_memo.get(key)
            if nxt is None:
                nxt = self._node()
                self._sum_memo[key] = nxt
                self._put(acc, x, nxt)
            acc = nxt
        return acc

    def add_sum_family(self, items: Sequence[int], total: int) -> None:
        self.relations += 1
        if len(items) == 1:
            self.pending_eq.append((items[0], total))
        else:
            self.pending_eq.append((self.sum_node(items), total))

    # -- closure -----------------------------------------------------------
    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def _union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def _normalize(self) -> bool:
        """Apply equalities, functionality, cancellation and E4 until stable."""
        changed = False
        while True:
            merged = False
            for a, b in self.pending_eq:
                merged |= self._union(a, b)
            self.pending_eq = []
            find = self.find
            new_rows: dict[int, dict[int, int]] = {}
            for a in range(len(self.rows)):
                row = self.rows[a]
                if not row:
                    continue
                ra = find(a)
                dst = new_rows.setdefault(ra, {})
                for b, c in row.items():
                    rb, rc = find(b), find(c)
                    old = dst.get(rb)
                    if old is None:
                        dst[rb] = rc
                    elif old != rc and find(old) != rc:
                        merged |= self._union(old, rc)
            if merged:
                changed = True
                self.rows = [{} for _ in self.rows]
                for a, row in new_rows.items():
                    self.rows[a] = row
                continue
            # canonical rows; now cancellation and E4
            one, zero = find(self.ONE), find(self.ZERO)
            for a, row in new_rows.items():
                inv: dict[int, int] = {}
                for b, c in row.items():
                    prev = inv.get(c)
                    if prev is not None and prev != b:
                        merged |= self._union(prev, b)
                    else:
                        inv[c] = b
                if one in row and a != zero:
                    merged |= self._union(a, zero)
            self.rows = [{} for _ in self.rows]
            for a, row in new_rows.items():
                self.rows[a] = row
            if merged:
                changed = True
                continue
            return changed

    def _reps(self) -> list[int]:
        return [x for x in range(len(self.parent)) if self.parent[x] == x]

    def _complete(self, max_nodes: int) -> bool:
        """Zero law, orthosupplements and associativity; True if anything was added."""
        added = False
        rows = self.rows
        zero, one = self.find(self.ZERO), self.find(self.ONE)
        reps = self._reps()
        for a in reps:
            if rows[zero].get(a) != a:
                self._put(zero, a, a)
                added = True
        for a in reps:
            if not any(c == one for c in rows[a].values()):
                p = self._node()
                self._put(a, p, one)
                added = True
        reps = self._reps()
        for a in reps:
            for b, d in list(rows[a].items()):
                rd = rows[d]
                if not rd:
                    continue
                rb = rows[b]
                ra = rows[a]
                for c, e in list(rd.items()):
                    f = rb.get(c)
                    if f is None:
                        if len(self.parent) >= max_nodes:
                            return True
                        f = self._node()
                        self._put(b, c, f)
                        added = True
                    old = ra.get(f)
                    if old is None:
                        self._put(a, f, e)
                        added = True
                    elif old != e:
                        self.pending_eq.append((old, e))
                        added = True
        return added

    def saturate(self, cap: int | None = None, max_nodes: int = DEFAULT_MAX_NODES,
                 label: str = "presented") -> SaturationResult:
        cap = env_cap() if cap is None else cap
        rounds = 0
        self._normalize()
        while True:
            if rounds >= cap or len(self.parent) >= max_nodes:
                return SaturationResult(CAP_HIT, None, [-1] * len(self.parent), rounds, len(self.parent))
            rounds += 1
            added = self._complete(max_nodes)
            changed = self._normalize()
            if not added and not changed:
                break
        return self._assemble(label, rounds)

    # -- result ------------------------------------------------------------
    def _assemble(self, label: str, rounds: int) -> SaturationResult:
        find = self.find
        reps = self._reps()
        zero, one = find(self.ZERO), find(self.ONE)
        names: dict[int, str] = {}
        for x in range(len(self.parent)):
            nm = self.names[x]
            if nm is None:
                continue
            r = find(x)
            if r not in names or (len(nm), nm) < (len(names[r]), names[r]):
                names[r] = nm
        names[zero] = "0"
        names[one] = "1"
        # unnamed classes: shortest "x+y" over named summands, else orthosupplement of a named class
        while len(names) < len(reps):
            cand: dict[int, str] = {}
            for a in reps:
                if a not in names:
                    continue
                for b, c in self.rows[a].items():
                    if c in names or b not in names:
                        continue
                    nm = f"{names[a]}+{names[b]}" if (names[a] <= names[b]) else f"{names[b]}+{names[a]}"
                    if c not in cand or (len(nm), nm) < (len(cand[c]), cand[c]):
                        cand[c] = nm
            if not cand:
                for a in reps:
                    if a in names:
                        continue
                    for b, c in self.rows[a].items():
                        if c == one and b in names:
                            nm = f"~({names[b]})"
                            if a not in cand or (len(nm), nm) < (len(cand[a]), cand[a]):
                                cand[a] = nm
            if not cand:  # pragma: no cover - every class is reachable from 0 and 1
                for a in reps:
                    names.setdefault(a, f"t{a}")
                break
            names.update(cand)
        # distinct display names: disambiguate collisions deterministically
        seen: dict[str, int] = {}
        for r in sorted(reps, key=lambda r: (len(names[r]), names[r], r)):
            if names[r] in seen:
                seen[names[r]] += 1
                names[r] = f"{names[r]}#{seen[names[r]]}"
            else:
                seen[names[r]] = 0
        if zero == one:
            order = [zero]
        else:
            mids = sorted((r for r in reps if r not in (zero, one)), key=lambda r: (len(names[r]), names[r]))
            order = [zero] + mids + [one]
        pos = {r: k for k, r in enumerate(order)}
        n = len(order)
        table = [[-1] * n for _ in range(n)]
        for a in order:
            for b, c in self.rows[a].items():
                table[pos[a]][pos[find(b)]] = pos[find(c)]
        A = from_table([names[r] for r in order], pos[zero], pos[one], table, label=label)
        node_class = [pos[find(x)] for x in range(len(self.parent))]
        return SaturationResult(EXACT, A, node_class, rounds, len(self.parent))
