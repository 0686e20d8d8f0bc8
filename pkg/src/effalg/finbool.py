"""Finite Boolean algebras ``2^[n]`` as bitmasks and their Stone duals.

Points of ``[n]`` are 0-based internally and 1-based in every serialised form.
A pair ``(i, j)`` of ``[n] x [m]`` is flattened to ``i * m + j``, which is the
usual ``(i - 1) * m + j`` in 1-based terms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

MAX_ARITY = 64


class ArityError(ValueError):
    pass


def _check_arity(*ns: int) -> None:
    for n in ns:
        if n < 0:
            raise ArityError(f"negative arity {n}")
        if n > MAX_ARITY:
            raise ArityError(f"arity {n} exceeds the bitmask cap {MAX_ARITY}")


def mask_of(points: Sequence[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def points_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class FinMap:
    """A function ``[dom] -> [cod]`` given by its image list."""
    dom: int
    cod: int
    image: tuple[int, ...]

    def __post_init__(self):
        _check_arity(self.dom, self.cod)
        if len(self.image) != self.dom:
            raise ValueError("image length must equal the domain size")
        for v in self.image:
            if not 0 <= v < self.cod:
                raise ValueError(f"image value {v} outside [0, {self.cod})")

    def __call__(self, j: int) -> int:
        return self.image[j]

    def compose(self, other: "FinMap") -> "FinMap":
        """``self o other``."""
        if other.cod != self.dom:
            raise ArityError("maps are not composable")
        return FinMap(other.dom, self.cod, tuple(self.image[x] for x in other.image))

    @property
    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.cod

    @staticmethod
    def identity(n: int) -> "FinMap":
        return FinMap(n, n, tuple(range(n)))


@dataclass(frozen=True)
class BoolMorphism:
    """A Boolean-algebra morphism ``2^[n] -> 2^[m]`` stored by its atom images."""
    n: int
    m: int
    atom_images: tuple[int, ...]

    def __post_init__(self):
        _check_arity(self.n, self.m)
        if len(self.atom_images) != self.n:
            raise ValueError("need exactly one atom image per point of the domain")
        seen = 0
        for img in self.atom_images:
            if img < 0 or img >> self.m:
                raise ValueError("atom image outside 2^[m]")
            if img & seen:
                raise ValueError("atom images must be pairwise disjoint")
            seen |= img
        if seen != (1 << self.m) - 1:
            raise ValueError("atom images must cover [m]")

    def __call__(self, X: int) -> int:
        out = 0
        for i in points_of(X):
            out |= self.atom_images[i]
        return out

    def compose(self, other: "BoolMorphism") -> "BoolMorphism":
        """``self o other``."""
        if other.m != self.n:
            raise ArityError("morphisms are not composable")
        return BoolMorphism(other.n, self.m, tuple(self(img) for img in other.atom_images))

    @staticmethod
    def identity(n: int) -> "BoolMorphism":
        return BoolMorphism(n, n, tuple(1 << i for i in range(n)))

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m,
                "atom_images": [[p + 1 for p in points_of(img)] for img in self.atom_images]}

    @staticmethod
    def from_json(obj: dict) -> "BoolMorphism":
        return BoolMorphism(obj["n"], obj["m"],
                            tuple(mask_of([p - 1 for p in pts]) for pts in obj["atom_images"]))


def dualize(t: FinMap) -> BoolMorphism:
    """Preimage morphism ``2^[cod] -> 2^[dom]`` of ``t: [dom] -> [cod]``."""
    imgs = [0] * t.cod
    for j, i in enumerate(t.image):
        imgs[i] |= 1 << j
    return BoolMorphism(t.cod, t.dom, tuple(imgs))


def dualize_inv(f: BoolMorphism) -> FinMap:
    """Recover ``t: [m] -> [n]`` with ``t(j)`` the unique ``i`` such that ``j`` lies in ``f({i})``."""
    owner = [-1] * f.m
    for i, img in enumerate(f.atom_images):
        for j in points_of(img):
            if owner[j] != -1:
                raise ValueError("atom images are not a partition")
            owner[j] = i
    if -1 in owner:
        raise ValueError("atom images are not a partition")
    return FinMap(f.m, f.n, tuple(owner))


def all_finmaps(dom: int, cod: int) -> Iterator[FinMap]:
    _check_arity(dom, cod)
    for img in itertools.product(range(cod), repeat=dom):
        yield FinMap(dom, cod, img)


def all_bool_morphisms(n: int, m: int) -> Iterator[BoolMorphism]:
    """Every morphism ``2^[n] -> 2^[m]`` (there are ``n**m`` of them)."""
    for t in all_finmaps(m, n):
        yield dualize(t)


def pair_index(i: int, j: int, m: int) -> int:
    return i * m + j


def free_product(n: int, m: int) -> tuple[int, BoolMorphism, BoolMorphism]:
    """``2^[n] * 2^[m] = 2^[n*m]`` with its left and right coprojections."""
    _check_arity(n, m, n * m)
    left = tuple(mask_of([i * m + j for j in range(m)]) for i in range(n))
    right = tuple(mask_of([i * m + j for i in range(n)]) for j in range(m))
    return n * m, BoolMorphism(n, n * m, left), BoolMorphism(m, n * m, right)


def rectangle(X: int, Y: int, m: int) -> int:
    """Bitmask of ``X x Y`` inside ``[n] x [m]``."""
    out = 0
    ys = points_of(Y)
    for i in points_of(X):
        for j in ys:
            out |= 1 << (i * m + j)
    return out


def star_map(s: BoolMorphism, t: BoolMorphism) -> BoolMorphism:
    """``s * t``: atom ``(i, j)`` goes to the rectangle ``s({i}) x t({j})``."""
    _check_arity(s.n * t.n, s.m * t.m)
    imgs = []
    for i in range(s.n):
        for j in range(t.n):
            imgs.append(rectangle(s.atom_images[i], t.atom_images[j], t.m))
    return BoolMorphism(s.n * t.n, s.m * t.m, tuple(imgs))


def star_finmap(a: FinMap, b: FinMap) -> FinMap:
    """Dual of ``star_map``: the product map ``a x b`` on flattened pairs."""
    img = tuple(a.image[i] * b.cod + b.image[j] for i in range(a.dom) for j in range(b.dom))
    return FinMap(a.dom * b.dom, a.cod * b.cod, img)
