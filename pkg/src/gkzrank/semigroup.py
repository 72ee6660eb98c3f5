"""Membership tests for degree monoids M = ⋃ (b_i + NA)."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence

from .cone import ConeFace, FaceLattice, enumerate_faces
from .lattice import Matrix, Vector, as_matrix, columns, solve_nonneg_integer


@dataclass
class MonoidModule:
    """An NA-monoid given by finitely many generators over NA.

    The default generator set {0} gives NA itself.
    """

    matrix: Matrix
    generators: tuple[Vector, ...] = ()
    faces: Optional[FaceLattice] = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.matrix = as_matrix(self.matrix)
        d = len(self.matrix)
        gens = self.generators or (tuple([0] * d),)
        self.generators = tuple(sorted(set(tuple(int(x) for x in g) for g in gens)))
        if any(len(g) != d for g in self.generators):
            raise ValueError("generator has wrong length")
        if self.faces is None:
            self.faces = enumerate_faces(self.matrix)
        for g in self.generators:
            for h in self.generators:
                if not semigroup_membership(self, tuple(x + y for x, y in zip(g, h))):
                    raise ValueError("generators do not define an NA-monoid")

    @property
    def d(self) -> int:
        return len(self.matrix)

    @property
    def is_semigroup(self) -> bool:
        return self.generators == (tuple([0] * self.d),)


def _in_na(m: MonoidModule, v: Vector) -> bool:
    key = ("na", v)
    if key not in m._cache:
        c = m.faces.empty.interior_functional
        if sum(x * y for x, y in zip(c, v)) < 0:
            m._cache[key] = False
        else:
            m._cache[key] = solve_nonneg_integer(m.matrix, v, c) is not None
    return m._cache[key]


def semigroup_membership(m: MonoidModule, v: Sequence[int]) -> bool:
    """Whether v lies in M."""
    v = tuple(int(x) for x in v)
    return any(_in_na(m, tuple(x - y for x, y in zip(v, g))) for g in m.generators)


def mod_face_membership(m: MonoidModule, f: ConeFace, v: Sequence[int]) -> bool:
    """Whether v lies in M + ZF.

    Searches x in N^(columns off F) with v - b_i - Ax in ZF. The interior
    functional h of F vanishes on ZF and is positive off F, so it fixes the
    total weight sum x_j h(a_j) = h(v - b_i) and the search is finite.
    """
    v = tuple(int(x) for x in v)
    key = ("face", f.columns, f.span_lattice.reduce(v))
    if key in m._cache:
        return m._cache[key]
    h = f.interior_functional
    cols = columns(m.matrix)
    off = [cols[i] for i in range(len(cols)) if i not in set(f.columns)]
    weights = [sum(x * y for x, y in zip(h, c)) for c in off]
    lat = f.span_lattice
    result = False
    for g in m.generators:
        start = lat.reduce(tuple(x - y for x, y in zip(v, g)))
        budget = sum(x * y for x, y in zip(h, start))
        if budget < 0:
            continue
        if _lift_search(lat, off, weights, start, budget):
            result = True
            break
    m._cache[key] = result
    return result


def _lift_search(lat, off, weights, start, budget) -> bool:
    seen: set = set()
    stack = [(0, start, budget)]
    while stack:
        j, rem, left = stack.pop()
        if left == 0:
            if not any(rem):
                return True
            continue
        if j == len(off) or (j, rem) in seen:
            continue
        seen.add((j, rem))
        col, w = off[j], weights[j]
        for t in range(left // w + 1):
            nxt = lat.reduce(tuple(r - t * c for r, c in zip(rem, col)))
            stack.append((j + 1, nxt, left - t * w))
    return False


def saturation_membership(f: ConeFace, v: Sequence[int], lattice: FaceLattice) -> bool:
    """Whether v lies in R≥0 F ∩ ZF."""
    if tuple(v) not in f.span_lattice:
        return False
    return all(p(v) >= 0 for p in lattice.facet_list) and all(
        p(v) == 0 for p in lattice.facets_containing(f)
    )


def enumerate_gaps(m: MonoidModule, box: Sequence[tuple[int, int]]) -> set[Vector]:
    """Points of the box in the saturation of NA (shifted by the generators) but not in M."""
    out = set()
    lattice = m.faces
    full = lattice.full
    for v in product(*(range(lo, hi + 1) for lo, hi in box)):
        if semigroup_membership(m, v):
            continue
        if any(saturation_membership(full, tuple(x - y for x, y in zip(v, g)), lattice)
               for g in m.generators):
            out.add(tuple(v))
    return out


def brute_force_members(m: MonoidModule, bound: int) -> set[Vector]:
    """All b_i + Ax with every x_j <= bound; a membership oracle for tests."""
    cols = columns(m.matrix)
    pts = set()
    for x in product(range(bound + 1), repeat=len(cols)):
        s = [sum(xi * c[t] for xi, c in zip(x, cols)) for t in range(m.d)]
        for g in m.generators:
            pts.add(tuple(a + b for a, b in zip(s, g)))
    return pts
