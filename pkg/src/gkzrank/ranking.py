"""Ranking lattices: the cosets b + ZF of degrees missing from M + ZF.

For a parameter beta and a face F, the integer points of beta + QF split into
finitely many ZF-cosets; those avoiding M + ZF are the orbit representatives.
The pairs (F, coset) over all faces, grouped by coset intersection, are the
input of the rank-jump engine.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .cone import ConeFace
from .lattice import (
    AffineCoset,
    LatticeBasis,
    _unimodular_inverse,
    lattice_sum,
    matvec,
    quotient_representatives,
    smith_normal_form,
)
from .semigroup import MonoidModule, mod_face_membership


def parse_rational_vector(beta: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in beta)


def _is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


@dataclass(frozen=True, order=False)
class RankingPair:
    face: ConeFace
    coset: AffineCoset

    @property
    def basepoint(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.coset.basepoint)

    def sort_key(self):
        return (self.face.dim, self.face.columns, self.basepoint)

    def below(self, other: "RankingPair") -> bool:
        """The order b + ZF ⊆ b' + ZF'."""
        return self.coset.contained_in(other.coset)

    def meets(self, other: "RankingPair") -> bool:
        lat = lattice_sum(self.face.span_lattice, other.face.span_lattice)
        return tuple(x - y for x, y in zip(self.coset.basepoint, other.coset.basepoint)) in lat

    def to_json(self) -> list:
        return [list(self.face.columns), list(self.basepoint),
                [list(b) for b in self.face.span_lattice.basis]]


@lru_cache(maxsize=None)
def _slice_frame(lat: LatticeBasis):
    s, u, _ = smith_normal_form(lat.matrix())
    return u, _unimodular_inverse(u)


def integral_slice(beta: Sequence, f: ConeFace) -> Optional[AffineCoset]:
    """The integer points of beta + QF as a coset of the saturated lattice, or None."""
    beta = parse_rational_vector(beta)
    lat = f.saturated_lattice
    k = lat.rank
    if k == 0:
        return AffineCoset.make(tuple(int(x) for x in beta), lat) if _is_integral(beta) else None
    u, uinv = _slice_frame(lat)
    # u maps the saturated lattice onto Z^k x 0, so only the last d - k
    # coordinates of u·beta are constrained
    y = matvec(u, beta)
    if not _is_integral(y[k:]):
        return None
    y0 = [0] * k + [int(x) for x in y[k:]]
    return AffineCoset.make(matvec(uinv, y0), lat)


@lru_cache(maxsize=None)
def _face_quotient(f: ConeFace) -> tuple[tuple[int, ...], ...]:
    return tuple(quotient_representatives(f.saturated_lattice, f.span_lattice))


def slice_cosets(beta: Sequence, f: ConeFace) -> list[AffineCoset]:
    """All ZF-cosets inside the integer points of beta + QF."""
    return list(_slice_cosets(parse_rational_vector(beta), f))


@lru_cache(maxsize=65536)
def _slice_cosets(beta: tuple[Fraction, ...], f: ConeFace) -> tuple[AffineCoset, ...]:
    sl = integral_slice(beta, f)
    if sl is None:
        return ()
    b0 = sl.basepoint
    return tuple(AffineCoset.make(tuple(x + y for x, y in zip(b0, c)), f.span_lattice)
                 for c in _face_quotient(f))


def orbit_representatives(m: MonoidModule, beta: Sequence, f: ConeFace) -> list[AffineCoset]:
    """The ZF-cosets of integer points of beta + QF lying outside M + ZF."""
    return [c for c in slice_cosets(beta, f)
            if not mod_face_membership(m, f, tuple(int(x) for x in c.basepoint))]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def coset_classes(pairs: Sequence[RankingPair]) -> list[list[RankingPair]]:
    """Connected components of the coset-intersection graph."""
    uf = _UnionFind(len(pairs))
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if pairs[i].meets(pairs[j]):
                uf.union(i, j)
    groups: dict[int, list[RankingPair]] = {}
    for i, p in enumerate(pairs):
        groups.setdefault(uf.find(i), []).append(p)
    return [groups[k] for k in sorted(groups)]


@dataclass(frozen=True)
class RankingLattices:
    beta: tuple[Fraction, ...]
    pairs: tuple[RankingPair, ...]
    classes: tuple[tuple[RankingPair, ...], ...]
    face_complex: tuple[ConeFace, ...]

    def reps(self, f: ConeFace) -> list[RankingPair]:
        return [p for p in self.pairs if p.face == f]

    def signature(self) -> str:
        return json.dumps([p.to_json() for p in self.pairs], separators=(",", ":"))

    def signature_hash(self) -> str:
        return hashlib.sha256(self.signature().encode()).hexdigest()[:16]

    def contains_point(self, v: Sequence[int]) -> bool:
        return any(tuple(v) in p.coset for p in self.pairs)


def ranking_lattices(m: MonoidModule, beta: Sequence) -> RankingLattices:
    beta = parse_rational_vector(beta)
    if len(beta) != m.d:
        raise ValueError("parameter has wrong length")
    pairs = []
    for f in m.faces.faces:
        for c in orbit_representatives(m, beta, f):
            pairs.append(RankingPair(f, c))
    pairs.sort(key=RankingPair.sort_key)
    classes = tuple(tuple(c) for c in coset_classes(pairs))
    complex_ = tuple(sorted({p.face for p in pairs}))
    return RankingLattices(beta, tuple(pairs), classes, complex_)


def max_pairs(j_set: Iterable[RankingPair]) -> list[RankingPair]:
    """Pairs not strictly below another pair of the set."""
    items = sorted(set(j_set), key=RankingPair.sort_key)
    return [p for p in items if not any(q != p and p.below(q) for q in items)]


def same_ranking_slab(m: MonoidModule, beta: Sequence, beta2: Sequence) -> bool:
    return ranking_lattices(m, beta).signature() == ranking_lattices(m, beta2).signature()
