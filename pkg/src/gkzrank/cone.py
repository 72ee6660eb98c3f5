"""Faces, support functions and normalized volumes of the cone over A."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from .errors import NotAFacet, NotFullLattice, NotPointed
from .lattice import (
    LatticeBasis,
    Matrix,
    Vector,
    as_matrix,
    columns,
    det,
    lattice_from_generators,
    nullspace,
    primitive,
    rank,
    row_reduce,
    saturate,
)


def _dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def check_pointed(a: Sequence[Sequence[int]]) -> tuple[Fraction, ...]:
    """Return c with c·a_i > 0 for every column.

    The certificate is the sum of the inner facet normals of the cone,
    computed inside the linear span of the columns. Raises NotPointed when
    the cone contains a line or a column is zero.
    """
    cols = columns(a)
    d = len(a)
    if any(not any(col) for col in cols):
        raise NotPointed("zero column")
    basis, _ = row_reduce(cols)
    r = len(basis)
    den = 1
    for row in basis:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    basis = [[int(x * den) for x in row] for row in basis]
    coords = [tuple(_dot(row, col) for row in basis) for col in cols]
    normals = [nv for nv, _ in facet_normals(coords, r)]
    if rank(normals) < r:
        raise NotPointed("the cone contains a line")
    total = [sum(nv[i] for nv in normals) for i in range(r)]
    c = tuple(Fraction(sum(total[i] * basis[i][j] for i in range(r))) for j in range(d))
    if not all(_dot(c, col) > 0 for col in cols):
        raise NotPointed("the cone contains a line")
    return c


@dataclass(frozen=True)
class ConeFace:
    columns: tuple[int, ...]
    span_lattice: LatticeBasis
    saturated_lattice: LatticeBasis
    dim: int
    codim: int
    interior_functional: tuple[int, ...] = field(compare=False)

    def __lt__(self, other: "ConeFace") -> bool:
        return (self.dim, self.columns) < (other.dim, other.columns)

    def label(self) -> list[int]:
        return list(self.columns)


@dataclass(frozen=True)
class SupportFunction:
    facet: ConeFace
    coefficients: tuple[int, ...]

    def __call__(self, v: Sequence):
        return _dot(self.coefficients, v)


@dataclass
class FaceLattice:
    matrix: Matrix
    faces: list[ConeFace]
    facet_list: list[SupportFunction]
    by_columns: dict[tuple[int, ...], ConeFace]

    @property
    def d(self) -> int:
        return len(self.matrix)

    @property
    def n(self) -> int:
        return len(self.matrix[0])

    @property
    def full(self) -> ConeFace:
        return self.by_columns[tuple(range(self.n))]

    @property
    def empty(self) -> ConeFace:
        return self.by_columns[()]

    def face(self, cols: Sequence[int]) -> ConeFace:
        return self.by_columns[tuple(sorted(cols))]

    def meet(self, f: ConeFace, g: ConeFace) -> ConeFace:
        return self.by_columns[tuple(sorted(set(f.columns) & set(g.columns)))]

    def facets_containing(self, f: ConeFace) -> list[SupportFunction]:
        s = set(f.columns)
        return [p for p in self.facet_list if s <= set(p.facet.columns)]

    def column_vectors(self, f: ConeFace) -> list[Vector]:
        cols = columns(self.matrix)
        return [cols[i] for i in f.columns]


def _candidate_normals(cols: Sequence[Vector], d: int) -> set[Vector]:
    normals = set()
    for sub in combinations(range(len(cols)), d - 1):
        rows = [cols[i] for i in sub]
        if rank(rows) != d - 1:
            continue
        (nv,) = nullspace(rows, d)
        vals = [_dot(nv, c) for c in cols]
        if all(v >= 0 for v in vals):
            normals.add(primitive(nv))
        elif all(v <= 0 for v in vals):
            normals.add(primitive(tuple(-x for x in nv)))
    return normals


def facet_normals(cols: Sequence[Vector], d: int) -> list[tuple[Vector, frozenset[int]]]:
    """Primitive inner normals of the facets of a full-dimensional cone."""
    out = []
    for nv in sorted(_candidate_normals(cols, d)):
        zero = frozenset(i for i, c in enumerate(cols) if _dot(nv, c) == 0)
        span = rank([cols[i] for i in zero]) if zero else 0
        if span == d - 1:
            out.append((nv, zero))
    return out


def enumerate_faces(a: Sequence[Sequence[int]]) -> FaceLattice:
    """All faces of the cone over the columns of ``a``.

    Requires a pointed cone whose columns generate Z^d.
    """
    m = as_matrix(a)
    d, n = len(m), len(m[0])
    check_pointed(m)
    cols = columns(m)
    full_lat = lattice_from_generators(d, cols)
    if full_lat.basis != lattice_from_generators(d, [tuple(int(i == j) for j in range(d)) for i in range(d)]).basis:
        raise NotFullLattice("columns do not generate the full integer lattice")
    normals = facet_normals(cols, d)
    sets = {frozenset(range(n))}
    frontier = list(sets)
    while frontier:
        nxt = []
        for s in frontier:
            for _, z in normals:
                t = s & z
                if t not in sets:
                    sets.add(t)
                    nxt.append(t)
        frontier = nxt
    faces: dict[tuple[int, ...], ConeFace] = {}
    for s in sets:
        key = tuple(sorted(s))
        fcols = [cols[i] for i in key]
        span = lattice_from_generators(d, fcols)
        h = [0] * d
        for nv, z in normals:
            if s <= z:
                h = [x + y for x, y in zip(h, nv)]
        faces[key] = ConeFace(key, span, saturate(span), span.rank, d - span.rank, tuple(h))
    facet_list = [SupportFunction(faces[tuple(sorted(z))], nv) for nv, z in normals]
    ordered = sorted(faces.values())
    return FaceLattice(m, ordered, facet_list, faces)


def support_function(facet: ConeFace, lattice: FaceLattice) -> SupportFunction:
    for p in lattice.facet_list:
        if p.facet.columns == facet.columns:
            return p
    raise NotAFacet(f"{list(facet.columns)} is not a facet")


def interior_functional(f: ConeFace, lattice: FaceLattice) -> tuple[int, ...]:
    """Sum of the support functions of the facets containing ``f``."""
    return f.interior_functional


def cone_shift_membership(beta: Sequence, v: Sequence[int], lattice: FaceLattice) -> bool:
    """Whether v satisfies p_F(v) >= p_F(beta) for every facet F."""
    return all(p(v) >= p(beta) for p in lattice.facet_list)


# ---------------------------------------------------------------------------
# volumes


def _lattice_coordinates(f: ConeFace, lattice: FaceLattice) -> list[tuple[int, ...]]:
    pts = []
    for v in lattice.column_vectors(f):
        c = f.span_lattice.coordinates(v)
        assert c is not None
        pts.append(c)
    return pts


def _affine_rank(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([[x - y for x, y in zip(p, p0)] for p in points[1:]]) if len(points) > 1 else 0


def pulling_triangulation(points: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Pulling triangulation of a full-dimensional point configuration.

    Vertices are pulled in lexicographic order of the points. Returns
    simplices as sorted index tuples.
    """
    k = len(points[0])
    idx = list(range(len(points)))
    return _pull(points, idx, k)


def _pull(points, idx: list[int], k: int) -> list[tuple[int, ...]]:
    if len(idx) == k + 1:
        return [tuple(sorted(idx))]
    v0 = min(idx, key=lambda i: tuple(points[i]))
    lifted = [(1,) + tuple(points[i]) for i in idx]
    out = []
    for _, zero in facet_normals(lifted, k + 1):
        fidx = [idx[j] for j in sorted(zero)]
        if v0 in fidx:
            continue
        sub = _reembed(points, fidx)
        for simp in _pull(sub, list(range(len(fidx))), k - 1):
            out.append(tuple(sorted([v0] + [fidx[j] for j in simp])))
    return out


def _reembed(points, idx: list[int]) -> list[tuple[Fraction, ...]]:
    """Coordinates of an affine point set in a basis of its own affine span."""
    p0 = points[idx[0]]
    diffs = [[Fraction(x) - y for x, y in zip(points[i], p0)] for i in idx]
    _, piv = row_reduce(diffs)
    # the reduced rows have an identity block on the pivot columns, so the
    # pivot entries of a vector are its coordinates in that row basis
    return [tuple(dv[c] for c in piv) for dv in diffs]


def placing_triangulation(points: Sequence[Sequence], rng: random.Random) -> list[tuple[int, ...]]:
    """Placing triangulation of a full-dimensional configuration in a random order."""
    k = len(points[0])
    order = list(range(len(points)))
    rng.shuffle(order)
    base: list[int] = []
    for i in order:
        if _affine_rank([points[j] for j in base + [i]]) == len(base):
            base.append(i)
        if len(base) == k + 1:
            break
    simplices = [tuple(sorted(base))]
    for i in order:
        if i in base:
            continue
        faces: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        for s in simplices:
            for j in range(len(s)):
                faces.setdefault(s[:j] + s[j + 1:], []).append(s)
        new = []
        for fct, owners in faces.items():
            if len(owners) != 1:
                continue
            (s,) = owners
            opposite = next(x for x in s if x not in fct)
            if _orient(points, fct, opposite) * _orient(points, fct, i) < 0:
                new.append(tuple(sorted(fct + (i,))))
        simplices.extend(new)
    return simplices


def _orient(points, fct: tuple[int, ...], q: int) -> int:
    p0 = points[fct[0]]
    rows = [[Fraction(x) - y for x, y in zip(points[j], p0)] for j in fct[1:]]
    rows.append([Fraction(x) - y for x, y in zip(points[q], p0)])
    dt = _qdet(rows)
    return (dt > 0) - (dt < 0)


def _qdet(rows) -> Fraction:
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            out = -out
        out *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return out


def simplex_volume(points, simplex: tuple[int, ...]) -> int:
    p0 = points[simplex[0]]
    rows = [[x - y for x, y in zip(points[j], p0)] for j in simplex[1:]]
    return abs(det(rows))


def normalized_volume(f: ConeFace, lattice: FaceLattice, method: str = "pulling",
                      seed: int = 0) -> int:
    """dim(F)! times the Euclidean volume of conv(F ∪ 0), measured in ZF.

    The empty face has volume 1.
    """
    if f.dim == 0:
        return 1
    # repeated columns do not change the hull and would break the pulling recursion
    pts = list(dict.fromkeys([tuple([0] * f.dim)] + _lattice_coordinates(f, lattice)))
    if method == "pulling":
        tri = pulling_triangulation(pts)
    else:
        tri = placing_triangulation(pts, random.Random(seed))
    return sum(simplex_volume(pts, s) for s in tri)


_VOL_CACHE: dict = {}


def face_volume(f: ConeFace, lattice: FaceLattice) -> int:
    key = (lattice.matrix, f.columns)
    if key not in _VOL_CACHE:
        _VOL_CACHE[key] = normalized_volume(f, lattice)
    return _VOL_CACHE[key]
