"""Exact integer linear algebra: normal forms, lattices and cosets.

Matrices are tuples of rows of Python ints. Lattices are column spans and
are stored in column Hermite normal form, so equal lattices compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import InvalidBoundFunctional, NotASublattice

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def transpose(m: Sequence[Sequence], ncols: Optional[int] = None) -> tuple:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def columns(m: Sequence[Sequence[int]]) -> list[Vector]:
    return [tuple(col) for col in zip(*m)] if m and m[0] else []


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    if not cols:
        return tuple(() for _ in range(nrows))
    return tuple(tuple(c[i] for c in cols) for i in range(nrows))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, nx, y, ny = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
    if a < 0:
        a, x, y = -a, -x, -y
    return x, y, a


def vgcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vector:
    g = vgcd(v)
    return tuple(v) if g in (0, 1) else tuple(x // g for x in v)


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Column Hermite normal form.

    Returns ``(h, u)`` with ``h == m @ u`` and ``u`` unimodular. The nonzero
    columns of ``h`` come first; each has a positive pivot in its first
    nonzero row, pivot rows strictly increase, and the entries to the left of
    a pivot lie in ``[0, pivot)``.
    """
    rows = len(m)
    n = len(m[0]) if rows else 0
    h = [list(r) for r in m]
    u = [list(r) for r in identity(n)]

    def colop(j, k, a, b, c, d):
        # (col_j, col_k) <- (a*col_j + b*col_k, c*col_j + d*col_k)
        for mat in (h, u):
            for r in mat:
                x, y = r[j], r[k]
                r[j], r[k] = a * x + b * y, c * x + d * y

    k = 0
    for i in range(rows):
        if k == n:
            break
        for j in range(k + 1, n):
            a, b = h[i][k], h[i][j]
            if b == 0:
                continue
            x, y, g = xgcd(a, b)
            colop(k, j, x, y, -b // g, a // g)
        piv = h[i][k]
        if piv == 0:
            continue
        if piv < 0:
            colop(k, k, -1, 0, -1, 0)
            piv = -piv
        for j in range(k):
            q = h[i][j] // piv
            if q:
                for mat in (h, u):
                    for r in mat:
                        r[j] -= q * r[k]
        k += 1
    return as_matrix(h), as_matrix(u)


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(s, u, v)`` with ``s == u @ m @ v`` diagonal, u and v unimodular,
    nonnegative diagonal and each diagonal entry dividing the next."""
    rows = len(m)
    n = len(m[0]) if rows else 0
    s = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(n)]

    def rowop(i, k, a, b, c, d):
        for mat in (s, u):
            ri, rk = mat[i], mat[k]
            mat[i] = [a * x + b * y for x, y in zip(ri, rk)]
            mat[k] = [c * x + d * y for x, y in zip(ri, rk)]

    def colop(j, k, a, b, c, d):
        for mat in (s, v):
            for r in mat:
                x, y = r[j], r[k]
                r[j], r[k] = a * x + b * y, c * x + d * y

    t = 0
    while t < min(rows, n):
        nz = [(abs(s[i][j]), i, j) for i in range(t, rows) for j in range(t, n) if s[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        if i0 != t:
            rowop(t, i0, 0, 1, 1, 0)
        if j0 != t:
            colop(t, j0, 0, 1, 1, 0)
        while True:
            while any(s[i][t] for i in range(t + 1, rows)) or any(s[t][j] for j in range(t + 1, n)):
                for i in range(t + 1, rows):
                    a, b = s[t][t], s[i][t]
                    if b and b % a == 0:
                        rowop(t, i, 1, 0, -(b // a), 1)
                    elif b:
                        x, y, g = xgcd(a, b)
                        rowop(t, i, x, y, -b // g, a // g)
                for j in range(t + 1, n):
                    a, b = s[t][t], s[t][j]
                    if b and b % a == 0:
                        colop(t, j, 1, 0, -(b // a), 1)
                    elif b:
                        x, y, g = xgcd(a, b)
                        colop(t, j, x, y, -b // g, a // g)
            p = s[t][t]
            bad = next((i for i in range(t + 1, rows)
                        if any(s[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            # fold the offending row into row t to restore divisibility
            rowop(t, bad, 1, 1, 0, 1)
        if s[t][t] < 0:
            for mat in (s, u):
                mat[t] = [-x for x in mat[t]]
        t += 1
    return as_matrix(s), as_matrix(u), as_matrix(v)


def det(m: Sequence[Sequence[int]]) -> int:
    """Integer determinant by Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def row_reduce(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rref, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1]) if rows else 0


def integer_rank(rows: Iterable[dict[int, int]]) -> int:
    """Rank over Q of sparse integer rows given as {column: value} maps.

    Fraction-free elimination; each reduced row is divided by its content,
    which keeps the entries small on the sparse coboundary matrices.
    """
    pivots: dict[int, dict[int, int]] = {}
    for r in rows:
        row = {c: v for c, v in r.items() if v}
        while row:
            c = min(row)
            pr = pivots.get(c)
            if pr is None:
                pivots[c] = row
                break
            a, b = row[c], pr[c]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {k: fa * v for k, v in row.items()}
            for k, v in pr.items():
                new[k] = new.get(k, 0) - fb * v
            row = {k: v for k, v in new.items() if v}
            if row:
                content = 0
                for v in row.values():
                    content = gcd(content, v)
                if content > 1:
                    row = {k: v // content for k, v in row.items()}
    return len(pivots)


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Integer basis (primitive vectors) of the rational kernel of ``rows``."""
    red, piv = row_reduce(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, pc in zip(red, piv):
            vec[pc] = -r[f]
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append(primitive([int(x * den) for x in vec]))
    return out


@dataclass(frozen=True)
class LatticeBasis:
    """A sublattice of Z^d given by its canonical column HNF basis."""

    ambient_dim: int
    basis: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def pivots(self) -> list[int]:
        return [next(i for i, x in enumerate(b) if x) for b in self.basis]

    def reduce(self, v: Sequence) -> tuple:
        """Canonical representative of ``v`` modulo the lattice.

        Works for rational vectors too; the pivot coordinates end up in
        ``[0, pivot)``.
        """
        w = list(v)
        for b, i in zip(self.basis, self.pivots()):
            q = w[i] // b[i]
            if q:
                w = [x - q * y for x, y in zip(w, b)]
        return tuple(w)

    def __contains__(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence[int]) -> Optional[tuple[int, ...]]:
        """Integer coordinates of ``v`` in the basis, or None if v is not in the lattice."""
        w = list(v)
        coords = []
        for b, i in zip(self.basis, self.pivots()):
            q, r = divmod(w[i], b[i])
            if r:
                return None
            coords.append(q)
            if q:
                w = [x - q * y for x, y in zip(w, b)]
        return tuple(coords) if not any(w) else None

    def contains_lattice(self, other: "LatticeBasis") -> bool:
        return all(b in self for b in other.basis)

    def matrix(self) -> Matrix:
        return from_columns(self.basis, self.ambient_dim)


@lru_cache(maxsize=None)
def _lattice_cached(ambient_dim: int, vectors: tuple[Vector, ...]) -> LatticeBasis:
    if not vectors:
        return LatticeBasis(ambient_dim, ())
    h, _ = hermite_normal_form(from_columns(vectors, ambient_dim))
    cols = tuple(c for c in columns(h) if any(c))
    return LatticeBasis(ambient_dim, cols)


def lattice_from_generators(ambient_dim: int, vectors: Iterable[Sequence[int]]) -> LatticeBasis:
    vecs = tuple(sorted(set(tuple(int(x) for x in v) for v in vectors)))
    for v in vecs:
        if len(v) != ambient_dim:
            raise ValueError("generator has wrong length")
    return _lattice_cached(ambient_dim, vecs)


def lattice_sum(a: LatticeBasis, b: LatticeBasis) -> LatticeBasis:
    return lattice_from_generators(a.ambient_dim, a.basis + b.basis)


@lru_cache(maxsize=None)
def saturate(lat: LatticeBasis) -> LatticeBasis:
    """The lattice Z^d ∩ Q·lat."""
    d, k = lat.ambient_dim, lat.rank
    if k == 0:
        return lat
    s, u, _ = smith_normal_form(lat.matrix())
    uinv = _unimodular_inverse(u)
    return lattice_from_generators(d, [tuple(uinv[i][j] for i in range(d)) for j in range(k)])


def _unimodular_inverse(u: Matrix) -> Matrix:
    n = len(u)
    aug = [list(r) + list(e) for r, e in zip(u, identity(n))]
    red, _ = row_reduce(aug)
    inv = [[x for x in r[n:]] for r in red]
    assert all(x.denominator == 1 for r in inv for x in r)
    return tuple(tuple(int(x) for x in r) for r in inv)


def lattice_index(sup: LatticeBasis, sub: LatticeBasis) -> Optional[int]:
    """Index [sup : sub]; None stands for an infinite index."""
    coords = []
    for b in sub.basis:
        c = sup.coordinates(b)
        if c is None:
            raise NotASublattice("lattice is not contained in the ambient lattice")
        coords.append(c)
    if sub.rank < sup.rank:
        return None
    return abs(det(from_columns(coords, sup.rank)))


def quotient_representatives(sup: LatticeBasis, sub: LatticeBasis) -> list[Vector]:
    """Representatives of sup/sub for a finite-index sublattice.

    Ordered by mixed-radix index over the Smith diagonal.
    """
    k = sup.rank
    if k == 0:
        return [tuple([0] * sup.ambient_dim)]
    coords = []
    for b in sub.basis:
        c = sup.coordinates(b)
        if c is None:
            raise NotASublattice("lattice is not contained in the ambient lattice")
        coords.append(c)
    if sub.rank < k:
        raise ValueError("infinite quotient")
    s, u, _ = smith_normal_form(from_columns(coords, k))
    diag = [s[i][i] for i in range(k)]
    uinv = _unimodular_inverse(u)
    reps = []
    total = 1
    for x in diag:
        total *= x
    for idx in range(total):
        r, rem = [], idx
        for x in reversed(diag):
            rem, digit = divmod(rem, x)
            r.append(digit)
        r.reverse()
        y = matvec(uinv, r)
        reps.append(tuple(sum(yi * b[t] for yi, b in zip(y, sup.basis)) for t in range(sup.ambient_dim)))
    return reps


@dataclass(frozen=True)
class AffineCoset:
    """A translate b + L, stored with a canonical basepoint."""

    basepoint: tuple
    lattice: LatticeBasis

    @staticmethod
    def make(basepoint: Sequence, lattice: LatticeBasis) -> "AffineCoset":
        return AffineCoset(lattice.reduce(tuple(basepoint)), lattice)

    def __contains__(self, v: Sequence) -> bool:
        return tuple(x - y for x, y in zip(v, self.basepoint)) in self.lattice

    def contained_in(self, other: "AffineCoset") -> bool:
        return other.lattice.contains_lattice(self.lattice) and self.basepoint in other


def _solve_integer(m: Matrix, rhs: Sequence[int]) -> Optional[tuple[tuple[int, ...], list[Vector]]]:
    """Integer solution of m x = rhs plus an integer kernel basis, or None."""
    rows = len(m)
    n = len(m[0]) if rows else 0
    h, u = hermite_normal_form(m)
    hc = columns(h)
    w = [0] * n
    resid = list(rhs)
    k = 0
    for c in hc:
        if not any(c):
            break
        i = next(t for t, x in enumerate(c) if x)
        if any(resid[:i]):
            return None
        q, r = divmod(resid[i], c[i])
        if r:
            return None
        w[k] = q
        resid = [x - q * y for x, y in zip(resid, c)]
        k += 1
    if any(resid):
        return None
    x = matvec(u, w)
    ucols = columns(u)
    return tuple(x), [ucols[j] for j in range(k, n)]


def coset_intersection(c1: AffineCoset, c2: AffineCoset) -> Optional[AffineCoset]:
    d = c1.lattice.ambient_dim
    b1, b2 = c1.lattice.basis, c2.lattice.basis
    k1 = len(b1)
    cols = list(b1) + [tuple(-x for x in b) for b in b2]
    diff = tuple(int(y - x) for x, y in zip(c1.basepoint, c2.basepoint))
    if any(isinstance(x, Fraction) and x.denominator != 1 for x in diff):
        return None
    if not cols:
        return c1 if not any(diff) else None
    sol = _solve_integer(from_columns(cols, d), diff)
    if sol is None:
        return None
    x, kernel = sol
    point = tuple(p + sum(x[j] * b1[j][t] for j in range(k1)) for t, p in enumerate(c1.basepoint))
    gens = [tuple(sum(kv[j] * b1[j][t] for j in range(k1)) for t in range(d)) for kv in kernel]
    return AffineCoset.make(point, lattice_from_generators(d, gens))


def solve_nonneg_integer(m: Sequence[Sequence[int]], b: Sequence[int],
                         bound_functional: Sequence) -> Optional[tuple[int, ...]]:
    """Find x in N^n with m x = b, or None.

    ``bound_functional`` must be strictly positive on every column; it bounds
    the search since c·b = sum x_j c·col_j.
    """
    cols = columns(m) if m and m[0] else []
    n = len(cols)
    c = [Fraction(x) for x in bound_functional]
    weights = [sum(ci * x for ci, x in zip(c, col)) for col in cols]
    if any(w <= 0 for w in weights):
        raise InvalidBoundFunctional("bound functional must be positive on every column")
    target = tuple(b)
    if n == 0:
        return () if not any(target) else None
    order = sorted(range(n), key=lambda j: -weights[j])
    ocols = [cols[j] for j in order]
    ow = [weights[j] for j in order]
    failed: set = set()

    def dfs(j: int, rem: tuple) -> Optional[list[int]]:
        budget = sum(ci * x for ci, x in zip(c, rem))
        if not any(rem):
            return [0] * (n - j)
        if budget <= 0 or j == n:
            return None
        key = (j, rem)
        if key in failed:
            return None
        col = ocols[j]
        if j == n - 1:
            q = budget / ow[j]
            if q.denominator == 1 and all(r == q * x for r, x in zip(rem, col)):
                return [int(q)]
            failed.add(key)
            return None
        top = int(budget // ow[j])
        for t in range(top, -1, -1):
            nxt = tuple(r - t * x for r, x in zip(rem, col))
            sub = dfs(j + 1, nxt)
            if sub is not None:
                return [t] + sub
        failed.add(key)
        return None

    found = dfs(0, target)
    if found is None:
        return None
    x = [0] * n
    for pos, j in enumerate(order):
        x[j] = found[pos]
    return tuple(x)
