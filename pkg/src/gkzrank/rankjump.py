"""The rank-jump engine.

Each class of ranking pairs spans a cellular complex on the simplex whose
vertices are the faces of its maximal pairs. The first page of the
Euler-Koszul spectral sequence has ranks r(p, q) read off from that complex;
image ranks of the first differential come from a recursion on auxiliary
ranking modules. The rank jump is the second partial characteristic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from .cone import ConeFace, FaceLattice, face_volume
from .errors import InvariantViolation, RecursionDepthExceeded
from .cone import _qdet
from .lattice import columns, integer_rank, nullspace, rank
from .ranking import (
    RankingPair,
    coset_classes,
    max_pairs,
    parse_rational_vector,
    ranking_lattices,
    slice_cosets,
)
from .semigroup import MonoidModule


@dataclass(frozen=True)
class CellularPage:
    class_id: int
    beta: tuple
    pairs: tuple[RankingPair, ...]
    vertex_faces: tuple[ConeFace, ...]
    # cells[p] lists the (p+1)-subsets of vertex indices in lexicographic order
    cells: tuple[tuple[tuple[int, ...], ...], ...]
    cell_faces: tuple[tuple[ConeFace, ...], ...]
    # pairs on F_s whose coset lies in the degree set of every vertex of s
    cell_pairs: tuple[tuple[tuple[RankingPair, ...], ...], ...]
    lattice: FaceLattice = field(compare=False, repr=False)
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def top(self) -> int:
        return len(self.vertex_faces) - 1

    @property
    def d(self) -> int:
        return self.lattice.d

    @property
    def counts(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(len(c) for c in level) for level in self.cell_pairs)

    def is_simple(self) -> bool:
        return len(self.vertex_faces) == 1


def _covered(pair: RankingPair, f: ConeFace, pairs: Sequence[RankingPair]) -> bool:
    """Whether the coset of ``pair`` lies in the union of the ZF-cosets among ``pairs``."""
    return any(q.face == f and pair.below(q) for q in pairs)


def build_page(j_class: Sequence[RankingPair], lattice: FaceLattice, beta: Sequence,
               class_id: int = 0, vertex_order: Optional[Sequence[int]] = None) -> CellularPage:
    """The cover of a class by the degree sets of its maximal faces.

    A cell carries the intersection of the degree sets of its vertices. That
    intersection is a union of cosets of the meet face, recorded as pairs.
    """
    pairs = tuple(sorted(set(j_class), key=RankingPair.sort_key))
    if not pairs:
        raise ValueError("empty class")
    verts = tuple(sorted({p.face for p in max_pairs(pairs)}))
    if vertex_order is not None:
        if sorted(vertex_order) != list(range(len(verts))):
            raise ValueError("vertex_order must be a permutation of the vertices")
        verts = tuple(verts[i] for i in vertex_order)
    cells, faces, cpairs = [], [], []
    for k in range(1, len(verts) + 1):
        level = tuple(combinations(range(len(verts)), k))
        fs, ps = [], []
        for s in level:
            common = set(verts[s[0]].columns)
            for i in s[1:]:
                common &= set(verts[i].columns)
            f = lattice.face(sorted(common))
            fs.append(f)
            ps.append(tuple(pr for pr in pairs if pr.face == f
                            and all(_covered(pr, verts[i], pairs) for i in s)))
        cells.append(level)
        faces.append(tuple(fs))
        cpairs.append(tuple(ps))
    return CellularPage(class_id, parse_rational_vector(beta), pairs, verts, tuple(cells),
                        tuple(faces), tuple(cpairs), lattice)


def cell_covers(page: CellularPage, p: int, idx: int, pair: RankingPair) -> bool:
    """Whether the coset of ``pair`` lies in the degree set of the cell."""
    return any(pair.below(q) for q in page.cell_pairs[p][idx])


def _vol(page: CellularPage, f: ConeFace) -> int:
    return face_volume(f, page.lattice)


def first_page_rank(page: CellularPage, p: int, q: int) -> int:
    if p < 0 or p > page.top or q < 0:
        return 0
    return sum(n * comb(f.codim, q) * _vol(page, f)
               for f, n in zip(page.cell_faces[p], page.counts[p]))


# ---------------------------------------------------------------------------
# circuits


def _coboundary_vector(page: CellularPage, p: int, cell: tuple[int, ...]) -> list[int]:
    """The coboundary of one p-cell in the full simplex on the vertices."""
    out = []
    for t in page.cells[p + 1]:
        if set(cell) <= set(t):
            (extra,) = set(t) - set(cell)
            out.append((-1) ** t.index(extra))
        else:
            out.append(0)
    return out


def _ordered_cells(page: CellularPage, p: int, order: Optional[Sequence[int]]) -> list[int]:
    n = len(page.cells[p])
    return list(order) if order is not None else list(range(n))


def circuits(page: CellularPage, p: int, j_index: int,
             order: Optional[Sequence[int]] = None) -> set[frozenset[int]]:
    """Circuits for the j-th p-cell (1-based) in the given ordering.

    A subset of {1..j} containing j is a circuit when the coboundary vectors
    of its cells form a minimal linearly dependent set: the image of cell j
    meets the span of the images of the other cells, and no smaller set does.
    """
    seq = _ordered_cells(page, p, order)
    if not 1 < j_index <= len(seq) or p + 1 > page.top:
        return set()
    vecs = {i + 1: _coboundary_vector(page, p, page.cells[p][seq[i]]) for i in range(j_index)}
    found: set[frozenset[int]] = set()
    others = list(range(1, j_index))
    for k in range(1, j_index):
        for sub in combinations(others, k):
            lam = frozenset(sub + (j_index,))
            if any(c <= lam for c in found):
                continue
            rows = [vecs[i] for i in sorted(lam)]
            if rank(rows) == len(rows) - 1 and all(
                rank([vecs[i] for i in sorted(lam - {x})]) == len(rows) - 1 for x in lam
            ):
                found.add(lam)
    return found


# ---------------------------------------------------------------------------
# image ranks


def n_set(page: CellularPage, p: int, idx: int) -> frozenset[RankingPair]:
    """Pairs whose coset lies in the degree sets of cell idx and some other p-cell."""
    out = set()
    for pr in page.pairs:
        if not cell_covers(page, p, idx, pr):
            continue
        if any(t != idx and cell_covers(page, p, t, pr) for t in range(len(page.cells[p]))):
            out.add(pr)
    return frozenset(out)


def _span_codim(page: CellularPage, cols: set[int]) -> int:
    vecs = [columns(page.lattice.matrix)[i] for i in sorted(cols)]
    return page.d - (rank(vecs) if vecs else 0)


def recursive_image_rank(page: CellularPage, p: int, q: int,
                         order: Optional[Sequence[int]] = None,
                         _memo: Optional[dict] = None) -> int:
    """Image rank of the first differential by inclusion-exclusion over circuits.

    The auxiliary H_0 terms recurse into smaller ranking modules. The result
    can depend on the cell order when circuits overlap in several cells;
    see ``recursion_is_consistent``.
    """
    if p < 0 or p + 1 > page.top or q < 0:
        return 0
    memo = {} if _memo is None else _memo
    seq = _ordered_cells(page, p, order)
    fs = page.cell_faces[p]
    parent = frozenset(page.pairs)
    n_sets = [n_set(page, p, i) for i in range(len(fs))]
    total = 0
    for i, f in enumerate(fs):
        c = comb(f.codim, q)
        if c and n_sets[i]:
            total += c * _h0(n_sets[i], page, parent, memo)
    for j in range(2, len(seq) + 1):
        sj = seq[j - 1]
        ups = sorted(circuits(page, p, j, seq), key=sorted)
        if not ups:
            continue
        n_lam = []
        for lam in ups:
            others = [seq[i - 1] for i in lam if i != j]
            n_lam.append(frozenset(pr for pr in n_sets[sj]
                                   if any(cell_covers(page, p, o, pr) for o in others)))
        for k in range(1, len(ups) + 1):
            for sub in combinations(range(len(ups)), k):
                cols: set[int] = set()
                for a in sub:
                    for i in ups[a]:
                        cols |= set(fs[seq[i - 1]].columns)
                c = comb(_span_codim(page, cols), q)
                if not c:
                    continue
                inter = frozenset.intersection(*(n_lam[a] for a in sub))
                if inter:
                    total -= (-1) ** (k + 1) * c * _h0(inter, page, parent, memo)
    return total


def _h0(pairs: frozenset[RankingPair], outer: CellularPage, parent: frozenset,
        memo: dict) -> int:
    """Rank of H_0 of the ranking module on the given pairs.

    Splits into coset classes; a single-vertex class is counted directly and
    any other class through its first partial characteristic, since the
    zeroth one vanishes.
    """
    if not pairs:
        return 0
    if pairs == parent or not pairs < parent:
        raise RecursionDepthExceeded("auxiliary module does not shrink")
    if pairs in memo:
        return memo[pairs]
    total = 0
    for comp in coset_classes(sorted(pairs, key=RankingPair.sort_key)):
        page = build_page(comp, outer.lattice, outer.beta)
        if page.is_simple():
            total += page.counts[0][0] * _vol(page, page.vertex_faces[0])
        else:
            total += recursive_characteristic(page, 1, _memo=memo)
    memo[pairs] = total
    return total


def _characteristic(page: CellularPage, t: int, im) -> int:
    total = 0
    for p in range(page.top + 1):
        for q in range(page.d + 1):
            if p - q > -t:
                total += (-1) ** (p - q + t + 1) * first_page_rank(page, p, q)
            elif p - q == -t:
                total -= im(p, q)
    return total


def recursive_characteristic(page: CellularPage, t: int, order: Optional[dict] = None,
                             _memo: Optional[dict] = None) -> int:
    """chi_t with image ranks from the circuit recursion.

    ``order`` optionally maps p to a permutation of the p-cells.
    """
    memo = {} if _memo is None else _memo
    return _characteristic(
        page, t, lambda p, q: recursive_image_rank(page, p, q, (order or {}).get(p), memo))


def alternating_first_page_sum(page: CellularPage) -> int:
    return sum((-1) ** (p - q) * first_page_rank(page, p, q)
               for p in range(page.top + 1) for q in range(page.d + 1))


# ---------------------------------------------------------------------------
# atoms: the order-free route to image ranks
#
# Every ZG-coset c + ZG inside the integral slice of beta + QG is an atom. The
# H_0 of a simple module on (F, b) splits over the atoms below (F, b), with
# the weight of an atom fixed by requiring the weights below any atom to add
# up to the volume of its face. In the generic degree of an atom the first
# differential is the cellular coboundary on the cells whose degree sets
# contain it, with the wedge spaces of the cell faces as coefficients.


_WEIGHTS: dict = {}


def atom_weight(lattice: FaceLattice, beta: tuple, g: ConeFace, c) -> int:
    key = (lattice.matrix, beta, g.columns, c)
    if key not in _WEIGHTS:
        w = face_volume(g, lattice)
        for h in lattice.faces:
            if h.dim < g.dim and set(h.columns) < set(g.columns):
                for e in slice_cosets(beta, h):
                    if e.contained_in(c):
                        w -= atom_weight(lattice, beta, h, e)
        _WEIGHTS[key] = w
    return _WEIGHTS[key]


def atoms(page: CellularPage) -> list[tuple[ConeFace, object]]:
    if "atoms" not in page._memo:
        page._memo["atoms"] = _atoms(page)
    return page._memo["atoms"]


def _atoms(page: CellularPage) -> list[tuple[ConeFace, object]]:
    seen = {}
    for pr in max_pairs(page.pairs):
        for g in page.lattice.faces:
            if set(g.columns) <= set(pr.face.columns):
                for c in slice_cosets(page.beta, g):
                    if c.contained_in(pr.coset):
                        seen[(g.columns, c)] = (g, c)
    return [seen[k] for k in sorted(seen, key=lambda k: (len(k[0]), k[0], k[1].basepoint))]


def _in_cell(page: CellularPage, p: int, idx: int, g: ConeFace, c) -> bool:
    f = page.cell_faces[p][idx]
    return set(g.columns) <= set(f.columns) and any(
        c.contained_in(pr.coset) for pr in page.cell_pairs[p][idx])


_WEDGE: dict = {}


def wedge_basis(lattice: FaceLattice, f: ConeFace, q: int) -> list[tuple[int, ...]]:
    """A basis of the q-th exterior power of the annihilator of F, in minor coordinates."""
    key = (lattice.matrix, f.columns, q)
    if key not in _WEDGE:
        d = lattice.d
        vecs = lattice.column_vectors(f)
        perp = nullspace(vecs, d) if vecs else [tuple(int(i == j) for j in range(d)) for i in range(d)]
        out = []
        for sub in combinations(perp, q):
            minors = [_qdet([[v[i] for i in idx] for v in sub]) for idx in combinations(range(d), q)]
            # integer vectors have integer minors
            assert all(x.denominator == 1 for x in minors)
            out.append(tuple(int(x) for x in minors))
        _WEDGE[key] = out
    return _WEDGE[key]


def atom_differential_rank(page: CellularPage, p: int, q: int, g: ConeFace, c) -> int:
    if p + 1 > page.top:
        return 0
    src = [i for i in range(len(page.cells[p])) if _in_cell(page, p, i, g, c)]
    dst = [i for i in range(len(page.cells[p + 1])) if _in_cell(page, p + 1, i, g, c)]
    if not src or not dst:
        return 0
    width = comb(page.d, q)
    col_of = {k: n * width for n, k in enumerate(dst)}
    dst_set = {page.cells[p + 1][k]: k for k in dst}
    rows = []
    for i in src:
        s = page.cells[p][i]
        # cofaces of s among the destination cells, with their signs
        cof = []
        for k, t in ((dst_set.get(tuple(sorted(s + (x,)))), tuple(sorted(s + (x,))))
                     for x in range(len(page.vertex_faces)) if x not in s):
            if k is not None:
                (extra,) = set(t) - set(s)
                cof.append((col_of[k], (-1) ** t.index(extra)))
        for w in wedge_basis(page.lattice, page.cell_faces[p][i], q):
            row = {}
            for base, sign in cof:
                for j, x in enumerate(w):
                    if x:
                        row[base + j] = sign * int(x)
            rows.append(row)
    return integer_rank(rows)


def image_rank(page: CellularPage, p: int, q: int) -> int:
    """Rank of the image of the first differential leaving position (p, -q).

    Computed atom by atom: each atom sees a full simplex on the vertices
    containing it, and the differential there is an explicit integer matrix.
    """
    key = ("im", p, q)
    if key not in page._memo:
        page._memo[key] = _image_rank(page, p, q)
    return page._memo[key]


def _image_rank(page: CellularPage, p: int, q: int) -> int:
    if p < 0 or p + 1 > page.top or q < 0 or q > page.d:
        return 0
    total = 0
    for g, c in atoms(page):
        w = atom_weight(page.lattice, page.beta, g, c)
        if w:
            total += w * atom_differential_rank(page, p, q, g, c)
    return total


def partial_characteristic(page: CellularPage, t: int) -> int:
    """chi_t from first-page ranks and atom image ranks."""
    return _characteristic(page, t, lambda p, q: image_rank(page, p, q))


def recursion_is_consistent(page: CellularPage) -> bool:
    """Whether the circuit recursion reproduces every atom image rank."""
    memo: dict = {}
    try:
        return all(recursive_image_rank(page, p, q, _memo=memo) == image_rank(page, p, q)
                   for p in range(min(page.top, page.d + 1))
                   for q in range(p, min(p + 2, page.d) + 1))
    except RecursionDepthExceeded:
        return False


# ---------------------------------------------------------------------------
# reports


@dataclass
class ClassReport:
    class_id: int
    pairs: tuple[RankingPair, ...]
    faces: tuple[ConeFace, ...]
    first_page: dict[tuple[int, int], int]
    images: dict[tuple[int, int], int]
    chi: dict[int, int]
    j_class: int
    recursion_consistent: bool

    def to_json(self) -> dict:
        return {
            "reps": [p.to_json() for p in self.pairs],
            "faces": [list(f.columns) for f in self.faces],
            "j_class": self.j_class,
            "chi_table": {str(t): v for t, v in sorted(self.chi.items())},
            "first_page": [[p, q, v] for (p, q), v in sorted(self.first_page.items())],
            "images": [[p, q, v] for (p, q), v in sorted(self.images.items())],
            "recursion_consistent": self.recursion_consistent,
        }


@dataclass
class RankJumpReport:
    beta: tuple[Fraction, ...]
    vol_a: int
    classes: list[ClassReport]
    j: int

    @property
    def rank(self) -> int:
        return self.vol_a + self.j

    def to_json(self) -> dict:
        return {
            "beta": [_fmt(x) for x in self.beta],
            "vol_A": self.vol_a,
            "classes": [c.to_json() for c in self.classes],
            "j": self.j,
            "rank": self.rank,
        }


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def class_report(page: CellularPage, cross_check: bool = True) -> ClassReport:
    fp = {(p, q): first_page_rank(page, p, q)
          for p in range(page.top + 1) for q in range(page.d + 1)}
    # chi_0, chi_1 and chi_2 only see images with p <= q <= p + 2
    im = {(p, q): image_rank(page, p, q)
          for p in range(min(page.top, page.d + 1)) for q in range(p, min(p + 2, page.d) + 1)}
    for (p, q), v in im.items():
        if v > min(fp[(p, q)], fp[(p + 1, q)]):
            raise InvariantViolation(f"image rank exceeds its source or target at {(p, q)}")
    chi = {t: partial_characteristic(page, t) for t in (0, 1, 2)}
    if chi[0] != 0:
        raise InvariantViolation(f"chi_0 = {chi[0]} on class {page.class_id}")
    if alternating_first_page_sum(page) != 0:
        raise InvariantViolation(f"first page alternating sum nonzero on class {page.class_id}")
    if any(v < 0 for v in list(fp.values()) + list(im.values())):
        raise InvariantViolation("negative rank on the first page")
    consistent = recursion_is_consistent(page) if cross_check else True
    return ClassReport(page.class_id, page.pairs, page.vertex_faces, fp, im, chi, chi[2],
                       consistent)


def pages(m: MonoidModule, beta: Sequence) -> list[CellularPage]:
    rl = ranking_lattices(m, beta)
    return [build_page(c, m.faces, rl.beta, i) for i, c in enumerate(rl.classes)]


def rank_jump(m: MonoidModule, beta: Sequence, cross_check: bool = True) -> RankJumpReport:
    rl = ranking_lattices(m, beta)
    reports = [class_report(build_page(c, m.faces, rl.beta, i), cross_check)
               for i, c in enumerate(rl.classes)]
    j = sum(r.j_class for r in reports)
    if j < 0:
        raise InvariantViolation(f"negative rank jump {j}")
    return RankJumpReport(rl.beta, face_volume(m.faces.full, m.faces), reports, j)


# ---------------------------------------------------------------------------
# closed forms


def simple_jump_closed_form(m: MonoidModule, beta: Sequence) -> Optional[int]:
    """Sum of n (codim F - 1) vol F when every class is simple, else None."""
    total = 0
    for page in pages(m, beta):
        if not page.is_simple():
            return None
        f = page.vertex_faces[0]
        total += page.counts[0][0] * (f.codim - 1) * _vol(page, f)
    return total


def two_vertex_constant(page: CellularPage) -> int:
    f1, f2 = page.vertex_faces
    g = page.cell_faces[1][0]
    span = _span_codim(page, set(f1.columns) | set(f2.columns))
    return (comb(g.codim, 2) - g.codim + 1 - comb(f1.codim, 2) - comb(f2.codim, 2)
            + comb(span, 2))


def two_component_closed_form(m: MonoidModule, beta: Sequence) -> Optional[int]:
    """The two-vertex formula per class, simple classes by the one-vertex formula.

    Returns None if some class has more than two vertices.
    """
    total = 0
    for page in pages(m, beta):
        if page.is_simple():
            f = page.vertex_faces[0]
            total += page.counts[0][0] * (f.codim - 1) * _vol(page, f)
        elif len(page.vertex_faces) == 2:
            total += page_two_vertex_value(page)
        else:
            return None
    return total


def page_two_vertex_value(page: CellularPage) -> int:
    (n1, n2), (ng,) = page.counts[0], page.counts[1]
    f1, f2 = page.vertex_faces
    g = page.cell_faces[1][0]
    return (n1 * (f1.codim - 1) * _vol(page, f1) + n2 * (f2.codim - 1) * _vol(page, f2)
            + ng * two_vertex_constant(page) * _vol(page, g))
