"""Saito's sets E_tau(beta) and isomorphism of hypergeometric systems.

E_tau(beta) collects the cosets lambda + Z tau with lambda in Q tau and
beta - lambda in NA + Z tau. The candidates lambda = beta - v run over the
Z tau-cosets v of integer points in beta + Q tau, so E_tau(beta) is the
complement of beta minus the ranking orbit representatives on tau.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cone import ConeFace
from .lattice import lattice_index
from .ranking import orbit_representatives, parse_rational_vector, slice_cosets
from .semigroup import MonoidModule, mod_face_membership


def _require_semigroup(m: MonoidModule) -> None:
    if not m.is_semigroup:
        raise ValueError("isomorphism classes are only defined for M = NA")


def _lam_key(beta: Sequence[Fraction], v: Sequence, tau: ConeFace) -> tuple[Fraction, ...]:
    lam = tuple(b - x for b, x in zip(beta, v))
    return tuple(Fraction(x) for x in tau.span_lattice.reduce(lam))


def e_tau(m: MonoidModule, beta: Sequence, tau: ConeFace) -> frozenset[tuple[Fraction, ...]]:
    """E_tau(beta) as canonical representatives of lambda modulo Z tau."""
    _require_semigroup(m)
    beta = parse_rational_vector(beta)
    out = set()
    for c in slice_cosets(beta, tau):
        v = tuple(int(x) for x in c.basepoint)
        if mod_face_membership(m, tau, v):
            out.add(_lam_key(beta, v, tau))
    return frozenset(out)


@dataclass(frozen=True)
class ComplementCount:
    e_size: int
    orbit_reps: int
    index: int
    slice_nonempty: bool

    def holds(self) -> bool:
        if not self.slice_nonempty:
            return self.e_size == 0 and self.orbit_reps == 0
        return self.e_size + self.orbit_reps == self.index


def complement_count(m: MonoidModule, beta: Sequence, tau: ConeFace) -> ComplementCount:
    """|E_tau(beta)|, the number of orbit representatives on tau, and [L_tau : Z tau].

    The two sets are counted independently: E_tau by membership of beta - lambda,
    the representatives by the ranking coset enumeration.
    """
    beta = parse_rational_vector(beta)
    cosets = slice_cosets(beta, tau)
    idx = lattice_index(tau.saturated_lattice, tau.span_lattice) if tau.dim else 1
    return ComplementCount(len(e_tau(m, beta, tau)), len(orbit_representatives(m, beta, tau)),
                           idx, bool(cosets))


@dataclass(frozen=True)
class IsomSignature:
    beta: tuple[Fraction, ...]
    per_face: tuple[tuple[tuple[int, ...], frozenset], ...]

    def as_dict(self) -> dict[tuple[int, ...], frozenset]:
        return dict(self.per_face)

    def to_json(self) -> dict:
        return {
            "beta": [_fmt(x) for x in self.beta],
            "per_face": {",".join(map(str, cols)): sorted([_fmt(x) for x in lam] for lam in s)
                         for cols, s in self.per_face},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def isom_signature(m: MonoidModule, beta: Sequence) -> IsomSignature:
    beta = parse_rational_vector(beta)
    return IsomSignature(beta, tuple((f.columns, e_tau(m, beta, f)) for f in m.faces.faces))


def distinguishing_face(m: MonoidModule, beta: Sequence, beta2: Sequence) -> Optional[ConeFace]:
    """A face whose E sets differ, or None when the systems are isomorphic."""
    _require_semigroup(m)
    beta, beta2 = parse_rational_vector(beta), parse_rational_vector(beta2)
    if len(beta) != m.d or len(beta2) != m.d:
        raise ValueError("parameter has wrong length")
    if any((x - y).denominator != 1 for x, y in zip(beta, beta2)):
        # E_A alone already differs: beta - beta' must lie in ZA = Z^d
        return m.faces.full
    for f in m.faces.faces:
        if e_tau(m, beta, f) != e_tau(m, beta2, f):
            return f
    return None


def systems_isomorphic(m: MonoidModule, beta: Sequence, beta2: Sequence) -> bool:
    return distinguishing_face(m, beta, beta2) is None
